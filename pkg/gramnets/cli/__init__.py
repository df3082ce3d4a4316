from gramnets.cli.main import cli

__all__ = ["cli"]
