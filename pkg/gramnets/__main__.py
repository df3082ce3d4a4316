from gramnets.cli.main import cli

cli(prog_name="gramnets")
