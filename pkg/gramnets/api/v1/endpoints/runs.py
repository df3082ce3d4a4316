from typing import List

from fastapi import APIRouter, HTTPException, Query, status
from fastapi.responses import Response

from gramnets.core.errors import RunNotFoundError
from gramnets.crud import crud_run
from gramnets.models.reports import MetricReport
from gramnets.models.run import RunManifest, RunSummary, TraceRow

router = APIRouter()


@router.get("", response_model=List[RunSummary])
async def list_runs(skip: int = Query(0, ge=0), limit: int = Query(100, ge=1, le=1000)):
    """
    Lists runs under the configured output root, oldest first.

    Args:
        skip (int): Number of runs to skip for pagination.
        limit (int): Maximum number of runs to return.
    """
    return [RunSummary.from_manifest(m) for m in crud_run.list_runs(skip=skip, limit=limit)]


@router.get("/{run_id}", response_model=RunManifest)
async def get_run(run_id: str):
    """
    Returns the manifest of one run.

    Raises:
        HTTPException: 404 Not Found if the run does not exist.
    """
    try:
        return crud_run.read_manifest(run_id)
    except RunNotFoundError as exc:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(exc))


@router.get("/{run_id}/metrics", response_model=MetricReport)
async def get_metrics(run_id: str):
    """Metric report of a run, keyed by its run id."""
    try:
        return crud_run.read_metrics(run_id)
    except RunNotFoundError as exc:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(exc))


@router.get("/{run_id}/trace", response_model=List[TraceRow])
async def get_trace(run_id: str, skip: int = Query(0, ge=0), limit: int = Query(1000, ge=1, le=100000)):
    try:
        return crud_run.read_trace_rows(run_id, skip=skip, limit=limit)
    except RunNotFoundError as exc:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(exc))


@router.get("/{run_id}/plots", response_model=List[str])
async def list_plots(run_id: str):
    try:
        return crud_run.list_plots(run_id)
    except RunNotFoundError as exc:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(exc))


@router.get("/{run_id}/plots/{name}")
async def get_plot(run_id: str, name: str):
    """Serves one SVG written by `gramnets plot`."""
    try:
        svg = crud_run.read_plot(run_id, name)
    except RunNotFoundError as exc:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(exc))
    return Response(content=svg, media_type="image/svg+xml")
