"""
Read-only HTTP access to run artifacts.
"""
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from gramnets import __version__
from gramnets.api.v1.endpoints import runs
from gramnets.core.config import settings

# --- FastAPI Application Setup ---
app = FastAPI(
    title=settings.PROJECT_NAME,
    description="Run manifests, metrics, traces and plots of gramnets experiments",
    version=__version__,
    openapi_url=f"{settings.API_V1_STR}/openapi.json",
    docs_url="/docs",
    redoc_url="/redoc",
)

# --- CORS Configuration ---
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ORIGINS,
    allow_credentials=False,
    allow_methods=["GET"],
    allow_headers=["*"],
)

# --- API Routers ---
app.include_router(
    runs.router,
    prefix=f"{settings.API_V1_STR}/runs",
    tags=["runs"]
)


# --- Root Endpoint ---
@app.get("/", tags=["Root"])
async def root():
    """Root endpoint that indicates the service is running."""
    return {
        "message": f"{settings.PROJECT_NAME} is running!",
        "status": "healthy",
        "version": __version__,
        "output_root": str(settings.OUTPUT_ROOT),
    }
