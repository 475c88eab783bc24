"""HTTP facade for the operator console and batch jobs.

Thin handlers over the workspace operations: every response is a plain
document with a schema_version field, handlers are synchronous (desk-scale
requests complete in seconds), and each request leaves a job record for
audit. Domain errors map onto 4xx statuses; data writes happen through the
store's atomic single-writer transactions, so a failed request leaves the
store unchanged.
"""

from __future__ import annotations

import datetime as dt
import os
from typing import Optional

from fastapi import FastAPI, File, HTTPException, Query, UploadFile
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import gateway, market, metrics, ops, qc
from .plant import PlantConfigError


class OfferRequest(BaseModel):
    operation: str = "offer"
    date: Optional[dt.date] = None
    availability: float = Field(ge=0)
    plant_config_id: str = "elpaso"
    gfs_source: str
    historical_source: Optional[str] = None
    temperature_model: str = "sapm"


class RedispatchRequest(BaseModel):
    date: dt.date
    margin: float = market.DEFAULT_MARGIN
    plant_config_id: str = "elpaso"
    path_daycast: Optional[str] = None
    path_hourcast: Optional[str] = None
    path_instacast: Optional[str] = None
    historical_source: Optional[str] = None


class BaselineRequest(BaseModel):
    issue_time: dt.datetime
    series_id: Optional[str] = None
    plant_config_id: str = "elpaso"


class SimulateRequest(BaseModel):
    plant_config_id: str = "elpaso"
    series_id: Optional[str] = None
    temperature_model: str = "sapm"


_ERROR_STATUS = (
    (ops.NotFound, 404),
    (gateway.HeaderMismatch, 400),
    (gateway.DuplicateStamp, 409),
    (gateway.EmptyFile, 400),
    (gateway.BadTimestamp, 400),
    (gateway.GatewayError, 400),
    (market.WrongPeriodCount, 422),
    (metrics.UnknownOption, 400),
    (metrics.InsufficientRuns, 409),
    (qc.InsufficientHistory, 409),
    (qc.MisalignedIssueTime, 422),
    (PlantConfigError, 400),
    (ValueError, 400),
)


def _status_for(exc: Exception) -> int:
    for klass, status in _ERROR_STATUS:
        if isinstance(exc, klass):
            return status
    return 500


def create_app(workspace_root, console_dir=None) -> FastAPI:
    ws = ops.Workspace.open(workspace_root)
    app = FastAPI(title="pvtwin", version="0.1.0")
    if console_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/console", StaticFiles(directory=console_dir, html=True),
                  name="console")

    # static-token gate; set PVTWIN_API_TOKEN to enable
    required_token = os.environ.get("PVTWIN_API_TOKEN", "")
    if required_token:
        @app.middleware("http")
        async def _check_token(request, call_next):
            if request.url.path.startswith("/console"):
                return await call_next(request)
            if request.headers.get("x-api-token") != required_token:
                return JSONResponse(status_code=401,
                                    content={"detail": "invalid API token"})
            return await call_next(request)

    def run_job(kind: str, fn):
        job_id = ws.record_job(kind, "running")
        try:
            result = fn()
        except Exception as exc:
            ws.record_job(kind, "failed", result=str(exc), job_id=job_id)
            if _status_for(exc) == 500:
                raise
            raise HTTPException(status_code=_status_for(exc),
                                detail=str(exc)) from exc
        locator = result.get("csv_locator") if isinstance(result, dict) else None
        ws.record_job(kind, "done", result=locator, job_id=job_id)
        return result

    @app.get("/plants")
    def plants():
        return {"schema_version": ops.SCHEMA_VERSION, "plants": ws.plant_ids()}

    @app.get("/jobs")
    def jobs():
        return {"schema_version": ops.SCHEMA_VERSION, "jobs": ws.jobs()}

    @app.post("/data/upload")
    def upload(file: UploadFile = File(...), format: Optional[str] = None):
        fmt = format or ("xlsx" if (file.filename or "").lower()
                         .endswith(".xlsx") else "csv")
        data = file.file.read()
        return run_job(
            "ingest",
            lambda: ops.upload_measurements(ws, data, fmt).to_document())

    @app.post("/operations/offer")
    def offer(request: OfferRequest):
        return run_job(
            request.operation if request.operation == "offer" else "pre_offer",
            lambda: ops.run_offer(
                ws, operation=request.operation,
                date_of_interest=request.date,
                availability_mw=request.availability,
                plant_config_id=request.plant_config_id,
                path_gfs=request.gfs_source,
                path_historical=request.historical_source,
                temperature_model=request.temperature_model).to_document())

    @app.post("/operations/redispatch")
    def redispatch(request: RedispatchRequest):
        casts = {"daycast": request.path_daycast,
                 "hourcast": request.path_hourcast,
                 "instacast": request.path_instacast}
        return run_job(
            "redispatch",
            lambda: ops.run_redispatch(
                ws, date=request.date, margin=request.margin,
                plant_config_id=request.plant_config_id,
                cast_paths=casts,
                path_historical=request.historical_source).to_document())

    @app.get("/metrics/heatmap")
    def heatmap(option: int = Query(...), path_models: str = Query(...),
                path_horizons: str = Query(...),
                path_irradiance: str = Query(...)):
        return run_job(
            "heatmap",
            lambda: ops.run_heatmap(ws, option, path_models, path_horizons,
                                    path_irradiance).to_document())

    @app.post("/forecast/baseline")
    def baseline(request: BaselineRequest):
        return run_job(
            "forecast",
            lambda: ops.run_baseline(
                ws, request.issue_time, series_id=request.series_id,
                plant_config_id=request.plant_config_id).to_document())

    @app.post("/operations/simulate")
    def simulate(request: SimulateRequest):
        return run_job(
            "simulate",
            lambda: ops.run_simulate(
                ws, plant_config_id=request.plant_config_id,
                series_id=request.series_id,
                temperature_model=request.temperature_model).to_document())

    return app
