"""Workspace-level operations shared by the CLI and the HTTP service.

A workspace is a directory with the store database, downloads, generated
artifacts and plant configuration documents. Every operation here is a
pure function of the workspace state plus its arguments, and both entry
points produce their file artifacts through the same code paths, so the
CLI and HTTP twins emit byte-identical outputs.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from . import gateway, market, metrics, power, qc
from .plant import PlantSystem, elpaso_architecture, load_plant_architecture

SCHEMA_VERSION = "1"
#: fixed imputation seed so stored series are reproducible run-to-run
QC_SEED = 1337

JOB_KINDS = ("forecast", "offer", "pre_offer", "redispatch", "simulate",
             "heatmap", "ingest")


class NotFound(KeyError):
    pass


@dataclass
class Workspace:
    root: Path

    @staticmethod
    def open(root) -> "Workspace":
        ws = Workspace(root=Path(root))
        for sub in ("db", "downloads", "artifacts", "json"):
            (ws.root / sub).mkdir(parents=True, exist_ok=True)
        return ws

    @property
    def store_path(self) -> Path:
        return self.root / "db" / "store.db"

    def store(self) -> gateway.StoreHandle:
        return gateway.StoreHandle(self.store_path)

    def plant(self, plant_config_id: str = "elpaso",
              path=None) -> PlantSystem:
        if path is not None:
            p = Path(path)
            if not p.exists():
                raise NotFound(f"plant configuration {path} not found")
            return load_plant_architecture(p)
        candidate = self.root / "json" / f"architecture_{plant_config_id}.json"
        if candidate.exists():
            return load_plant_architecture(candidate)
        if plant_config_id == "elpaso":
            return elpaso_architecture()
        raise NotFound(f"no plant configuration {plant_config_id!r}")

    def plant_ids(self) -> list[str]:
        ids = {"elpaso"}
        for p in (self.root / "json").glob("architecture_*.json"):
            ids.add(p.stem.removeprefix("architecture_"))
        return sorted(ids)

    def write_artifact(self, name: str, text: str) -> str:
        path = self.root / "artifacts" / name
        path.write_text(text)
        return str(path.relative_to(self.root))

    def record_job(self, kind: str, status: str, result: Optional[str] = None,
                   job_id: Optional[str] = None) -> str:
        job_id = job_id or uuid.uuid4().hex[:12]
        now = pd.Timestamp.utcnow().isoformat()
        with self.store() as handle, handle.write_lock() as conn:
            conn.execute(
                "CREATE TABLE IF NOT EXISTS jobs (id TEXT PRIMARY KEY, "
                "kind TEXT, status TEXT, submitted TEXT, completed TEXT, "
                "result TEXT)")
            conn.execute(
                "INSERT INTO jobs VALUES (?, ?, ?, ?, NULL, NULL) "
                "ON CONFLICT(id) DO UPDATE SET status=excluded.status",
                (job_id, kind, status, now))
            if status in ("done", "failed"):
                conn.execute(
                    "UPDATE jobs SET completed=?, result=? WHERE id=?",
                    (now, result, job_id))
        return job_id

    def jobs(self) -> list[dict]:
        with self.store() as handle:
            if "jobs" not in handle.tables():
                return []
            rows = handle._conn.execute(
                "SELECT id, kind, status, submitted, completed, result "
                "FROM jobs ORDER BY submitted").fetchall()
        keys = ("id", "kind", "status", "submitted", "completed", "result")
        return [dict(zip(keys, row)) for row in rows]


# ---------------------------------------------------------------------------
# measurement upload

@dataclass(frozen=True)
class UploadSummary:
    series_id: str
    rows: int
    resolution_minutes: int
    missing_percent: Mapping[str, float]
    clip_counts: Mapping[str, int]

    def to_document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "series_id": self.series_id,
            "rows": self.rows,
            "resolution_minutes": self.resolution_minutes,
            "missing_percent": dict(self.missing_percent),
            "clip_counts": dict(self.clip_counts),
        }


def upload_measurements(ws: Workspace, data: bytes,
                        format: str = "csv") -> UploadSummary:
    """Ingest a measurement file, apply QC, and persist the clean series.

    The stored series is gap-filled (seeded, reproducible) and clipped;
    the summary reports the pre-QC missing percentages and clip counts.
    """
    series = gateway.ingest_measurements(data, format)
    series = qc.combine_ghi_sensors(series)
    missing = qc.missing_report(series)
    clips = qc.clip_report(series)
    clean = qc.clip_physical(qc.impute_slotwise_normal(series, seed=QC_SEED))
    series_id = hashlib.sha256(data).hexdigest()[:12]
    with ws.store() as handle:
        gateway.store_series(handle, f"measurements_{series_id}", clean.data)
        gateway.store_series(handle, "measurements_latest", clean.data)
    return UploadSummary(series_id=series_id, rows=len(clean),
                         resolution_minutes=clean.resolution_minutes,
                         missing_percent=missing, clip_counts=clips)


def load_measurements(ws: Workspace, series_id: Optional[str] = None
                      ) -> qc.WeatherSeries:
    table = f"measurements_{series_id}" if series_id else "measurements_latest"
    with ws.store() as handle:
        try:
            frame = gateway.query_series(handle, table)
        except gateway.TableMissing as exc:
            raise NotFound(str(exc)) from exc
    return qc.WeatherSeries.from_frame(frame)


# ---------------------------------------------------------------------------
# GFS / intraday day weather

def _slot_profile(historical: Optional[qc.WeatherSeries], column: str,
                  default: float) -> Mapping[int, float]:
    if historical is None or column not in historical.data.columns:
        return {h: default for h in range(24)}
    by_hour = historical.data[column].groupby(historical.index.hour).mean()
    return {h: float(by_hour.get(h, default)) for h in range(24)}


def day_weather_from_ghi(date: dt.date, ghi: pd.Series,
                         historical: Optional[qc.WeatherSeries]
                         ) -> qc.WeatherSeries:
    """Hourly simulation inputs for one market day.

    The forecast source supplies GHI only, at hourly or coarser
    resolution; coarser series are time-interpolated onto the hourly
    grid (no extrapolation past their coverage). Ambient temperature
    (and wind, pressure when available) are completed from the
    historical series' hour-of-day profile.
    """
    index = pd.date_range(pd.Timestamp(date), periods=24, freq="1h")
    if ghi is not None and len(ghi):
        merged = ghi.reindex(ghi.index.union(index)).interpolate(
            method="time", limit_area="inside")
        ghi_day = merged.reindex(index).fillna(0.0)
    else:
        ghi_day = pd.Series(0.0, index=index)
    t_prof = _slot_profile(historical, "t_amb", 25.0)
    ws_prof = _slot_profile(historical, "wind_speed", 1.0)
    p_prof = _slot_profile(historical, "pressure", 1010.0)
    hours = index.hour
    frame = pd.DataFrame({
        "ghi": np.maximum(ghi_day.to_numpy(float), 0.0),
        "t_amb": [t_prof[h] for h in hours],
        "wind_speed": [ws_prof[h] for h in hours],
        "pressure": [p_prof[h] for h in hours],
    }, index=index)
    return qc.WeatherSeries.from_frame(frame, resolution_minutes=60)


def hourly_plant_power_mw(system: PlantSystem, weather: qc.WeatherSeries,
                          temperature_model: str = "sapm") -> list[float]:
    """Plant point-of-interconnection power, MW per period 1..24."""
    production = power.simulate_plant(system, weather, temperature_model)
    return [float(v) / 1e6 for v in production.poi_ac]


# ---------------------------------------------------------------------------
# offer / pre-offer

@dataclass(frozen=True)
class OfferArtifact:
    operation: str
    date: dt.date
    availability_mw: float
    offer: market.OfferRow
    csv_text: str
    csv_locator: str

    def to_document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "operation": self.operation,
            "date": self.date.isoformat(),
            "availability_mw": self.availability_mw,
            "period_values_mw": list(self.offer.period_values),
            "csv_locator": self.csv_locator,
        }


def _resolve_path(ws: Workspace, source) -> Path:
    path = Path(source)
    if not path.is_absolute():
        candidate = ws.root / path
        if candidate.exists():
            return candidate
    return path


def _load_ghi_source(ws: Workspace, source: str) -> pd.Series:
    path = _resolve_path(ws, source)
    if not path.exists():
        raise NotFound(f"GHI source {source} not found")
    return gateway.read_ghi_csv(path)


def _load_historical(ws: Workspace, source: Optional[str]
                     ) -> Optional[qc.WeatherSeries]:
    if source is None:
        return None
    path = _resolve_path(ws, source)
    if not path.exists():
        raise NotFound(f"historical source {source} not found")
    series = gateway.ingest_measurements(path.read_bytes(), "csv")
    series = qc.combine_ghi_sensors(series)
    return qc.clip_physical(qc.impute_slotwise_normal(series, seed=QC_SEED))


def run_offer(ws: Workspace, operation: str = "offer",
              date_of_interest: Optional[dt.date] = None,
              availability_mw: float = 0.0,
              plant_config_id: str = "elpaso",
              path_json: Optional[str] = None,
              path_gfs: str = "",
              path_historical: Optional[str] = None,
              today: Optional[dt.date] = None,
              temperature_model: str = "sapm") -> OfferArtifact:
    """Build, persist, and export the hourly offer for a market day."""
    if operation not in ("offer", "pre_offer"):
        raise ValueError("operation must be offer or pre_offer")
    date = market.resolve_operation_date(today or dt.date.today(), operation,
                                         date_of_interest)
    system = ws.plant(plant_config_id, path_json)
    ghi = _load_ghi_source(ws, path_gfs)
    historical = _load_historical(ws, path_historical)
    weather = day_weather_from_ghi(date, ghi, historical)
    powers = hourly_plant_power_mw(system, weather, temperature_model)
    offer = market.build_offer(date, powers, availability_mw)
    csv_text = market.emit_offer_csv(offer)
    locator = ws.write_artifact(f"{operation}_{date.isoformat()}.csv", csv_text)

    frame = pd.DataFrame({
        "mw": offer.period_values,
        "availability_mw": [availability_mw] * market.PERIODS,
    }, index=pd.date_range(pd.Timestamp(date), periods=24, freq="1h"))
    with ws.store() as handle:
        gateway.store_series(handle, f"offer_{date.isoformat()}", frame)
    return OfferArtifact(operation=operation, date=date,
                         availability_mw=availability_mw, offer=offer,
                         csv_text=csv_text, csv_locator=locator)


def load_committed_offer(ws: Workspace, date: dt.date
                         ) -> tuple[market.OfferRow, float]:
    with ws.store() as handle:
        try:
            frame = gateway.query_series(handle, f"offer_{date.isoformat()}")
        except gateway.TableMissing as exc:
            raise NotFound(f"no committed offer for {date}") from exc
    row = market.OfferRow(date=date,
                          period_values=tuple(frame["mw"].to_numpy(float)))
    return row, float(frame["availability_mw"].iloc[0])


# ---------------------------------------------------------------------------
# redispatch

@dataclass(frozen=True)
class RedispatchArtifact:
    date: dt.date
    margin: float
    decision: market.RedispatchDecision
    intraday_mw: list[float]
    csv_text: str
    csv_locator: str

    def to_document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "date": self.date.isoformat(),
            "margin": self.margin,
            "redispatch_required": self.decision.redispatch_required,
            "periods": [
                {"period": p.period, "committed_mw": p.committed_mw,
                 "intraday_mw": p.intraday_mw, "band_low": p.band_low,
                 "band_high": p.band_high, "outside_band": p.outside_band}
                for p in self.decision.periods
            ],
            "csv_locator": self.csv_locator,
        }


def run_redispatch(ws: Workspace, date: dt.date,
                   margin: float = market.DEFAULT_MARGIN,
                   plant_config_id: str = "elpaso",
                   path_json: Optional[str] = None,
                   cast_paths: Optional[Mapping[str, Optional[str]]] = None,
                   path_historical: Optional[str] = None,
                   temperature_model: str = "sapm") -> RedispatchArtifact:
    """Compare intraday forecasts against the committed offer.

    Each present sky-camera cast (daycast / hourcast / instacast) is run
    through the plant model to hourly power, derated by the committed
    availability; per period the cast mean is compared against the
    committed band.
    """
    committed, availability = load_committed_offer(ws, date)
    system = ws.plant(plant_config_id, path_json)
    historical = _load_historical(ws, path_historical)

    runs: dict[str, dict[int, float]] = {}
    for cast, source in (cast_paths or {}).items():
        if source is None:
            continue
        ghi = _load_ghi_source(ws, source)
        day = ghi[(ghi.index >= pd.Timestamp(date))
                  & (ghi.index < pd.Timestamp(date) + pd.Timedelta(days=1))]
        if day.empty:
            continue
        weather = day_weather_from_ghi(date, ghi, historical)
        powers = hourly_plant_power_mw(system, weather, temperature_model)
        covered = {stamp.hour + 1 for stamp in day.index}
        runs[cast] = {
            p: min(max(powers[p - 1], 0.0), availability)
            for p in range(1, market.PERIODS + 1) if p in covered
        }

    intraday = market.aggregate_intraday(runs, committed)
    decision = market.redispatch_check(committed, intraday, margin)
    csv_text = market.emit_redispatch_csv(date, committed.period_values,
                                          intraday)
    locator = ws.write_artifact(f"redispatch_{date.isoformat()}.csv", csv_text)
    return RedispatchArtifact(date=date, margin=margin, decision=decision,
                              intraday_mw=list(intraday), csv_text=csv_text,
                              csv_locator=locator)


# ---------------------------------------------------------------------------
# heatmap

@dataclass(frozen=True)
class HeatmapArtifact:
    grid: metrics.HeatmapGrid
    values_csv: str
    legend_csv: str
    values_locator: str
    legend_locator: str

    def to_document(self) -> dict:
        doc = self.grid.to_document()
        doc["schema_version"] = SCHEMA_VERSION
        doc["values_locator"] = self.values_locator
        doc["legend_locator"] = self.legend_locator
        return doc


def run_heatmap(ws: Workspace, option: int, path_models: str,
                path_horizons: str, path_irradiance: str) -> HeatmapArtifact:
    """Best-model heatmap over the ingested model runs."""
    runs = gateway.ingest_model_runs(_resolve_path(ws, path_models),
                                     _resolve_path(ws, path_horizons))
    observed = _load_ghi_source(ws, path_irradiance)
    by_model: dict[str, list[qc.ForecastSeries]] = {}
    for model_id, run in runs:
        by_model.setdefault(model_id, []).append(run)
    grid = metrics.best_model_heatmap(by_model, observed, option)
    values_csv, legend_csv = metrics.heatmap_to_csv(grid)
    v_loc = ws.write_artifact(f"heatmap_option{option}.csv", values_csv)
    l_loc = ws.write_artifact(f"heatmap_option{option}_models.csv", legend_csv)
    return HeatmapArtifact(grid=grid, values_csv=values_csv,
                           legend_csv=legend_csv, values_locator=v_loc,
                           legend_locator=l_loc)


# ---------------------------------------------------------------------------
# baseline forecast

@dataclass(frozen=True)
class BaselineArtifact:
    issue_time: pd.Timestamp
    forecast: qc.ForecastSeries
    hourly: qc.ForecastSeries

    def to_document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "issue_time": self.issue_time.isoformat(),
            "step_minutes": self.forecast.step_minutes,
            "values": list(self.forecast.values),
            "hourly_values": list(self.hourly.values),
        }


def run_baseline(ws: Workspace, issue_time,
                 series_id: Optional[str] = None,
                 plant_config_id: str = "elpaso") -> BaselineArtifact:
    """Clear-sky persistence forecast from the stored QC'd measurements."""
    history = load_measurements(ws, series_id)
    system = ws.plant(plant_config_id)
    location = system.conversion_units[0].location
    issue = pd.Timestamp(issue_time)
    forecast = qc.baseline_smart_persistence(history, location, issue)
    hourly = qc.hourly_average(forecast)
    frame = pd.DataFrame({"ghi": forecast.values},
                         index=forecast.target_times)
    with ws.store() as handle:
        gateway.store_series(handle,
                             f"baseline_{issue.strftime('%Y%m%dT%H%M')}",
                             frame)
    return BaselineArtifact(issue_time=issue, forecast=forecast,
                            hourly=hourly)


# ---------------------------------------------------------------------------
# simulation export

@dataclass(frozen=True)
class SimulationArtifact:
    csv_locator: str
    energy_csv_locator: str
    rows: int
    poi_peak_mw: float

    def to_document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "csv_locator": self.csv_locator,
            "energy_csv_locator": self.energy_csv_locator,
            "rows": self.rows,
            "poi_peak_mw": self.poi_peak_mw,
        }


def run_simulate(ws: Workspace, plant_config_id: str = "elpaso",
                 path_json: Optional[str] = None,
                 series_id: Optional[str] = None,
                 temperature_model: str = "sapm") -> SimulationArtifact:
    """Full-chain production export for the stored measurement series."""
    system = ws.plant(plant_config_id, path_json)
    weather = load_measurements(ws, series_id)
    production = power.simulate_plant(system, weather, temperature_model)
    locator = ws.write_artifact("production.csv",
                                power.production_to_csv(production))
    energy_locator = ws.write_artifact(
        "production_energy.csv", power.energy_summary_to_csv(production))
    return SimulationArtifact(csv_locator=locator,
                              energy_csv_locator=energy_locator,
                              rows=len(production.index),
                              poi_peak_mw=float(production.poi_ac.max() / 1e6))
