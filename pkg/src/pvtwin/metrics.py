"""Forecast verification: error metrics, confidence intervals, skill,
best-model heatmaps.

Error conventions: errors are predicted minus observed, percentage errors
are guarded against near-zero observations, and metrics may be restricted
to the plant's operating hours (06:00 inclusive to 18:00 exclusive).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from .qc import ForecastSeries

#: observations below this level (W/m^2) are excluded from MAPE
MAPE_GUARD = 10.0

DAYLIGHT_START_HOUR = 6
DAYLIGHT_END_HOUR = 18

HEATMAP_METRICS = {1: "mae", 2: "rmse", 3: "mape"}


class LengthMismatch(ValueError):
    pass


class EmptyAfterFilter(ValueError):
    pass


class ZeroReference(ValueError):
    pass


class InsufficientRuns(ValueError):
    pass


class UnknownOption(ValueError):
    pass


@dataclass(frozen=True)
class MetricSet:
    mae: float                 # W/m^2
    rmse: float                # W/m^2
    mbe: float                 # W/m^2
    nrmse: float               # percent of mean observation
    mape: float                # percent
    n: int


@dataclass(frozen=True)
class ConfidenceHalfWidths:
    """95% t-interval half-widths for the per-sample metrics."""

    mae: float
    rmse: float
    mbe: float
    mape: float


@dataclass(frozen=True)
class HorizonMetrics:
    horizon: int
    metrics: MetricSet
    ci95: ConfidenceHalfWidths


@dataclass(frozen=True)
class HorizonBreakdown:
    step_minutes: int
    horizons: tuple[HorizonMetrics, ...]


def daylight_mask(index: pd.DatetimeIndex) -> np.ndarray:
    hours = index.hour
    return (hours >= DAYLIGHT_START_HOUR) & (hours < DAYLIGHT_END_HOUR)


def _metric_values(observed: np.ndarray, predicted: np.ndarray) -> MetricSet:
    errors = predicted - observed
    mae = float(np.mean(np.abs(errors)))
    rmse = float(np.sqrt(np.mean(errors ** 2)))
    mbe = float(np.mean(errors))
    mean_obs = float(np.mean(observed))
    nrmse = float(rmse / mean_obs * 100.0) if mean_obs > 0 else float("nan")
    guarded = observed > MAPE_GUARD
    if guarded.any():
        mape = float(np.mean(np.abs(errors[guarded]) / observed[guarded]) * 100.0)
    else:
        mape = float("nan")
    return MetricSet(mae=mae, rmse=rmse, mbe=mbe, nrmse=nrmse, mape=mape,
                     n=len(observed))


def compute_metrics(observed, predicted, daylight_filter: bool = False) -> MetricSet:
    """Error metrics for aligned observation/prediction series.

    With ``daylight_filter`` the series must be time-indexed and only
    stamps within operating hours are scored.
    """
    if len(observed) != len(predicted):
        raise LengthMismatch(
            f"observed has {len(observed)} samples, predicted {len(predicted)}")
    obs = np.asarray(observed, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if daylight_filter:
        if not isinstance(observed, pd.Series):
            raise ValueError("daylight filtering needs a time-indexed series")
        keep = daylight_mask(observed.index)
        obs, pred = obs[keep], pred[keep]
    if len(obs) == 0:
        raise EmptyAfterFilter("no samples left to score")
    return _metric_values(obs, pred)


def skill_score(model: MetricSet, reference: MetricSet) -> float:
    """Relative RMSE improvement over a reference forecast, percent."""
    if reference.rmse <= 0:
        raise ZeroReference("reference RMSE must be positive")
    return (1.0 - model.rmse / reference.rmse) * 100.0


def _half_width(samples: np.ndarray) -> float:
    n = len(samples)
    if n < 2:
        return float("nan")
    sd = float(np.std(samples, ddof=1))
    return float(stats.t.ppf(0.975, n - 1) * sd / np.sqrt(n))


def _pool_pairs(runs: Sequence[ForecastSeries], observed: pd.Series,
                horizon: int) -> tuple[np.ndarray, np.ndarray]:
    obs, pred = [], []
    for run in runs:
        target = run.target_times[horizon - 1]
        if target in observed.index:
            value = observed.loc[target]
            if not np.isnan(value):
                obs.append(float(value))
                pred.append(run.values[horizon - 1])
    return np.asarray(obs), np.asarray(pred)


def horizon_breakdown(runs: Sequence[ForecastSeries],
                      observed: pd.Series) -> HorizonBreakdown:
    """Pooled per-horizon metrics with 95% t-interval half-widths.

    The half-widths are computed on the per-sample statistics behind each
    metric (absolute errors for MAE, signed for MBE, squared for RMSE via
    the delta method, percentage for MAPE).
    """
    if len(runs) < 2:
        raise InsufficientRuns("need at least two forecast runs per horizon")
    steps = {(run.step_minutes, len(run.values)) for run in runs}
    if len(steps) != 1:
        raise ValueError("forecast runs have mixed resolutions")
    step_minutes, n_horizons = steps.pop()

    horizons = []
    for h in range(1, n_horizons + 1):
        obs, pred = _pool_pairs(runs, observed, h)
        if len(obs) < 2:
            raise InsufficientRuns(
                f"horizon {h}: need at least two matched samples")
        metrics = _metric_values(obs, pred)
        errors = pred - obs
        abs_err = np.abs(errors)
        sq_err = errors ** 2
        hw_mse = _half_width(sq_err)
        hw_rmse = hw_mse / (2.0 * metrics.rmse) if metrics.rmse > 0 else 0.0
        guarded = obs > MAPE_GUARD
        hw_mape = (_half_width(abs_err[guarded] / obs[guarded] * 100.0)
                   if guarded.sum() >= 2 else float("nan"))
        horizons.append(HorizonMetrics(
            horizon=h, metrics=metrics,
            ci95=ConfidenceHalfWidths(mae=_half_width(abs_err),
                                      rmse=hw_rmse,
                                      mbe=_half_width(errors),
                                      mape=hw_mape)))
    return HorizonBreakdown(step_minutes=step_minutes,
                            horizons=tuple(horizons))


@dataclass(frozen=True)
class HeatmapCell:
    hour: int
    horizon: int
    model: Optional[str]       # None marks an empty cell
    value: Optional[float]
    per_model: tuple[tuple[str, float], ...] = ()


@dataclass(frozen=True)
class HeatmapGrid:
    metric: str
    option: int
    hours: tuple[int, ...]
    horizons: tuple[int, ...]
    cells: tuple[HeatmapCell, ...]

    def cell(self, hour: int, horizon: int) -> HeatmapCell:
        for c in self.cells:
            if c.hour == hour and c.horizon == horizon:
                return c
        raise KeyError((hour, horizon))

    def to_document(self) -> dict:
        return {
            "metric": self.metric,
            "option": self.option,
            "hours": list(self.hours),
            "horizons": list(self.horizons),
            "cells": [
                {"hour": c.hour, "horizon": c.horizon, "model": c.model,
                 "value": c.value,
                 "per_model": {m: v for m, v in c.per_model}}
                for c in self.cells
            ],
        }


def _cell_metric(obs: np.ndarray, pred: np.ndarray, metric: str) -> Optional[float]:
    if len(obs) == 0:
        return None
    m = _metric_values(obs, pred)
    value = getattr(m, metric)
    return None if np.isnan(value) else float(value)


def best_model_heatmap(model_runs: Mapping[str, Sequence[ForecastSeries]],
                       observed: pd.Series, option: int,
                       hours: Sequence[int] = tuple(range(6, 19)),
                       ) -> HeatmapGrid:
    """Best model per (hour of day, horizon) cell under the chosen metric.

    Option 1 scores MAE, 2 RMSE, 3 MAPE. The winner is the argmin; ties go
    to the lexicographically smaller model id. Cells without any matched
    pair are kept but marked empty.
    """
    if option not in HEATMAP_METRICS:
        raise UnknownOption(f"option must be one of {sorted(HEATMAP_METRICS)}")
    if len(model_runs) < 2:
        raise InsufficientRuns("need at least two models to compare")
    metric = HEATMAP_METRICS[option]
    n_horizons = max(len(run.values)
                     for runs in model_runs.values() for run in runs)
    horizons = tuple(range(1, n_horizons + 1))

    cells = []
    for hour in hours:
        for h in horizons:
            scores: list[tuple[str, float]] = []
            for model_id in sorted(model_runs):
                obs, pred = [], []
                for run in model_runs[model_id]:
                    if h > len(run.values):
                        continue
                    target = run.target_times[h - 1]
                    if target.hour == hour and target in observed.index:
                        value = observed.loc[target]
                        if not np.isnan(value):
                            obs.append(float(value))
                            pred.append(run.values[h - 1])
                value = _cell_metric(np.asarray(obs), np.asarray(pred), metric)
                if value is not None:
                    scores.append((model_id, value))
            if scores:
                winner = min(scores, key=lambda mv: (mv[1], mv[0]))
                cells.append(HeatmapCell(hour=hour, horizon=h,
                                         model=winner[0], value=winner[1],
                                         per_model=tuple(scores)))
            else:
                cells.append(HeatmapCell(hour=hour, horizon=h, model=None,
                                         value=None))
    return HeatmapGrid(metric=metric, option=option, hours=tuple(hours),
                       horizons=horizons, cells=tuple(cells))


def heatmap_to_csv(grid: HeatmapGrid) -> tuple[str, str]:
    """Value grid plus a sidecar legend naming the winner per cell."""
    header = "hour," + ",".join(str(h) for h in grid.horizons)
    value_rows, legend_rows = [header], [header]
    by_key = {(c.hour, c.horizon): c for c in grid.cells}
    for hour in grid.hours:
        vals, models = [str(hour)], [str(hour)]
        for h in grid.horizons:
            cell = by_key[(hour, h)]
            vals.append("" if cell.value is None else f"{cell.value:.4f}")
            models.append("" if cell.model is None else cell.model)
        value_rows.append(",".join(vals))
        legend_rows.append(",".join(models))
    return "\n".join(value_rows) + "\n", "\n".join(legend_rows) + "\n"
