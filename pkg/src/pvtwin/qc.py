"""Ingest-side quality control for plant weather series.

Holds the canonical in-memory series types, missing-data accounting,
slot-wise normal gap filling, physical clipping, feature engineering, the
chronological train/validation/test split, hourly aggregation of
10-minute forecasts, and the clear-sky persistence reference forecaster.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from . import solar
from .plant import Location

#: Columns a weather series may carry (superset of the ingest format).
KNOWN_COLUMNS = (
    "ghi", "ghi_1", "ghi_2", "pressure", "t_amb", "t_module",
    "wind_speed", "wind_direction", "relative_humidity",
)

FORECAST_STEPS_10MIN = 36
FORECAST_STEPS_HOURLY = 6


class NonuniformSeries(ValueError):
    pass


class UnknownColumn(ValueError):
    pass


class InsufficientSlotData(ValueError):
    pass


class TooFewRows(ValueError):
    pass


class MisalignedIssueTime(ValueError):
    pass


class InsufficientHistory(ValueError):
    pass


@dataclass(frozen=True)
class WeatherSeries:
    """Timestamped meteorological records on a uniform grid.

    The index is naive plant-local time; missing cells are NaN.
    """

    data: pd.DataFrame
    resolution_minutes: int

    @staticmethod
    def from_frame(df: pd.DataFrame, resolution_minutes: Optional[int] = None
                   ) -> "WeatherSeries":
        if not isinstance(df.index, pd.DatetimeIndex):
            raise NonuniformSeries("index must be timestamps")
        unknown = sorted(set(df.columns) - set(KNOWN_COLUMNS))
        if unknown:
            raise UnknownColumn(f"unknown column(s): {', '.join(unknown)}")
        df = df.sort_index()
        if df.index.has_duplicates:
            raise NonuniformSeries("duplicate timestamps")
        if len(df) > 1:
            deltas = np.diff(df.index.view("int64")) / 60e9
            if resolution_minutes is None:
                resolution_minutes = int(deltas[0])
            if not np.all(deltas == resolution_minutes):
                raise NonuniformSeries(
                    f"timestamps not on a uniform {resolution_minutes}-minute grid")
        elif resolution_minutes is None:
            raise NonuniformSeries("cannot infer resolution from a single row")
        return WeatherSeries(df.astype(float), int(resolution_minutes))

    def __len__(self) -> int:
        return len(self.data)

    @property
    def index(self) -> pd.DatetimeIndex:
        return self.data.index


@dataclass(frozen=True)
class ForecastSeries:
    """Fixed-horizon GHI forecast issued at one timestamp."""

    issue_time: pd.Timestamp
    values: tuple[float, ...]
    step_minutes: int = 10

    def __post_init__(self):
        expected = {10: FORECAST_STEPS_10MIN, 60: FORECAST_STEPS_HOURLY}
        if self.step_minutes not in expected:
            raise ValueError("step_minutes must be 10 or 60")
        if len(self.values) != expected[self.step_minutes]:
            raise ValueError(
                f"expected {expected[self.step_minutes]} steps at "
                f"{self.step_minutes}-minute resolution, got {len(self.values)}")
        if any(v < 0 for v in self.values):
            raise ValueError("forecast values must be >= 0")

    @property
    def target_times(self) -> pd.DatetimeIndex:
        start = pd.Timestamp(self.issue_time)
        step = pd.Timedelta(minutes=self.step_minutes)
        return pd.DatetimeIndex([start + step * (h + 1)
                                 for h in range(len(self.values))])


@dataclass(frozen=True)
class PhysicalBounds:
    """Per-column clamp limits; plant-specific values may override."""

    ghi: tuple[float, float] = (0.0, 1300.0)
    t_amb: tuple[float, float] = (18.0, 45.0)
    wind_speed_min: float = 0.0

    def column_bounds(self, column: str) -> Optional[tuple[float, float]]:
        if column in ("ghi", "ghi_1", "ghi_2"):
            return self.ghi
        if column == "t_amb":
            return self.t_amb
        if column == "wind_speed":
            return (self.wind_speed_min, np.inf)
        return None


DEFAULT_BOUNDS = PhysicalBounds()


def missing_report(series: WeatherSeries) -> dict[str, float]:
    """Percent of missing cells per column."""
    n = len(series.data)
    if n == 0:
        return {c: 0.0 for c in series.data.columns}
    return {c: float(series.data[c].isna().sum()) / n * 100.0
            for c in series.data.columns}


def _slot_keys(index: pd.DatetimeIndex, slot_by: str):
    if slot_by == "time":
        return list(index.time)
    if slot_by == "month-time":
        return list(zip(index.month, index.time))
    raise ValueError("slot_by must be 'time' or 'month-time'")


def impute_slotwise_normal(series: WeatherSeries, seed: int,
                           slot_by: str = "time",
                           bounds: PhysicalBounds = DEFAULT_BOUNDS
                           ) -> WeatherSeries:
    """Fill gaps with draws from each time-of-day slot's normal fit.

    Values recorded at the same time of day (pooled across days) are
    treated as normally distributed; each missing cell gets one draw from
    its slot's fitted distribution, clipped to the physical bounds.
    Deterministic for a given seed, with per-column substreams so columns
    may be processed in any order. Slots with fewer than two samples fall
    back to linear interpolation along the column.
    """
    df = series.data.copy()
    keys = np.array(_slot_keys(df.index, slot_by), dtype=object)
    for col_idx, col in enumerate(df.columns):
        values = df[col]
        missing = values.isna()
        if not missing.any():
            continue
        rng = np.random.default_rng([seed, col_idx])
        grouped = values.groupby(keys)
        mu = grouped.mean()
        sigma = grouped.std(ddof=1)
        count = grouped.count()
        clamp = bounds.column_bounds(col)
        fallback_positions = []
        filled = values.to_numpy(copy=True)
        for pos in np.flatnonzero(missing.to_numpy()):
            key = keys[pos]
            if count.get(key, 0) >= 2:
                draw = rng.normal(mu[key], sigma[key])
                if clamp is not None:
                    draw = float(np.clip(draw, clamp[0], clamp[1]))
                filled[pos] = draw
            else:
                fallback_positions.append(pos)
        column = pd.Series(filled, index=df.index)
        if fallback_positions:
            column = column.interpolate(method="time", limit_direction="both")
            if clamp is not None:
                column = column.clip(clamp[0], clamp[1])
            still_missing = column.isna()
            if still_missing.any():
                slot = keys[np.flatnonzero(still_missing.to_numpy())[0]]
                raise InsufficientSlotData(
                    f"column {col!r}, slot {slot}: no data to impute from")
        df[col] = column
    return WeatherSeries(df, series.resolution_minutes)


def clip_physical(series: WeatherSeries,
                  bounds: PhysicalBounds = DEFAULT_BOUNDS) -> WeatherSeries:
    """Clamp values to their physical limits; wind direction wraps to [0, 360)."""
    df = series.data.copy()
    for col in df.columns:
        clamp = bounds.column_bounds(col)
        if clamp is not None:
            df[col] = df[col].clip(clamp[0], clamp[1])
        elif col == "wind_direction":
            df[col] = np.mod(df[col], 360.0)
    return WeatherSeries(df, series.resolution_minutes)


def clip_report(series: WeatherSeries,
                bounds: PhysicalBounds = DEFAULT_BOUNDS) -> dict[str, int]:
    """Count of cells per column that clipping would alter."""
    out: dict[str, int] = {}
    for col in series.data.columns:
        clamp = bounds.column_bounds(col)
        vals = series.data[col]
        if clamp is not None:
            out[col] = int(((vals < clamp[0]) | (vals > clamp[1])).sum())
        elif col == "wind_direction":
            out[col] = int(((vals < 0.0) | (vals >= 360.0)).sum())
        else:
            out[col] = 0
    return out


def combine_ghi_sensors(series: WeatherSeries) -> WeatherSeries:
    """Merge dual GHI sensors into one column (mean of whichever is present)."""
    if "ghi_1" not in series.data.columns and "ghi_2" not in series.data.columns:
        return series
    df = series.data.copy()
    sensors = df[[c for c in ("ghi_1", "ghi_2") if c in df.columns]]
    merged = sensors.mean(axis=1, skipna=True)
    if "ghi" in df.columns:
        merged = merged.fillna(df["ghi"])
    df = df.drop(columns=[c for c in ("ghi_1", "ghi_2") if c in df.columns])
    df["ghi"] = merged
    return WeatherSeries(df, series.resolution_minutes)


def engineer_features(series: WeatherSeries) -> pd.DataFrame:
    """Derived model inputs: wind vector components and calendar harmonics.

    Wind components follow the meteorological blowing-from convention
    (u = -ws * sin(wd), v = -ws * cos(wd)).
    """
    df = series.data.copy()
    if "wind_speed" in df.columns and "wind_direction" in df.columns:
        wd = np.radians(df["wind_direction"])
        df["wind_u"] = -df["wind_speed"] * np.sin(wd)
        df["wind_v"] = -df["wind_speed"] * np.cos(wd)
    doy_angle = 2.0 * np.pi * df.index.dayofyear / 365.25
    tod_angle = 2.0 * np.pi * (df.index.hour * 60 + df.index.minute) / 1440.0
    df["doy_sin"] = np.sin(doy_angle)
    df["doy_cos"] = np.cos(doy_angle)
    df["tod_sin"] = np.sin(tod_angle)
    df["tod_cos"] = np.cos(tod_angle)
    return df


def split_train_val_test(table: pd.DataFrame,
                         fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
                         ) -> tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
    """Contiguous chronological split; sizes within one row of the fractions."""
    n = len(table)
    if n < 10:
        raise TooFewRows(f"need at least 10 rows to split, got {n}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    table = table.sort_index()
    n_train = int(round(n * fractions[0]))
    n_val = int(round(n * fractions[1]))
    n_train = min(n_train, n - 2)
    n_val = max(1, min(n_val, n - n_train - 1))
    return (table.iloc[:n_train],
            table.iloc[n_train:n_train + n_val],
            table.iloc[n_train + n_val:])


def hourly_average(forecast: ForecastSeries) -> ForecastSeries:
    """Average each clock hour's six 10-minute steps into one hourly step."""
    if forecast.step_minutes != 10:
        raise ValueError("expected a 10-minute-resolution forecast")
    issue = pd.Timestamp(forecast.issue_time)
    if issue.minute or issue.second or issue.microsecond:
        raise MisalignedIssueTime(
            f"issue time {issue} is not on an hour boundary")
    values = np.asarray(forecast.values, dtype=float).reshape(
        FORECAST_STEPS_HOURLY, 6)
    return ForecastSeries(issue_time=issue,
                          values=tuple(values.mean(axis=1)),
                          step_minutes=60)


def baseline_smart_persistence(history: WeatherSeries, location: Location,
                               issue_time) -> ForecastSeries:
    """Clear-sky persistence forecast for the next six hours.

    The mean clear-sky index over the last hour of history (daylight
    stamps only; zero when the hour is dark) scales the clear-sky curve at
    each of the 36 future 10-minute steps.
    """
    if history.resolution_minutes != 10:
        raise InsufficientHistory("history must be on the 10-minute grid")
    issue = pd.Timestamp(issue_time)
    window_start = issue - pd.Timedelta(minutes=10 * (FORECAST_STEPS_10MIN - 1))
    window = history.data.loc[window_start:issue]
    if len(window) < FORECAST_STEPS_10MIN or "ghi" not in window.columns:
        raise InsufficientHistory(
            f"need {FORECAST_STEPS_10MIN} rows of GHI ending at {issue}")
    if window["ghi"].isna().any():
        raise InsufficientHistory("history contains missing GHI cells")

    last_hour = window.iloc[-6:]
    eph = solar.solar_ephemeris(location, last_hour.index)
    clearsky = solar.clearsky_ghi(eph.apparent_zenith, eph.extraterrestrial_dni)
    daylight = clearsky >= 10.0
    if daylight.any():
        k = solar.clearsky_index(last_hour["ghi"].to_numpy()[daylight],
                                 clearsky[daylight])
        k_bar = float(np.mean(k))
    else:
        k_bar = 0.0

    horizon = pd.DatetimeIndex(
        [issue + pd.Timedelta(minutes=10 * (h + 1))
         for h in range(FORECAST_STEPS_10MIN)])
    eph_fwd = solar.solar_ephemeris(location, horizon)
    cs_fwd = solar.clearsky_ghi(eph_fwd.apparent_zenith,
                                eph_fwd.extraterrestrial_dni)
    values = np.maximum(0.0, k_bar * np.asarray(cs_fwd))
    return ForecastSeries(issue_time=issue, values=tuple(values),
                          step_minutes=10)
