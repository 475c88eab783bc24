"""Per-timestamp astronomy and atmosphere for a plant location.

Covers solar position (high-accuracy algorithm, see spa module), relative /
pressure-corrected airmass (Kasten & Young 1989 formula), extraterrestrial
beam irradiance from the Earth-sun distance, a simple clear-sky
transmittance model, humidity and precipitable-water estimators, and
single-axis tracker orientation with optional backtracking.

All operations are pure; angles cross these interfaces in degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta, timezone

import numpy as np
import pandas as pd

from . import spa
from .plant import Location, Tracker

SOLAR_CONSTANT = 1366.1      # W/m^2
STANDARD_PRESSURE = 101325.0  # Pa


class OutOfRangeDate(ValueError):
    pass


class InvalidInput(ValueError):
    pass


@dataclass(frozen=True)
class SolarPosition:
    apparent_zenith: float    # deg, refraction-corrected
    zenith: float             # deg
    apparent_elevation: float  # deg
    azimuth: float            # deg, north = 0, clockwise


@dataclass(frozen=True)
class SurfaceOrientation:
    surface_tilt: float       # deg from horizontal
    surface_azimuth: float    # deg


@dataclass(frozen=True)
class SolarEphemeris:
    """Vectorized solar position plus the Earth-sun distance."""

    index: pd.DatetimeIndex
    apparent_zenith: np.ndarray
    zenith: np.ndarray
    apparent_elevation: np.ndarray
    azimuth: np.ndarray
    earth_sun_au: np.ndarray

    @property
    def extraterrestrial_dni(self) -> np.ndarray:
        return SOLAR_CONSTANT / self.earth_sun_au ** 2


def local_to_unixtime(t, time_zone_hours: float) -> float:
    """POSIX seconds for a timestamp; naive stamps are plant-local."""
    ts = pd.Timestamp(t)
    if ts.tzinfo is None:
        ts = ts.tz_localize(timezone(timedelta(hours=time_zone_hours)))
    return ts.timestamp()


def _check_years(index) -> None:
    years = np.atleast_1d(np.asarray(index.year if hasattr(index, "year") else index))
    if years.min() < 1900 or years.max() > 2100:
        raise OutOfRangeDate("timestamps must fall within years 1900-2100")


def solar_position(location: Location, t, pressure=STANDARD_PRESSURE,
                   temperature=12.0) -> SolarPosition:
    """Apparent solar coordinates at one timestamp.

    Naive timestamps are interpreted in the plant's fixed UTC offset.
    Pressure (Pa) and temperature (deg C) refine the refraction correction.
    """
    ts = pd.Timestamp(t)
    _check_years(pd.DatetimeIndex([ts]))
    unixtime = local_to_unixtime(ts, location.time_zone)
    app_zen, zen, app_el, _el, azi, _r = spa.solar_position_numpy(
        unixtime, latitude=location.latitude, longitude=location.longitude,
        elevation=location.altitude, pressure=pressure,
        temperature=temperature)
    return SolarPosition(
        apparent_zenith=float(app_zen), zenith=float(zen),
        apparent_elevation=float(app_el), azimuth=float(azi))


def solar_ephemeris(location: Location, index: pd.DatetimeIndex) -> SolarEphemeris:
    """Solar position series for a (possibly naive, plant-local) index."""
    _check_years(index)
    if index.tz is None:
        localized = index.tz_localize(timezone(timedelta(hours=location.time_zone)))
    else:
        localized = index
    unixtime = localized.view("int64") / 1e9
    app_zen, zen, app_el, _el, azi, r = spa.solar_position_numpy(
        np.asarray(unixtime), latitude=location.latitude,
        longitude=location.longitude, elevation=location.altitude)
    return SolarEphemeris(index=index, apparent_zenith=app_zen, zenith=zen,
                          apparent_elevation=app_el, azimuth=azi,
                          earth_sun_au=r)


def relative_airmass(apparent_zenith):
    """Kasten & Young relative airmass; NaN marks no-daylight (z >= 90)."""
    z = np.asarray(apparent_zenith, dtype=float)
    with np.errstate(invalid="ignore"):
        am = 1.0 / (np.cos(np.radians(z))
                    + 0.50572 * (96.07995 - z) ** -1.6364)
    am = np.where(z >= 90.0, np.nan, am)
    return am if am.ndim else float(am)


def absolute_airmass(airmass, pressure=STANDARD_PRESSURE):
    """Pressure-corrected airmass (pressure in Pa)."""
    return airmass * (pressure / STANDARD_PRESSURE)


def extraterrestrial_dni(t, time_zone_hours: float = 0.0):
    """Extraterrestrial beam irradiance (W/m^2) at one timestamp."""
    ts = pd.Timestamp(t)
    _check_years(pd.DatetimeIndex([ts]))
    unixtime = local_to_unixtime(ts, time_zone_hours)
    r = spa.earth_sun_distance(unixtime)
    return float(SOLAR_CONSTANT / r ** 2)


def clearsky_ghi(apparent_zenith, e0, airmass=None):
    """Simple clear-sky GHI: E0 * cos(Z) * 0.7 ** (AM ** 0.678).

    Zero whenever the sun is at or below the horizon. ``airmass`` defaults
    to the relative airmass of ``apparent_zenith``.
    """
    z = np.asarray(apparent_zenith, dtype=float)
    am = relative_airmass(z) if airmass is None else np.asarray(airmass, float)
    with np.errstate(invalid="ignore"):
        ghi = e0 * np.cos(np.radians(z)) * 0.7 ** (am ** 0.678)
    ghi = np.where((z >= 90.0) | ~np.isfinite(ghi), 0.0, ghi)
    ghi = np.maximum(ghi, 0.0)
    return ghi if ghi.ndim else float(ghi)


def clearsky_index(measured, clearsky, min_clearsky: float = 10.0):
    """Measured over clear-sky GHI, zero when the denominator is negligible."""
    measured = np.asarray(measured, dtype=float)
    clearsky = np.asarray(clearsky, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        idx = np.where(clearsky >= min_clearsky, measured / clearsky, 0.0)
    return idx if idx.ndim else float(idx)


def saturation_vapor_pressure(t_celsius):
    """Magnus saturation vapor pressure over water, hPa."""
    t = np.asarray(t_celsius, dtype=float)
    es = 6.112 * np.exp(17.62 * t / (243.12 + t))
    return es if es.ndim else float(es)


def relative_humidity(t_amb, dew_point):
    """Percent relative humidity from air and dew-point temperature."""
    if np.any(np.asarray(dew_point) > np.asarray(t_amb)):
        raise InvalidInput("dew point cannot exceed air temperature")
    rh = 100.0 * saturation_vapor_pressure(dew_point) / saturation_vapor_pressure(t_amb)
    return rh


def precipitable_water(t_amb, rh, min_cm: float = 0.1, max_cm: float = 8.0):
    """Precipitable water column (cm) from air temperature and humidity.

    Gueymard (1994) empirical correlation, clamped to [min_cm, max_cm].
    """
    t_k = np.asarray(t_amb, dtype=float) + 273.15
    rh = np.asarray(rh, dtype=float)
    theta = t_k / 273.15
    hv = 0.4976 + 1.5265 * theta + np.exp(13.6897 * theta - 14.9188 * theta ** 3)
    rho_v = 216.7 * (rh / 100.0) * (1.0 / t_k) * np.exp(
        22.330 - 49.140 * (100.0 / t_k)
        - 10.922 * (100.0 / t_k) ** 2 - 0.39015 * (t_k / 100.0))
    pw = np.clip(0.1 * hv * rho_v, min_cm, max_cm)
    return pw if pw.ndim else float(pw)


def tracker_rotation(tracker: Tracker, apparent_zenith, azimuth):
    """Signed single-axis rotation (deg) about the tracker axis.

    Positive rotations are clockwise looking along the axis direction;
    with the axis pointing south, morning sun east of a north-south axis
    gives negative angles. True-tracking is corrected for backtracking when
    the row geometry is known (ground coverage ratio = row_width / pitch,
    pitch defaulting to twice the row width) and clamped to +/- max_angle.
    """
    z = np.radians(np.asarray(apparent_zenith, dtype=float))
    rel_azi = np.radians(np.asarray(azimuth, dtype=float) - tracker.axis_azimuth)
    wid = np.degrees(np.arctan2(np.sin(z) * np.sin(rel_azi), np.cos(z)))
    if tracker.row_height > 0 and tracker.row_width > 0:
        gcr = tracker.row_width / (2.0 * tracker.row_width)
        projection = np.abs(np.cos(np.radians(wid))) / gcr
        correction = np.where(
            projection < 1.0,
            -np.sign(wid) * np.degrees(np.arccos(np.minimum(projection, 1.0))),
            0.0)
        wid = wid + correction
    rot = np.clip(wid, -tracker.max_angle, tracker.max_angle)
    return rot if rot.ndim else float(rot)


def orientation_from_rotation(tracker: Tracker, rotation):
    """Module tilt/azimuth for a rotation about the tracker axis."""
    rot = np.asarray(rotation, dtype=float)
    tilt = np.abs(rot)
    azi = np.where(rot >= 0,
                   (tracker.axis_azimuth + 90.0) % 360.0,
                   (tracker.axis_azimuth - 90.0) % 360.0)
    return tilt, azi


def tracker_orientation(tracker: Tracker, pos: SolarPosition):
    """Rotation and resulting surface orientation for one timestamp.

    Fixed mounts return a zero rotation with the configured orientation.
    """
    if not tracker.with_tracker:
        return 0.0, SurfaceOrientation(tracker.surface_tilt,
                                       tracker.surface_azimuth)
    if pos.apparent_elevation <= 0:
        return 0.0, SurfaceOrientation(0.0, (tracker.axis_azimuth + 90.0) % 360.0)
    rot = tracker_rotation(tracker, pos.apparent_zenith, pos.azimuth)
    tilt, azi = orientation_from_rotation(tracker, rot)
    return float(rot), SurfaceOrientation(float(tilt), float(azi))
