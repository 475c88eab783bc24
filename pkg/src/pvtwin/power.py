"""Cell temperature, single-diode DC production, inverter AC, plant cascade.

DC production uses the De Soto five-parameter single-diode model: the
reference parameters are fitted once per panel from its datasheet values,
translated to operating (irradiance, cell temperature), and the maximum
power point is located numerically (bracketed Newton for the implicit
current, golden-section search for the power maximum). AC conversion uses
the Sandia grid-connected inverter performance model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
import numpy as np
import pandas as pd
from scipy import optimize

from . import irradiance, solar
from .plant import (ArrayConfig, ArrayPath, Inverter, Panel, PlantSystem,
                    ThermalParams)
from .qc import NonuniformSeries, WeatherSeries

BOLTZMANN_EV = 8.617332478e-5   # eV/K
T_REF_K = 298.15                # 25 degC
G_REF = 1000.0                  # W/m^2
EG_REF_EV = 1.121               # silicon band gap at reference
DEGDT = -0.0002677              # band-gap temperature dependence, 1/K


class FitFailure(RuntimeError):
    def __init__(self, message: str, residuals=None):
        self.residuals = residuals
        super().__init__(message)


class NoConvergence(RuntimeError):
    pass


class SimulationError(RuntimeError):
    def __init__(self, path, message: str):
        self.path = path
        super().__init__(f"array {path}: {message}")


@dataclass(frozen=True)
class DiodeParams:
    photocurrent: float        # A
    saturation_current: float  # A
    series_resistance: float   # ohm
    shunt_resistance: float    # ohm
    n_vth: float               # V, diode factor * Ns * thermal voltage


@dataclass(frozen=True)
class OperatingPoint:
    v_mp: float
    i_mp: float
    p_mp: float


# ---------------------------------------------------------------------------
# cell temperature

def cell_temperature_sapm(poa, t_amb, ws, params: ThermalParams):
    """Back-surface and cell temperature from irradiance, air and wind.

    t_panel = poa * exp(a + b * ws) + t_amb
    t_cell  = t_panel + poa / 1000 * delta_t
    """
    poa = np.asarray(poa, dtype=float)
    t_panel = poa * np.exp(params.a + params.b * np.asarray(ws, float)) \
        + np.asarray(t_amb, float)
    t_cell = t_panel + poa / 1000.0 * params.delta_t
    if t_panel.ndim:
        return t_panel, t_cell
    return float(t_panel), float(t_cell)


def cell_temperature_from_module(poa, t_module_measured, delta_t):
    """Cell temperature from a measured module back-surface temperature."""
    t = np.asarray(t_module_measured, float) + np.asarray(poa, float) / 1000.0 * delta_t
    return t if t.ndim else float(t)


def cell_temperature_noct(poa, t_amb, t_noct):
    """Cell temperature from the nominal-operating-cell-temperature rating.

    Grouped so the defining condition (800 W/m^2, 20 degC ambient)
    reproduces the rating exactly.
    """
    t = np.asarray(t_amb, float) + (t_noct - 20.0) * (np.asarray(poa, float) / 800.0)
    return t if t.ndim else float(t)


# ---------------------------------------------------------------------------
# single-diode model

@dataclass(frozen=True)
class ReferenceDiodeParams:
    il_ref: float
    io_ref: float
    rs: float
    rsh_ref: float
    a_ref: float               # V


def _diode_current(v, i, il, io, rs, rsh, a):
    vd = v + i * rs
    return il - io * np.expm1(vd / a) - vd / rsh - i


def _open_circuit_voltage(il, io, rsh, a) -> float:
    # i = 0 makes the diode equation explicit in V; bisect the bracket
    hi = a * math.log1p(il / io)
    f = lambda v: il - io * math.expm1(v / a) - v / rsh
    lo = 0.0
    if f(hi) > 0:  # shunt path negligible; expand just in case
        hi *= 1.5
    return optimize.brentq(f, lo, hi, xtol=1e-12, rtol=1e-15)


def _current_at_voltage(v: float, il: float, io: float, rs: float, rsh: float,
                        a: float, max_iter: int = 100) -> float:
    """Solve the implicit diode equation for current at a given voltage.

    Newton iteration safeguarded by a [0, il] bisection bracket; the
    residual is strictly decreasing in the current, so the root is unique.
    """
    lo, hi = 0.0, il
    i = min(max(il - io * math.expm1(v / a) - v / rsh, lo), hi)
    for _ in range(max_iter):
        vd = v + i * rs
        exp_term = math.exp(vd / a)
        g = il - io * (exp_term - 1.0) - vd / rsh - i
        if abs(g) <= 1e-12 * max(1.0, il):
            return i
        if g > 0:
            lo = i
        else:
            hi = i
        dg = -io * rs / a * exp_term - rs / rsh - 1.0
        step = i - g / dg
        i = step if lo < step < hi else 0.5 * (lo + hi)
    return i


def solve_mpp(params: DiodeParams, max_iter: int = 100,
              rel_tol: float = 1e-8) -> OperatingPoint:
    """Locate the maximum power point of the single-diode IV curve.

    Golden-section search for the maximum of P(V) = V * I(V) on
    [0, V_oc]; converges to ``rel_tol`` relative on power within
    ``max_iter`` iterations or raises NoConvergence.
    """
    il, io = params.photocurrent, params.saturation_current
    rs, rsh, a = params.series_resistance, params.shunt_resistance, params.n_vth
    if il <= 0:
        return OperatingPoint(0.0, 0.0, 0.0)
    voc = _open_circuit_voltage(il, io, rsh, a)

    power = lambda v: v * _current_at_voltage(v, il, io, rs, rsh, a)
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, voc
    v1 = hi - invphi * (hi - lo)
    v2 = lo + invphi * (hi - lo)
    p1, p2 = power(v1), power(v2)
    for _ in range(max_iter):
        if p1 < p2:
            lo, v1, p1 = v1, v2, p2
            v2 = lo + invphi * (hi - lo)
            p2 = power(v2)
        else:
            hi, v2, p2 = v2, v1, p1
            v1 = hi - invphi * (hi - lo)
            p1 = power(v1)
        p_best = max(p1, p2)
        if (hi - lo) <= 1e-10 * voc or (p_best > 0 and abs(p1 - p2) <= rel_tol * p_best * 1e-2):
            v_mp = v1 if p1 >= p2 else v2
            i_mp = _current_at_voltage(v_mp, il, io, rs, rsh, a)
            return OperatingPoint(v_mp, i_mp, v_mp * i_mp)
    raise NoConvergence(
        f"maximum power point search exceeded {max_iter} iterations")


def _fit_equations(x, isc, voc, imp, vmp, alpha_sc, beta_oc, delta_t_k=5.0):
    try:
        return _fit_equations_unsafe(x, isc, voc, imp, vmp, alpha_sc,
                                     beta_oc, delta_t_k)
    except (OverflowError, ValueError):
        return [1e3] * 5


def _fit_equations_unsafe(x, isc, voc, imp, vmp, alpha_sc, beta_oc, delta_t_k):
    il, log_io, rs, rsh, a = x
    io = math.exp(min(log_io, 100.0))
    if rs < 0 or rsh <= 0 or a <= 0 or il <= 0:
        return [1e3] * 5
    vd_mp = vmp + imp * rs
    exp_mp = math.exp(vd_mp / a)
    f1 = il - io * math.expm1(isc * rs / a) - isc * rs / rsh - isc
    f2 = il - io * math.expm1(voc / a) - voc / rsh
    f3 = il - io * (exp_mp - 1.0) - vd_mp / rsh - imp
    # dP/dV = 0 at the max power point
    di_dv = -(io / a * exp_mp + 1.0 / rsh) / \
        (1.0 + io * rs / a * exp_mp + rs / rsh)
    f4 = imp + vmp * di_dv
    # open-circuit voltage temperature coefficient at T_ref + delta_t_k
    t2 = T_REF_K + delta_t_k
    il2 = il + alpha_sc * delta_t_k
    eg2 = EG_REF_EV * (1.0 + DEGDT * delta_t_k)
    io2 = io * (t2 / T_REF_K) ** 3 * math.exp(
        EG_REF_EV / (BOLTZMANN_EV * T_REF_K) - eg2 / (BOLTZMANN_EV * t2))
    a2 = a * t2 / T_REF_K
    voc2 = _open_circuit_voltage(il2, io2, rsh, a2)
    f5 = (voc2 - voc) / delta_t_k - beta_oc
    return [f1, f2, f3, f4, f5]


@lru_cache(maxsize=64)
def fit_reference_params(panel: Panel) -> ReferenceDiodeParams:
    """Fit the five reference diode parameters to datasheet values.

    Solves the short-circuit, open-circuit, max-power, zero-power-slope
    and open-circuit-temperature-coefficient conditions simultaneously.
    Raises FitFailure (with residuals) when the solver does not converge.
    """
    vth = BOLTZMANN_EV * T_REF_K   # volts
    a0 = 1.3 * panel.ns * vth
    rs0 = max(0.3 * (panel.voc_ref - panel.vmp_ref) / panel.imp_ref, 1e-4)
    rsh0 = 100.0 * panel.voc_ref / panel.isc_ref
    x0 = [panel.isc_ref, math.log(panel.isc_ref) - panel.voc_ref / a0,
          rs0, rsh0, a0]
    args = (panel.isc_ref, panel.voc_ref, panel.imp_ref, panel.vmp_ref,
            panel.alpha_sc, panel.beta_oc)
    best = None
    for n_factor in (1.3, 1.1, 1.5):
        x0[4] = n_factor * panel.ns * vth
        x0[1] = math.log(panel.isc_ref) - panel.voc_ref / x0[4]
        sol = optimize.root(_fit_equations, x0, args=args, method="hybr")
        resid = float(np.max(np.abs(sol.fun)))
        if best is None or resid < best[1]:
            best = (sol, resid)
        if sol.success and resid < 1e-7:
            break
    sol, resid = best
    if not (sol.success and resid < 1e-6):
        raise FitFailure(
            f"reference parameter fit did not converge for panel "
            f"{panel.name!r} (max residual {resid:.3e})", residuals=sol.fun)
    il, log_io, rs, rsh, a = sol.x
    return ReferenceDiodeParams(il_ref=float(il), io_ref=float(math.exp(log_io)),
                                rs=float(rs), rsh_ref=float(rsh),
                                a_ref=float(a))


def single_diode_params(panel: Panel, g_effective, t_cell) -> DiodeParams:
    """Translate the panel's reference diode parameters to (G, T).

    Standard De Soto scaling: photocurrent linear in irradiance with the
    short-circuit temperature coefficient, saturation current from the
    band-gap relation, shunt resistance inversely proportional to
    irradiance, series resistance constant.
    """
    ref = fit_reference_params(panel)
    g = max(float(g_effective), 0.0)
    t_k = float(t_cell) + 273.15
    il = g / G_REF * (ref.il_ref + panel.alpha_sc * (t_k - T_REF_K))
    eg = EG_REF_EV * (1.0 + DEGDT * (t_k - T_REF_K))
    io = ref.io_ref * (t_k / T_REF_K) ** 3 * math.exp(
        EG_REF_EV / (BOLTZMANN_EV * T_REF_K) - eg / (BOLTZMANN_EV * t_k))
    rsh = ref.rsh_ref * G_REF / max(g, 1e-6)
    a = ref.a_ref * t_k / T_REF_K
    return DiodeParams(photocurrent=il, saturation_current=io,
                       series_resistance=ref.rs, shunt_resistance=rsh,
                       n_vth=a)


# ---------------------------------------------------------------------------
# array scaling, wiring, inverter, energy

def scale_to_array(op: OperatingPoint, array: ArrayConfig) -> float:
    """Array DC power: (V * modules in series) * (I * strings in parallel)."""
    return (op.v_mp * array.modules_per_string) * \
        (op.i_mp * array.strings_per_inverter)


def wiring_loss(resistivity, length, area, current, number_of_wires=1):
    """Ohmic wiring loss: per-wire resistance rho*L/A at the given current."""
    r = resistivity * length / area
    loss = number_of_wires * np.asarray(current, float) ** 2 * r
    return loss if loss.ndim else float(loss)


def sandia_inverter_ac(inverter: Inverter, v_dc, p_dc):
    """Sandia grid-connected inverter model: DC power/voltage to AC power.

    Output is clipped at the AC rating; DC input at or below the start
    threshold draws the nighttime tare power instead.
    """
    v = np.asarray(v_dc, dtype=float)
    p = np.asarray(p_dc, dtype=float)
    a = inverter.pdco * (1.0 + inverter.c1 * (v - inverter.vdco))
    b = inverter.pso * (1.0 + inverter.c2 * (v - inverter.vdco))
    c = inverter.c0 * (1.0 + inverter.c3 * (v - inverter.vdco))
    p_ac = (inverter.paco / (a - b) - c * (a - b)) * (p - b) + c * (p - b) ** 2
    p_ac = np.minimum(p_ac, inverter.paco)
    p_ac = np.where(p <= inverter.pso, -abs(inverter.p_night), p_ac)
    return p_ac if p_ac.ndim else float(p_ac)


def energy_from_power(p_ac_kw: pd.Series, r: int,
                      window_minutes: int = 60) -> pd.Series:
    """Energy per aggregation window: E = r/60 * sum(P_AC), kW -> kWh."""
    if len(p_ac_kw) > 1:
        deltas = np.diff(p_ac_kw.index.view("int64")) / 60e9
        if not np.all(deltas == r):
            raise NonuniformSeries(
                f"power series is not on a uniform {r}-minute grid")
    windows = p_ac_kw.index.floor(f"{window_minutes}min")
    energy = p_ac_kw.groupby(windows).sum() * (r / 60.0)
    energy.index.name = p_ac_kw.index.name
    return energy


# ---------------------------------------------------------------------------
# plant cascade

@dataclass
class PlantProduction:
    """Nested production series for one simulation run (powers in W)."""

    index: pd.DatetimeIndex
    resolution_minutes: int
    array_dc: dict[ArrayPath, np.ndarray]
    inverter_ac: dict[tuple[int, int], np.ndarray]
    cu_ac: dict[int, np.ndarray]
    poi_ac: np.ndarray
    inverter_energy_kwh: dict[tuple[int, int], pd.Series]
    labels: dict[str, dict]

    def poi_series_mw(self) -> pd.Series:
        return pd.Series(self.poi_ac / 1e6, index=self.index)


TEMPERATURE_MODELS = ("sapm", "measured_module", "noct")


def _mpp_series(panel: Panel, g_eff: np.ndarray, t_cell: np.ndarray):
    v = np.zeros_like(g_eff)
    i = np.zeros_like(g_eff)
    for k in range(len(g_eff)):
        op = solve_mpp(single_diode_params(panel, g_eff[k], t_cell[k]))
        v[k], i[k] = op.v_mp, op.i_mp
    return v, i


def simulate_plant(system: PlantSystem, weather: WeatherSeries,
                   temperature_model: str = "sapm",
                   plant_age_years: float = 0.0,
                   assumed_rh: float = 70.0) -> PlantProduction:
    """Run the full chain for every array path of the plant.

    Per timestamp and array: solar geometry, GHI decomposition, tracker
    orientation, transposition, optical and spectral modifiers, cell
    temperature, max-power-point solve, array scaling, string-box wiring
    loss and loss fraction, inverter aggregation to AC, inverter loss
    fraction, conversion-unit wiring loss and loss fraction, and the
    point-of-interconnection derates. Loss fractions derate generation
    only; nighttime inverter draw passes through unscaled.
    """
    if temperature_model not in TEMPERATURE_MODELS:
        raise ValueError(f"unknown temperature model {temperature_model!r}")
    df = weather.data
    if "ghi" not in df.columns:
        raise ValueError("weather series lacks a 'ghi' column")
    if temperature_model == "measured_module":
        if "t_module" not in df.columns:
            raise ValueError("measured_module temperature model needs t_module")
    elif "t_amb" not in df.columns:
        raise ValueError(f"{temperature_model} temperature model needs t_amb")

    index = df.index
    n = len(index)
    ghi = df["ghi"].to_numpy(float)
    t_amb = df["t_amb"].to_numpy(float) if "t_amb" in df.columns else np.full(n, 25.0)
    ws = df["wind_speed"].to_numpy(float) if "wind_speed" in df.columns else np.full(n, 1.0)
    pressure_pa = (df["pressure"].to_numpy(float) * 100.0
                   if "pressure" in df.columns else np.full(n, 101325.0))
    rh = (df["relative_humidity"].to_numpy(float)
          if "relative_humidity" in df.columns else np.full(n, assumed_rh))
    pw = solar.precipitable_water(t_amb, rh)

    ephemeris_cache: dict = {}
    panel_cache: dict = {}

    array_dc: dict[ArrayPath, np.ndarray] = {}
    inverter_ac: dict[tuple[int, int], np.ndarray] = {}
    cu_ac: dict[int, np.ndarray] = {}
    inverter_energy: dict[tuple[int, int], pd.Series] = {}
    labels = {"cu": {}, "inverter": {}, "array": {}}

    for ci, cu in enumerate(system.conversion_units):
        if cu.location not in ephemeris_cache:
            ephemeris_cache[cu.location] = solar.solar_ephemeris(cu.location, index)
        eph = ephemeris_cache[cu.location]
        e0 = eph.extraterrestrial_dni
        am_rel = solar.relative_airmass(eph.apparent_zenith)
        am_abs = solar.absolute_airmass(am_rel, pressure_pa)
        dni, _kt = irradiance.disc_dni(ghi, eph.apparent_zenith, am_rel, e0)
        dhi = irradiance.dhi_closure(ghi, dni, eph.apparent_zenith)

        labels["cu"][ci] = cu.name
        cu_sum = np.zeros(n)
        for vi, inv in enumerate(cu.inverters):
            labels["inverter"][(ci, vi)] = inv.name
            if not inv.string_boxes:
                continue
            inv_dc = np.zeros(n)
            v_bus = np.zeros(n)
            largest = 0
            for bi, box in enumerate(inv.string_boxes):
                arr = box.array
                path: ArrayPath = (ci, vi, bi)
                key = (cu.location, arr.panel, arr.tracker)
                if key not in panel_cache:
                    try:
                        panel_cache[key] = _per_panel_operating_series(
                            system, cu, arr, eph, e0, am_rel, am_abs, ghi,
                            dni, dhi, t_amb, ws, pw, df, temperature_model,
                            plant_age_years)
                    except (FitFailure, NoConvergence) as exc:
                        raise SimulationError(path, str(exc)) from exc
                v_mp, i_mp = panel_cache[key]
                p_arr = (v_mp * arr.modules_per_string) * \
                    (i_mp * arr.strings_per_inverter)
                array_dc[path] = p_arr
                labels["array"][path] = f"{inv.name}/SB{bi + 1}"
                i_wire = i_mp * arr.strings_per_inverter / box.number_of_wires
                loss = wiring_loss(box.electrical_resistivity, box.wire_length,
                                   box.cross_sectional_area, i_wire,
                                   box.number_of_wires)
                inv_dc += np.maximum(p_arr - loss, 0.0) * (1.0 - box.losses)
                size = arr.modules_per_string * arr.strings_per_inverter
                if size >= largest:
                    largest = size
                    v_bus = v_mp * arr.modules_per_string
            p_ac = sandia_inverter_ac(inv, v_bus, inv_dc)
            p_ac = np.where(p_ac > 0, p_ac * (1.0 - inv.losses), p_ac)
            inverter_ac[(ci, vi)] = p_ac
            inverter_energy[(ci, vi)] = energy_from_power(
                pd.Series(p_ac / 1000.0, index=index),
                weather.resolution_minutes)
            cu_sum += p_ac
        i_cu = np.maximum(cu_sum, 0.0) / cu.wire_voltage
        cu_loss = wiring_loss(cu.electrical_resistivity, cu.wire_length,
                              cu.cross_sectional_area, i_cu)
        cu_power = np.where(cu_sum > 0,
                            np.maximum(cu_sum - cu_loss, 0.0) * (1.0 - cu.losses),
                            cu_sum)
        cu_ac[ci] = cu_power

    poi = system.kpc * system.kt * system.kin * np.sum(
        np.stack(list(cu_ac.values())), axis=0)
    return PlantProduction(index=index,
                           resolution_minutes=weather.resolution_minutes,
                           array_dc=array_dc, inverter_ac=inverter_ac,
                           cu_ac=cu_ac, poi_ac=poi,
                           inverter_energy_kwh=inverter_energy, labels=labels)


def _per_panel_operating_series(system, cu, arr, eph, e0, am_rel, am_abs,
                                ghi, dni, dhi, t_amb, ws, pw, df,
                                temperature_model, plant_age_years):
    """Per-panel MPP voltage/current series for one (location, array) pair."""
    tracker = arr.tracker
    if tracker.with_tracker:
        daylight = eph.apparent_elevation > 0
        rot = np.where(daylight,
                       solar.tracker_rotation(tracker, eph.apparent_zenith,
                                              eph.azimuth),
                       0.0)
        tilt, s_azi = solar.orientation_from_rotation(tracker, rot)
    else:
        tilt = np.full(len(ghi), tracker.surface_tilt)
        s_azi = np.full(len(ghi), tracker.surface_azimuth)

    direct, _sky, _gnd, diffuse, poa_global, aoi = irradiance.poa_arrays(
        ghi=ghi, dni=dni, dhi=dhi, e0=e0, surface_tilt=tilt,
        surface_azimuth=s_azi, apparent_zenith=eph.apparent_zenith,
        solar_azimuth=eph.azimuth, airmass=am_rel,
        albedo=cu.location.surface_albedo)

    iam_arr = irradiance.iam(aoi, arr.panel.b0)
    smm = irradiance.spectral_mismatch(
        np.nan_to_num(am_abs, nan=1.5), pw, arr.panel.technology)
    g_eff = irradiance.effective_irradiance_arrays(direct, diffuse, iam_arr, smm)
    if arr.panel.bifacial:
        g_eff = irradiance.bifacial_gain(g_eff, arr.panel.bifaciality)
    if plant_age_years > 0:
        g_eff = g_eff * (1.0 - arr.panel.degradation) ** plant_age_years

    if temperature_model == "sapm":
        _t_panel, t_cell = cell_temperature_sapm(poa_global, t_amb, ws,
                                                 system.thermal)
    elif temperature_model == "measured_module":
        t_cell = cell_temperature_from_module(
            poa_global, df["t_module"].to_numpy(float), system.thermal.delta_t)
    else:
        t_cell = cell_temperature_noct(poa_global, t_amb, arr.panel.noct)

    return _mpp_series(arr.panel, g_eff, np.asarray(t_cell, float))


def production_frame(production: PlantProduction) -> pd.DataFrame:
    """Flat export table: one column per (level, name)."""
    cols = {}
    for path, series in production.array_dc.items():
        cols[f"array_dc/{production.labels['array'][path]}"] = series
    for key, series in production.inverter_ac.items():
        cols[f"inverter_ac/{production.labels['inverter'][key]}"] = series
    for ci, series in production.cu_ac.items():
        cols[f"cu_ac/{production.labels['cu'][ci]}"] = series
    cols["poi_ac/plant"] = production.poi_ac
    frame = pd.DataFrame(cols, index=production.index)
    frame.index.name = "timestamp"
    return frame


def production_to_csv(production: PlantProduction) -> str:
    frame = production_frame(production)
    frame.index = frame.index.map(lambda t: t.isoformat())
    return frame.to_csv()


def energy_summary_frame(production: PlantProduction) -> pd.DataFrame:
    """Hourly energy per inverter plus the plant total, kWh."""
    cols = {
        f"energy_kwh/{production.labels['inverter'][key]}": series
        for key, series in production.inverter_energy_kwh.items()
    }
    frame = pd.DataFrame(cols)
    frame["energy_kwh/plant_poi"] = energy_from_power(
        pd.Series(production.poi_ac / 1000.0, index=production.index),
        production.resolution_minutes)
    frame.index.name = "timestamp"
    return frame


def energy_summary_to_csv(production: PlantProduction) -> str:
    frame = energy_summary_frame(production)
    frame.index = frame.index.map(lambda t: t.isoformat())
    return frame.to_csv()
