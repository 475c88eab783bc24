"""GHI decomposition, plane-of-array transposition, effective irradiance.

The chain is: DISC quasi-physical decomposition (Maxwell 1987) from GHI to
DNI, diffuse closure DHI = GHI - DNI * cos(Z), Perez et al. (1990)
sky-diffuse transposition with the composite coefficient bins, plus the
ASHRAE incidence-angle modifier and the Lee & Panchula (2016)
airmass/precipitable-water spectral correction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solar import SolarPosition, SurfaceOrientation

# DISC is unreliable close to the horizon; beam is forced to zero there.
TWILIGHT_ZENITH = 87.0
MAX_DISC_AIRMASS = 12.0


class UnknownTechnology(ValueError):
    pass


@dataclass(frozen=True)
class IrradianceComponents:
    ghi: float
    dni: float
    dhi: float
    kt: float                 # clearness index


@dataclass(frozen=True)
class PoaComponents:
    poa_direct: float
    poa_sky_diffuse: float
    poa_ground_diffuse: float
    poa_diffuse: float
    poa_global: float
    aoi: float                # deg


@dataclass(frozen=True)
class EffectiveIrradiance:
    g_effective: float        # W/m^2
    iam: float
    smm: float


def disc_dni(ghi, apparent_zenith, airmass, e0):
    """DISC estimate of direct normal irradiance from GHI.

    Maxwell's piecewise polynomials in the clearness index kt and airmass
    give the direct beam transmittance deficit; beam is clamped to
    [0, e0] and forced to zero past the twilight cutoff. Returns
    (dni, kt); array inputs broadcast.
    """
    ghi = np.asarray(ghi, dtype=float)
    z = np.asarray(apparent_zenith, dtype=float)
    am = np.minimum(np.asarray(airmass, dtype=float), MAX_DISC_AIRMASS)

    cos_z = np.cos(np.radians(z))
    with np.errstate(divide="ignore", invalid="ignore"):
        kt = np.where((ghi > 0) & (cos_z > 0), ghi / (e0 * cos_z), 0.0)

    is_cloudy = kt <= 0.6
    a = np.where(is_cloudy,
                 0.512 - 1.56 * kt + 2.286 * kt ** 2 - 2.222 * kt ** 3,
                 -5.743 + 21.77 * kt - 27.49 * kt ** 2 + 11.56 * kt ** 3)
    b = np.where(is_cloudy,
                 0.37 + 0.962 * kt,
                 41.4 - 118.5 * kt + 66.05 * kt ** 2 + 31.9 * kt ** 3)
    c = np.where(is_cloudy,
                 -0.28 + 0.932 * kt - 2.048 * kt ** 2,
                 -47.01 + 184.2 * kt - 222.0 * kt ** 2 + 73.81 * kt ** 3)
    with np.errstate(over="ignore", invalid="ignore"):
        delta_kn = a + b * np.exp(c * am)
        knc = (0.866 - 0.122 * am + 0.0121 * am ** 2
               - 0.000653 * am ** 3 + 1.4e-05 * am ** 4)
        dni = (knc - delta_kn) * e0

    dark = (z >= TWILIGHT_ZENITH) | (ghi <= 0) | ~np.isfinite(dni)
    dni = np.clip(np.where(dark, 0.0, dni), 0.0, e0)
    if dni.ndim:
        return dni, kt
    return float(dni), float(kt)


def dhi_closure(ghi, dni, apparent_zenith):
    """Diffuse horizontal from the closure relation, floored at zero."""
    ghi = np.asarray(ghi, dtype=float)
    dhi = ghi - np.asarray(dni, float) * np.cos(np.radians(apparent_zenith))
    dhi = np.maximum(dhi, 0.0)
    return dhi if dhi.ndim else float(dhi)


def incidence_angle(surface: SurfaceOrientation | None, pos: SolarPosition | None = None,
                    surface_tilt=None, surface_azimuth=None,
                    solar_zenith=None, solar_azimuth=None):
    """Angle between the module normal and the sun beam, degrees in [0, 180].

    Either pass (surface, pos) or the four scalar/array angle arguments.
    """
    if surface is not None:
        surface_tilt = surface.surface_tilt
        surface_azimuth = surface.surface_azimuth
    if pos is not None:
        solar_zenith = pos.apparent_zenith
        solar_azimuth = pos.azimuth
    tilt = np.radians(np.asarray(surface_tilt, dtype=float))
    z = np.radians(np.asarray(solar_zenith, dtype=float))
    dazi = np.radians(np.asarray(solar_azimuth, dtype=float)
                      - np.asarray(surface_azimuth, dtype=float))
    cos_aoi = np.cos(tilt) * np.cos(z) + np.sin(tilt) * np.sin(z) * np.cos(dazi)
    aoi = np.degrees(np.arccos(np.clip(cos_aoi, -1.0, 1.0)))
    return aoi if aoi.ndim else float(aoi)


# Perez et al. (1990) composite brightness coefficients, one row per sky
# clearness bin: F11, F12, F13, F21, F22, F23.
_PEREZ_BIN_EDGES = np.array([1.065, 1.23, 1.5, 1.95, 2.8, 4.5, 6.2])
_PEREZ_COEFFS = np.array([
    (-0.008, 0.588, -0.062, -0.060, 0.072, -0.022),
    (0.130, 0.683, -0.151, -0.019, 0.066, -0.029),
    (0.330, 0.487, -0.221, 0.055, -0.064, -0.026),
    (0.568, 0.187, -0.295, 0.109, -0.152, -0.014),
    (0.873, -0.392, -0.362, 0.226, -0.462, 0.001),
    (1.132, -1.237, -0.412, 0.288, -0.823, 0.056),
    (1.060, -1.600, -0.359, 0.264, -1.127, 0.131),
    (0.678, -0.327, -0.250, 0.156, -1.377, 0.251),
])
_PEREZ_KAPPA = 1.041


def perez_coefficients(dhi, dni, e0, apparent_zenith, airmass):
    """Perez circumsolar (F1) and horizon-brightening (F2) factors."""
    dhi = np.asarray(dhi, dtype=float)
    dni = np.asarray(dni, dtype=float)
    z_rad = np.radians(np.asarray(apparent_zenith, dtype=float))
    am = np.asarray(airmass, dtype=float)

    with np.errstate(divide="ignore", invalid="ignore"):
        eps = (((dhi + dni) / dhi) + _PEREZ_KAPPA * z_rad ** 3) \
            / (1.0 + _PEREZ_KAPPA * z_rad ** 3)
        delta = dhi * am / e0
    bins = np.digitize(np.nan_to_num(eps, nan=1.0), _PEREZ_BIN_EDGES)
    coeffs = _PEREZ_COEFFS[bins]
    f1 = np.maximum(
        0.0, coeffs[..., 0] + coeffs[..., 1] * delta + coeffs[..., 2] * z_rad)
    f2 = coeffs[..., 3] + coeffs[..., 4] * delta + coeffs[..., 5] * z_rad
    usable = (dhi > 0) & np.isfinite(am)
    f1 = np.where(usable, f1, 0.0)
    f2 = np.where(usable, f2, 0.0)
    return f1, f2


def perez_sky_diffuse(dhi, f1, f2, aoi, apparent_zenith, surface_tilt):
    """Sky-diffuse irradiance on the tilted plane for given Perez factors."""
    dhi = np.asarray(dhi, dtype=float)
    tilt = np.radians(np.asarray(surface_tilt, dtype=float))
    a = np.maximum(0.0, np.cos(np.radians(np.asarray(aoi, float))))
    b = np.maximum(np.cos(np.radians(85.0)),
                   np.cos(np.radians(np.asarray(apparent_zenith, float))))
    sky = dhi * ((1.0 - f1) * (1.0 + np.cos(tilt)) / 2.0
                 + f1 * a / b + f2 * np.sin(tilt))
    sky = np.maximum(sky, 0.0)
    return sky if sky.ndim else float(sky)


def ground_diffuse(ghi, surface_tilt, albedo):
    """Ground-reflected irradiance on the tilted plane."""
    tilt = np.radians(np.asarray(surface_tilt, dtype=float))
    gnd = np.asarray(ghi, float) * albedo * (1.0 - np.cos(tilt)) / 2.0
    gnd = np.maximum(gnd, 0.0)
    return gnd if gnd.ndim else float(gnd)


def perez_poa(components: IrradianceComponents, e0, surface: SurfaceOrientation,
              pos: SolarPosition, airmass, albedo) -> PoaComponents:
    """Plane-of-array components from decomposed horizontal irradiance."""
    arrs = poa_arrays(
        ghi=components.ghi, dni=components.dni, dhi=components.dhi, e0=e0,
        surface_tilt=surface.surface_tilt,
        surface_azimuth=surface.surface_azimuth,
        apparent_zenith=pos.apparent_zenith, solar_azimuth=pos.azimuth,
        airmass=airmass, albedo=albedo)
    return PoaComponents(*(float(a) for a in arrs))


def poa_arrays(ghi, dni, dhi, e0, surface_tilt, surface_azimuth,
               apparent_zenith, solar_azimuth, airmass, albedo):
    """Vectorized plane-of-array transposition; see perez_poa."""
    aoi = incidence_angle(None, None, surface_tilt, surface_azimuth,
                          apparent_zenith, solar_azimuth)
    direct = np.asarray(dni, float) * np.maximum(0.0, np.cos(np.radians(aoi)))
    f1, f2 = perez_coefficients(dhi, dni, e0, apparent_zenith, airmass)
    sky = perez_sky_diffuse(dhi, f1, f2, aoi, apparent_zenith, surface_tilt)
    gnd = ground_diffuse(ghi, surface_tilt, albedo)
    diffuse = sky + gnd
    return direct, sky, gnd, diffuse, direct + diffuse, aoi


def iam(aoi, b0: float = 0.05):
    """ASHRAE incidence-angle modifier, clamped to [0, 1]."""
    aoi_arr = np.asarray(aoi, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 1.0 - b0 * (1.0 / np.cos(np.radians(aoi_arr)) - 1.0)
    val = np.where(aoi_arr >= 90.0, 0.0, np.clip(val, 0.0, 1.0))
    return val if val.ndim else float(val)


# Spectral-correction polynomial coefficients by cell technology
# (Lee & Panchula 2016): c0..c5 applied to absolute airmass and
# precipitable water (cm).
_SPECTRAL_COEFFS = {
    "mono-Si": (0.85914, -0.020880, -0.0058853, 0.12029, 0.026814, -0.0017810),
    "multi-Si": (0.84090, -0.027539, -0.0079224, 0.13570, 0.038024, -0.0021218),
    "CdTe": (0.86273, -0.038948, -0.012506, 0.098871, 0.084658, -0.0042948),
    "CIGS": (0.85252, -0.022314, -0.0047216, 0.13666, 0.013342, -0.0008945),
    "a-Si": (1.12094, -0.047620, -0.0083627, -0.10443, 0.098382, -0.0033818),
}


def spectral_mismatch(absolute_airmass, precipitable_water_cm, technology,
                      clamp=(0.8, 1.2)):
    """Short-circuit-current spectral modifier for a cell technology."""
    try:
        c = _SPECTRAL_COEFFS[technology]
    except KeyError:
        raise UnknownTechnology(
            f"no spectral coefficients for technology {technology!r}") from None
    am = np.asarray(absolute_airmass, dtype=float)
    pw = np.clip(np.asarray(precipitable_water_cm, dtype=float), 0.1, 8.0)
    smm = (c[0] + c[1] * am + c[2] * pw + c[3] * np.sqrt(am)
           + c[4] * np.sqrt(pw) + c[5] * am / np.sqrt(pw))
    smm = np.clip(np.where(np.isfinite(smm), smm, 1.0), clamp[0], clamp[1])
    return smm if smm.ndim else float(smm)


def effective_irradiance(poa: PoaComponents, iam_value, smm) -> EffectiveIrradiance:
    """Irradiance reaching the cell: SMM * |direct * IAM + diffuse|."""
    g = effective_irradiance_arrays(poa.poa_direct, poa.poa_diffuse,
                                    iam_value, smm)
    return EffectiveIrradiance(g_effective=float(g), iam=float(iam_value),
                               smm=float(smm))


def effective_irradiance_arrays(poa_direct, poa_diffuse, iam_value, smm):
    g = np.asarray(smm, float) * np.abs(
        np.asarray(poa_direct, float) * np.asarray(iam_value, float)
        + np.asarray(poa_diffuse, float))
    return g if g.ndim else float(g)


def bifacial_gain(g_effective, bifaciality, rear_fraction: float = 0.08):
    """Flat rear-side boost applied to the effective irradiance."""
    g = np.asarray(g_effective, float) * (1.0 + bifaciality * rear_fraction)
    return g if g.ndim else float(g)
