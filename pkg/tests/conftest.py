"""Shared fixtures: plant documents, synthetic weather, workspace dirs."""

import copy

import numpy as np
import pandas as pd
import pytest

from pvtwin import plant, qc, solar


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"[acceptance] {status} {name}")

PANEL_DOC = {
    "name": "Test-330", "noct": 45.0, "technology": "multi-Si", "ns": 72,
    "isc_ref": 9.14, "voc_ref": 46.4, "imp_ref": 8.594, "vmp_ref": 38.4,
    "alpha_sc": 0.00457, "beta_oc": -0.1438, "gamma_r": -0.41, "p_stc": 330.0,
    "bifacial": False, "bifaciality": 0.0, "mounting": "ground",
    "racking": "open_rack", "degradation": 0.005,
}

FIXED_TRACKER_DOC = {
    "with_tracker": False, "surface_tilt": 10.0, "surface_azimuth": 180.0,
    "axis_azimuth": 180.0, "max_angle": 60.0, "row_height": 0.0,
    "row_width": 1.0,
}

LOCATION_DOC = {
    "longitude": -73.75, "latitude": 9.66, "altitude": 50.0,
    "time_zone": -5.0, "surface_albedo": 0.2,
}


def minimal_plant_doc():
    """Smallest valid tree: 1 CU, 1 inverter, 1 string box, 1 array."""
    return {
        "name": "Minimal",
        "kpc": 1.0, "kt": 1.0, "kin": 1.0,
        "conversion_units": [{
            "name": "CU 01",
            "wire_voltage": 34500.0,
            "electrical_resistivity": 2.82e-08,
            "wire_length": 100.0,
            "cross_sectional_area": 0.0004,
            "losses": 0.0,
            "location": copy.deepcopy(LOCATION_DOC),
            "inverters": [{
                "name": "INV 1",
                "paco": 1500.0, "pdco": 1600.0, "vdco": 40.0, "pso": 10.0,
                "c0": 0.0, "c1": 0.0, "c2": 0.0, "c3": 0.0,
                "p_night": 2.0, "losses": 0.0,
                "string_boxes": [{
                    "number_of_wires": 1,
                    "electrical_resistivity": 1.72e-08,
                    "wire_length": 10.0,
                    "cross_sectional_area": 6e-06,
                    "losses": 0.0,
                    "array": {
                        "modules_per_string": 1,
                        "strings_per_inverter": 1,
                        "panel": copy.deepcopy(PANEL_DOC),
                        "tracker": copy.deepcopy(FIXED_TRACKER_DOC),
                    },
                }],
            }],
        }],
    }


@pytest.fixture
def minimal_doc():
    return minimal_plant_doc()


@pytest.fixture(scope="session")
def elpaso():
    return plant.elpaso_architecture()


@pytest.fixture(scope="session")
def elpaso_location(elpaso):
    return elpaso.conversion_units[0].location


def clear_day_frame(location, day="2024-03-21", freq_minutes=10):
    """Synthetic clear-sky weather for one local day."""
    index = pd.date_range(f"{day} 00:00", f"{day} 23:{60 - freq_minutes:02d}",
                          freq=f"{freq_minutes}min")
    eph = solar.solar_ephemeris(location, index)
    ghi = solar.clearsky_ghi(eph.apparent_zenith, eph.extraterrestrial_dni)
    n = len(index)
    return pd.DataFrame({
        "ghi": ghi,
        "t_amb": 24.0 + 8.0 * np.sin(np.pi * np.arange(n) / n),
        "wind_speed": np.full(n, 1.5),
        "pressure": np.full(n, 1007.0),
    }, index=index)


@pytest.fixture(scope="session")
def clear_day_weather(elpaso_location):
    return qc.WeatherSeries.from_frame(clear_day_frame(elpaso_location))


def table4_csv(index, ghi, pressure=1003.0, t_amb=25.0, ws=1.5, wd=200.0):
    """Measurement-file bytes in the plant layout for synthetic series."""
    lines = ["Fecha,GHI,Presion,Temperatura Ambiente,Wind Speed,Wind Direction"]
    for i, stamp in enumerate(index):
        g = ghi[i] if hasattr(ghi, "__len__") else ghi
        lines.append(f"{stamp:%Y-%m-%d %H:%M:%S},{g:.2f},{pressure},{t_amb},{ws},{wd}")
    return ("\n".join(lines) + "\n").encode()
