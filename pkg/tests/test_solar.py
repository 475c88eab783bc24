"""Solar position, airmass, clear-sky, humidity, tracker orientation."""

import numpy as np
import pandas as pd
import pytest

from pvtwin import solar
from pvtwin.plant import Location, Tracker

DENVER_AREA = Location(longitude=-105.1786, latitude=39.742476,
                       altitude=1830.14, time_zone=-7.0, surface_albedo=0.2)


class TestSolarPosition:
    def test_published_validation_point(self):
        # 820 mbar / 11 degC site conditions accompany the published vector
        pos = solar.solar_position(DENVER_AREA, "2003-10-17 12:30:30",
                                   pressure=82000.0, temperature=11.0)
        assert pos.apparent_zenith == pytest.approx(50.11162, abs=1e-3)
        assert pos.azimuth == pytest.approx(194.34024, abs=1e-3)

    def test_equator_equinox_noon_near_zenith(self):
        equator = Location(longitude=0.0, latitude=0.0, altitude=0.0,
                           time_zone=0.0, surface_albedo=0.2)
        # local solar noon on the March equinox
        pos = solar.solar_position(equator, "2024-03-20 12:07:00")
        assert pos.apparent_zenith < 0.5

    def test_midnight_sun_below_horizon(self):
        pos = solar.solar_position(DENVER_AREA, "2024-06-01 00:00:00")
        assert pos.apparent_elevation < 0

    def test_deterministic(self):
        a = solar.solar_position(DENVER_AREA, "2024-05-09 10:00:00")
        b = solar.solar_position(DENVER_AREA, "2024-05-09 10:00:00")
        assert a == b

    def test_elevation_complements_zenith(self):
        pos = solar.solar_position(DENVER_AREA, "2024-05-09 10:00:00")
        assert pos.apparent_elevation == pytest.approx(
            90.0 - pos.apparent_zenith, abs=1e-9)

    def test_out_of_range_date(self):
        with pytest.raises(solar.OutOfRangeDate):
            solar.solar_position(DENVER_AREA, "1850-01-01 12:00:00")
        with pytest.raises(solar.OutOfRangeDate):
            solar.solar_position(DENVER_AREA, "2101-01-01 12:00:00")
        # boundary years are accepted
        solar.solar_position(DENVER_AREA, "1900-06-01 12:00:00")
        solar.solar_position(DENVER_AREA, "2100-06-01 12:00:00")

    def test_series_matches_scalar(self):
        index = pd.date_range("2024-05-09 06:00", periods=5, freq="1h")
        eph = solar.solar_ephemeris(DENVER_AREA, index)
        one = solar.solar_position(DENVER_AREA, index[2])
        assert eph.apparent_zenith[2] == pytest.approx(one.apparent_zenith,
                                                       abs=1e-9)
        assert eph.azimuth[2] == pytest.approx(one.azimuth, abs=1e-9)


class TestAirmass:
    def test_zenith_identity(self):
        assert solar.relative_airmass(0.0) == pytest.approx(1.0, abs=1e-3)

    def test_sixty_degrees(self):
        assert solar.relative_airmass(60.0) == pytest.approx(1.994, abs=1e-3)

    def test_no_daylight_marker(self):
        assert np.isnan(solar.relative_airmass(95.0))

    def test_strictly_increasing(self):
        z = np.arange(0.0, 90.0, 1.0)
        am = solar.relative_airmass(z)
        assert np.all(np.diff(am) > 0)

    def test_pressure_correction(self):
        assert solar.absolute_airmass(2.0, 50662.5) == pytest.approx(1.0)


class TestExtraterrestrial:
    def test_perihelion(self):
        assert solar.extraterrestrial_dni("2024-01-03") == pytest.approx(
            1412.0, abs=3.0)

    def test_aphelion(self):
        assert solar.extraterrestrial_dni("2024-07-04") == pytest.approx(
            1321.0, abs=3.0)

    def test_orbital_bounds(self):
        stamps = pd.date_range("2024-01-01", "2024-12-31", freq="10D")
        values = [solar.extraterrestrial_dni(t) for t in stamps]
        assert min(values) >= 1315.0
        assert max(values) <= 1420.0


class TestClearSky:
    def test_night_is_zero(self):
        assert solar.clearsky_ghi(95.0, 1366.0) == 0.0
        assert solar.clearsky_ghi(90.0, 1366.0) == 0.0

    def test_overhead_with_unit_airmass(self):
        assert solar.clearsky_ghi(0.0, 1366.0, airmass=1.0) == pytest.approx(
            1366.0 * 0.7, abs=1e-9)

    def test_monotone_decreasing_in_zenith(self):
        z = np.arange(0.0, 90.0, 0.5)
        ghi = solar.clearsky_ghi(z, 1366.0)
        assert np.all(np.diff(ghi) < 0)

    def test_zero_when_sun_below_horizon(self):
        for z in (90.0, 92.0, 110.0, 180.0):
            assert solar.clearsky_ghi(z, 1366.0) == 0.0


class TestClearSkyIndex:
    def test_simple_ratio(self):
        assert solar.clearsky_index(500.0, 1000.0) == 0.5

    def test_guarded_denominator(self):
        assert solar.clearsky_index(100.0, 0.0) == 0.0
        assert solar.clearsky_index(100.0, 9.9) == 0.0

    def test_identity(self):
        assert solar.clearsky_index(800.0, 800.0) == 1.0


class TestHumidity:
    def test_saturation_identity(self):
        assert solar.relative_humidity(25.0, 25.0) == pytest.approx(100.0)

    def test_known_point(self):
        assert solar.relative_humidity(30.0, 20.0) == pytest.approx(55.0, abs=2.0)

    def test_dew_point_above_air_rejected(self):
        with pytest.raises(solar.InvalidInput):
            solar.relative_humidity(30.0, 35.0)


class TestPrecipitableWater:
    def test_clamp_floor(self):
        assert solar.precipitable_water(25.0, 0.0) == 0.1

    def test_typical_value(self):
        pw = solar.precipitable_water(25.0, 60.0)
        assert 1.0 < pw < 4.0

    def test_monotone_in_humidity(self):
        rh = np.linspace(0.0, 100.0, 21)
        pw = solar.precipitable_water(25.0, rh)
        assert np.all(np.diff(pw) >= 0)


TRACKER = Tracker(with_tracker=True, surface_tilt=0.0, surface_azimuth=180.0,
                  axis_azimuth=180.0, max_angle=60.0, row_height=2.0,
                  row_width=4.0)
ELPASO_LOC = Location(longitude=-73.75, latitude=9.66, altitude=50.0,
                      time_zone=-5.0, surface_albedo=0.2)


class TestTracker:
    def test_sun_over_axis_is_flat(self):
        rot = solar.tracker_rotation(TRACKER, 0.0, 180.0)
        assert rot == pytest.approx(0.0, abs=1e-12)

    def test_morning_sun_negative(self):
        pos = solar.solar_position(ELPASO_LOC, "2024-03-21 08:00:00")
        rot, _ = solar.tracker_orientation(TRACKER, pos)
        assert rot < 0

    def test_afternoon_sun_positive(self):
        pos = solar.solar_position(ELPASO_LOC, "2024-03-21 16:00:00")
        rot, _ = solar.tracker_orientation(TRACKER, pos)
        assert rot > 0

    def test_clamped_at_max_angle(self):
        no_backtrack = Tracker(with_tracker=True, surface_tilt=0.0,
                               surface_azimuth=180.0, axis_azimuth=180.0,
                               max_angle=60.0, row_height=0.0, row_width=4.0)
        # sun low in the east: true tracking wants more than 60 degrees
        rot = solar.tracker_rotation(no_backtrack, 80.0, 90.0)
        assert rot == pytest.approx(-60.0, abs=1e-12)
        rot = solar.tracker_rotation(no_backtrack, 80.0, 270.0)
        assert rot == pytest.approx(60.0, abs=1e-12)

    def test_mirror_symmetry(self):
        for zenith in (20.0, 45.0, 70.0):
            east = solar.tracker_rotation(TRACKER, zenith, 90.0)
            west = solar.tracker_rotation(TRACKER, zenith, 270.0)
            assert abs(east) == pytest.approx(abs(west), abs=1e-6)

    def test_fixed_mount_returns_configuration(self):
        fixed = Tracker(with_tracker=False, surface_tilt=15.0,
                        surface_azimuth=170.0, axis_azimuth=180.0,
                        max_angle=60.0, row_height=0.0, row_width=1.0)
        pos = solar.solar_position(ELPASO_LOC, "2024-03-21 12:00:00")
        rot, surface = solar.tracker_orientation(fixed, pos)
        assert rot == 0.0
        assert surface.surface_tilt == 15.0
        assert surface.surface_azimuth == 170.0

    def test_orientation_follows_rotation_sign(self):
        tilt, azi = solar.orientation_from_rotation(TRACKER, -30.0)
        assert tilt == 30.0 and azi == 90.0
        tilt, azi = solar.orientation_from_rotation(TRACKER, 30.0)
        assert tilt == 30.0 and azi == 270.0
