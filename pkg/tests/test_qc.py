"""Gap accounting, imputation, clipping, features, splits, baseline."""

import numpy as np
import pandas as pd
import pytest

from pvtwin import qc, solar
from conftest import clear_day_frame


def _series(days=3, holes=None, column="ghi"):
    index = pd.date_range("2024-05-01 00:00", periods=days * 144, freq="10min")
    rng = np.random.default_rng(1)
    minutes = index.hour * 60 + index.minute
    sun = np.maximum(0.0, np.sin((minutes - 360) / 720 * np.pi))
    df = pd.DataFrame({
        "ghi": 900.0 * sun + rng.normal(0.0, 10.0, len(index)),
        "t_amb": 25.0 + 6.0 * sun + rng.normal(0.0, 0.5, len(index)),
        "wind_speed": np.abs(rng.normal(1.5, 0.5, len(index))),
        "wind_direction": rng.uniform(0.0, 360.0, len(index)),
        "pressure": 1003.0 + rng.normal(0.0, 1.0, len(index)),
    }, index=index)
    df["ghi"] = df["ghi"].clip(lower=0.0)
    if holes:
        for col, positions in holes.items():
            df.iloc[positions, df.columns.get_loc(col)] = np.nan
    return qc.WeatherSeries.from_frame(df)


class TestWeatherSeries:
    def test_rejects_unknown_column(self):
        index = pd.date_range("2024-05-01", periods=3, freq="10min")
        df = pd.DataFrame({"irradiance": [1.0, 2.0, 3.0]}, index=index)
        with pytest.raises(qc.UnknownColumn):
            qc.WeatherSeries.from_frame(df)

    def test_rejects_nonuniform_grid(self):
        index = pd.DatetimeIndex(["2024-05-01 00:00", "2024-05-01 00:10",
                                  "2024-05-01 00:25"])
        df = pd.DataFrame({"ghi": [0.0, 0.0, 0.0]}, index=index)
        with pytest.raises(qc.NonuniformSeries):
            qc.WeatherSeries.from_frame(df)

    def test_sorts_rows(self):
        index = pd.DatetimeIndex(["2024-05-01 00:10", "2024-05-01 00:00"])
        df = pd.DataFrame({"ghi": [1.0, 0.0]}, index=index)
        series = qc.WeatherSeries.from_frame(df)
        assert list(series.data["ghi"]) == [0.0, 1.0]


class TestMissingReport:
    def test_no_missing(self):
        report = qc.missing_report(_series())
        assert all(v == 0.0 for v in report.values())

    def test_quarter_missing(self):
        index = pd.date_range("2024-05-01", periods=4, freq="10min")
        df = pd.DataFrame({"ghi": [1.0, np.nan, 2.0, 3.0]}, index=index)
        report = qc.missing_report(qc.WeatherSeries.from_frame(df))
        assert report["ghi"] == 25.0

    def test_dual_sensor_columns_reported(self):
        index = pd.date_range("2024-05-01", periods=4, freq="10min")
        df = pd.DataFrame({
            "ghi_1": [1.0, np.nan, 2.0, 3.0],
            "ghi_2": [1.0, 1.5, np.nan, np.nan],
            "t_amb": [25.0] * 4,
            "wind_direction": [200.0] * 4,
            "wind_speed": [1.0] * 4,
            "pressure": [1003.0] * 4,
        }, index=index)
        report = qc.missing_report(qc.WeatherSeries.from_frame(df))
        assert set(report) == {"ghi_1", "ghi_2", "t_amb", "wind_direction",
                               "wind_speed", "pressure"}
        assert report["ghi_2"] == 50.0


class TestImputation:
    def test_identity_when_complete(self):
        series = _series()
        filled = qc.impute_slotwise_normal(series, seed=11)
        assert filled.data.equals(series.data)

    def test_only_missing_cells_change(self):
        series = _series(holes={"ghi": [100, 200, 300]})
        filled = qc.impute_slotwise_normal(series, seed=11)
        mask = series.data["ghi"].isna()
        pd.testing.assert_frame_equal(filled.data[~mask], series.data[~mask])
        assert not filled.data["ghi"].isna().any()

    def test_seed_reproducibility(self):
        series = _series(holes={"ghi": [100, 200], "t_amb": [50]})
        a = qc.impute_slotwise_normal(series, seed=77)
        b = qc.impute_slotwise_normal(series, seed=77)
        c = qc.impute_slotwise_normal(series, seed=78)
        assert a.data.equals(b.data)
        assert not a.data.equals(c.data)

    def test_slot_statistics(self):
        # three days, same slot holding 400/420/440, fourth day missing
        index = pd.date_range("2024-05-01 12:00", periods=4, freq="1D")
        index = pd.DatetimeIndex(index)
        df = pd.DataFrame({"ghi": [400.0, 420.0, 440.0, np.nan]}, index=index)
        series = qc.WeatherSeries(df, resolution_minutes=1440)
        draws = [
            qc.impute_slotwise_normal(series, seed=s).data["ghi"].iloc[-1]
            for s in range(200)
        ]
        mu, sigma = 420.0, 20.0
        assert all(mu - 4 * sigma <= d <= mu + 4 * sigma for d in draws)
        assert np.mean(draws) == pytest.approx(mu, abs=3 * sigma / np.sqrt(200))

    def test_imputation_mean_tracks_slot_statistics(self):
        # one daily slot with 40 samples, one missing cell, 1000 seeds
        index = pd.date_range("2024-01-01 12:00", periods=41, freq="1D")
        rng = np.random.default_rng(10)
        values = np.append(rng.normal(500.0, 35.0, 40), np.nan)
        df = pd.DataFrame({"ghi": values}, index=index)
        series = qc.WeatherSeries(df, resolution_minutes=1440)
        mu = np.nanmean(values)
        sigma = np.nanstd(values, ddof=1)
        draws = np.array([
            qc.impute_slotwise_normal(series, seed=s).data["ghi"].iloc[-1]
            for s in range(1000)
        ])
        assert abs(draws.mean() - mu) <= 3.0 * sigma / np.sqrt(1000)

    def test_zero_variance_slot(self):
        index = pd.date_range("2024-05-01 12:00", periods=4, freq="1D")
        df = pd.DataFrame({"ghi": [500.0, 500.0, 500.0, np.nan]}, index=index)
        series = qc.WeatherSeries(df, resolution_minutes=1440)
        filled = qc.impute_slotwise_normal(series, seed=5)
        assert filled.data["ghi"].iloc[-1] == 500.0

    def test_sparse_slot_falls_back_to_interpolation(self):
        index = pd.date_range("2024-05-01 00:00", periods=6, freq="10min")
        df = pd.DataFrame({"ghi": [10.0, np.nan, 30.0, 40.0, 50.0, 60.0]},
                          index=index)
        series = qc.WeatherSeries.from_frame(df)
        filled = qc.impute_slotwise_normal(series, seed=5)
        assert filled.data["ghi"].iloc[1] == pytest.approx(20.0)

    def test_unfillable_column(self):
        index = pd.date_range("2024-05-01 00:00", periods=4, freq="10min")
        df = pd.DataFrame({"ghi": [np.nan] * 4}, index=index)
        series = qc.WeatherSeries.from_frame(df)
        with pytest.raises(qc.InsufficientSlotData):
            qc.impute_slotwise_normal(series, seed=5)


class TestClipping:
    def test_ghi_ceiling(self):
        index = pd.date_range("2024-05-01", periods=2, freq="10min")
        df = pd.DataFrame({"ghi": [1500.0, -3.0]}, index=index)
        clipped = qc.clip_physical(qc.WeatherSeries.from_frame(df))
        assert list(clipped.data["ghi"]) == [1300.0, 0.0]

    def test_temperature_band(self):
        index = pd.date_range("2024-05-01", periods=2, freq="10min")
        df = pd.DataFrame({"t_amb": [50.0, 10.0]}, index=index)
        clipped = qc.clip_physical(qc.WeatherSeries.from_frame(df))
        assert list(clipped.data["t_amb"]) == [45.0, 18.0]

    def test_wind_wrap_and_floor(self):
        index = pd.date_range("2024-05-01", periods=2, freq="10min")
        df = pd.DataFrame({"wind_direction": [370.0, -20.0],
                           "wind_speed": [-1.0, 3.0]}, index=index)
        clipped = qc.clip_physical(qc.WeatherSeries.from_frame(df))
        assert list(clipped.data["wind_direction"]) == [10.0, 340.0]
        assert list(clipped.data["wind_speed"]) == [0.0, 3.0]

    def test_custom_bounds(self):
        index = pd.date_range("2024-05-01", periods=1, freq="10min")
        df = pd.DataFrame({"ghi": [1400.0]}, index=index)
        bounds = qc.PhysicalBounds(ghi=(0.0, 1500.0))
        series = qc.WeatherSeries.from_frame(df, 10)
        assert qc.clip_physical(series, bounds).data["ghi"].iloc[0] == 1400.0

    def test_clip_report_counts(self):
        index = pd.date_range("2024-05-01", periods=3, freq="10min")
        df = pd.DataFrame({"ghi": [1500.0, -3.0, 800.0]}, index=index)
        counts = qc.clip_report(qc.WeatherSeries.from_frame(df))
        assert counts["ghi"] == 2

    def test_after_qc_all_clean(self):
        series = _series(holes={"ghi": list(range(0, 400, 7)),
                                "t_amb": list(range(3, 430, 11))})
        clean = qc.clip_physical(qc.impute_slotwise_normal(series, seed=3))
        assert all(v == 0.0 for v in qc.missing_report(clean).values())
        assert clean.data["ghi"].between(0.0, 1300.0).all()
        assert clean.data["t_amb"].between(18.0, 45.0).all()


class TestFeatures:
    def test_wind_components(self):
        index = pd.date_range("2024-05-01", periods=1, freq="10min")
        df = pd.DataFrame({"wind_speed": [2.0], "wind_direction": [90.0]},
                          index=index)
        feats = qc.engineer_features(qc.WeatherSeries.from_frame(df, 10))
        assert feats["wind_u"].iloc[0] == pytest.approx(-2.0)
        assert feats["wind_v"].iloc[0] == pytest.approx(0.0, abs=1e-12)

    def test_zero_wind(self):
        index = pd.date_range("2024-05-01", periods=1, freq="10min")
        df = pd.DataFrame({"wind_speed": [0.0], "wind_direction": [123.0]},
                          index=index)
        feats = qc.engineer_features(qc.WeatherSeries.from_frame(df, 10))
        assert feats["wind_u"].iloc[0] == 0.0
        assert feats["wind_v"].iloc[0] == 0.0

    def test_time_of_day_harmonics(self):
        index = pd.DatetimeIndex(["2024-05-01 06:00"])
        df = pd.DataFrame({"ghi": [100.0]}, index=index)
        feats = qc.engineer_features(qc.WeatherSeries.from_frame(df, 10))
        assert feats["tod_sin"].iloc[0] == pytest.approx(1.0)
        assert feats["tod_cos"].iloc[0] == pytest.approx(0.0, abs=1e-12)

    def test_day_of_year_harmonics(self):
        index = pd.DatetimeIndex(["2024-01-01 00:00"])
        df = pd.DataFrame({"ghi": [0.0]}, index=index)
        feats = qc.engineer_features(qc.WeatherSeries.from_frame(df, 10))
        angle = 2 * np.pi * 1 / 365.25
        assert feats["doy_sin"].iloc[0] == pytest.approx(np.sin(angle))
        assert feats["doy_cos"].iloc[0] == pytest.approx(np.cos(angle))


class TestSplit:
    def test_hundred_rows(self):
        table = pd.DataFrame({"x": range(100)},
                             index=pd.date_range("2024-05-01", periods=100,
                                                 freq="10min"))
        train, val, test = qc.split_train_val_test(table)
        assert (len(train), len(val), len(test)) == (80, 10, 10)

    def test_ten_rows(self):
        table = pd.DataFrame({"x": range(10)},
                             index=pd.date_range("2024-05-01", periods=10,
                                                 freq="10min"))
        train, val, test = qc.split_train_val_test(table)
        assert (len(train), len(val), len(test)) == (8, 1, 1)

    def test_partition_properties(self):
        table = pd.DataFrame({"x": range(173)},
                             index=pd.date_range("2024-05-01", periods=173,
                                                 freq="10min"))
        train, val, test = qc.split_train_val_test(table)
        assert len(train) + len(val) + len(test) == len(table)
        assert train.index.max() < val.index.min() < test.index.min()
        rebuilt = pd.concat([train, val, test])
        assert rebuilt.equals(table)

    def test_too_few_rows(self):
        table = pd.DataFrame({"x": range(9)},
                             index=pd.date_range("2024-05-01", periods=9,
                                                 freq="10min"))
        with pytest.raises(qc.TooFewRows):
            qc.split_train_val_test(table)


class TestHourlyAverage:
    def test_mean_within_hour(self):
        values = [0.0, 0.0, 0.0, 100.0, 100.0, 100.0] + [300.0] * 30
        fs = qc.ForecastSeries("2024-05-01 08:00", tuple(values), 10)
        hourly = qc.hourly_average(fs)
        assert hourly.values[0] == pytest.approx(50.0)
        assert all(v == 300.0 for v in hourly.values[1:])

    def test_constant_identity(self):
        fs = qc.ForecastSeries("2024-05-01 08:00", (300.0,) * 36, 10)
        hourly = qc.hourly_average(fs)
        assert hourly.values == (300.0,) * 6
        assert hourly.step_minutes == 60

    def test_exactly_six_outputs(self):
        fs = qc.ForecastSeries("2024-05-01 08:00", tuple(range(36)), 10)
        assert len(qc.hourly_average(fs).values) == 6

    def test_order_free_within_bins(self):
        rng = np.random.default_rng(2)
        values = rng.uniform(0.0, 900.0, 36)
        fs = qc.ForecastSeries("2024-05-01 08:00", tuple(values), 10)
        shuffled = values.reshape(6, 6).copy()
        for row in shuffled:
            rng.shuffle(row)
        fs2 = qc.ForecastSeries("2024-05-01 08:00",
                                tuple(shuffled.ravel()), 10)
        assert qc.hourly_average(fs).values == pytest.approx(
            qc.hourly_average(fs2).values)

    def test_misaligned_issue_time(self):
        fs = qc.ForecastSeries("2024-05-01 08:10", (0.0,) * 36, 10)
        with pytest.raises(qc.MisalignedIssueTime):
            qc.hourly_average(fs)

    def test_step_counts_enforced(self):
        with pytest.raises(ValueError):
            qc.ForecastSeries("2024-05-01 08:00", (0.0,) * 35, 10)
        with pytest.raises(ValueError):
            qc.ForecastSeries("2024-05-01 08:00", (0.0,) * 36, 60)


@pytest.fixture(scope="module")
def history(elpaso_location):
    return qc.WeatherSeries.from_frame(clear_day_frame(elpaso_location))


class TestBaseline:
    def test_clear_history_tracks_clear_sky(self, history, elpaso_location):
        issue = pd.Timestamp("2024-03-21 11:00")
        forecast = qc.baseline_smart_persistence(history, elpaso_location,
                                                 issue)
        eph = solar.solar_ephemeris(elpaso_location, forecast.target_times)
        clearsky = solar.clearsky_ghi(eph.apparent_zenith,
                                      eph.extraterrestrial_dni)
        assert np.allclose(forecast.values, clearsky, rtol=0.02, atol=2.0)

    def test_night_issue_gives_zeros(self, history, elpaso_location):
        forecast = qc.baseline_smart_persistence(
            history, elpaso_location, pd.Timestamp("2024-03-21 23:50"))
        assert all(v == 0.0 for v in forecast.values)

    def test_scaling_by_index(self, history, elpaso_location):
        half = qc.WeatherSeries(history.data.assign(ghi=history.data["ghi"] * 0.5),
                                10)
        issue = pd.Timestamp("2024-03-21 11:00")
        full = qc.baseline_smart_persistence(history, elpaso_location, issue)
        halved = qc.baseline_smart_persistence(half, elpaso_location, issue)
        ratio = np.array(halved.values[:12]) / np.array(full.values[:12])
        assert np.allclose(ratio, 0.5, atol=1e-9)

    def test_insufficient_history(self, history, elpaso_location):
        short = qc.WeatherSeries(history.data.iloc[:10], 10)
        with pytest.raises(qc.InsufficientHistory):
            qc.baseline_smart_persistence(short, elpaso_location,
                                          pd.Timestamp("2024-03-21 01:30"))
