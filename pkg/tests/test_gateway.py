"""Measurement/model-run ingestion, the store, and offline transports."""

import numpy as np
import pandas as pd
import pytest

from pvtwin import gateway as gw

TABLE_CSV = b"""Fecha,GHI,Presion,Temperatura Ambiente,Wind Speed,Wind Direction
2022-02-22 05:30:00,0.36,1003.06,22.97,1.48,257.64
2022-02-22 05:40:00,0.38,1003.18,22.99,1.69,274.66
2022-02-22 05:50:00,0.40,1003.25,23.03,1.75,228.60
"""


class TestMeasurements:
    def test_parse_published_row(self):
        series = gw.ingest_measurements(TABLE_CSV, "csv")
        row = series.data.loc["2022-02-22 05:50:00"]
        assert row["ghi"] == 0.40
        assert row["pressure"] == 1003.25
        assert row["t_amb"] == 23.03
        assert row["wind_speed"] == 1.75
        assert row["wind_direction"] == 228.60

    def test_header_mismatch(self):
        with pytest.raises(gw.HeaderMismatch) as err:
            gw.ingest_measurements(TABLE_CSV.replace(b"GHI", b"Irradiance"),
                                   "csv")
        assert "GHI" in str(err.value)

    def test_empty_file(self):
        with pytest.raises(gw.EmptyFile):
            gw.ingest_measurements(b"", "csv")
        header_only = TABLE_CSV.splitlines()[0] + b"\n"
        with pytest.raises(gw.EmptyFile):
            gw.ingest_measurements(header_only, "csv")

    def test_duplicate_stamp(self):
        dup = TABLE_CSV + b"2022-02-22 05:50:00,1,1003,23,1,200\n"
        with pytest.raises(gw.DuplicateStamp):
            gw.ingest_measurements(dup, "csv")

    def test_bad_timestamp(self):
        bad = TABLE_CSV.replace(b"2022-02-22 05:30:00", b"not-a-date")
        with pytest.raises(gw.BadTimestamp):
            gw.ingest_measurements(bad, "csv")

    def test_rows_sorted(self):
        lines = TABLE_CSV.decode().strip().splitlines()
        shuffled = "\n".join([lines[0], lines[3], lines[1], lines[2]]) + "\n"
        series = gw.ingest_measurements(shuffled.encode(), "csv")
        assert series.index.is_monotonic_increasing

    def test_round_trip_identity(self):
        series = gw.ingest_measurements(TABLE_CSV, "csv")
        emitted = gw.emit_measurements(series)
        again = gw.ingest_measurements(emitted, "csv")
        assert again.data.equals(series.data)
        assert gw.emit_measurements(again) == emitted

    def test_missing_cells_survive_round_trip(self):
        holed = TABLE_CSV.replace(b"1003.18", b"")
        series = gw.ingest_measurements(holed, "csv")
        assert np.isnan(series.data["pressure"].iloc[1])
        again = gw.ingest_measurements(gw.emit_measurements(series), "csv")
        assert np.isnan(again.data["pressure"].iloc[1])

    def test_xlsx_ingest(self):
        rows = [list(gw.MEASUREMENT_COLUMNS),
                ["2022-02-22 05:30:00", 0.36, 1003.06, 22.97, 1.48, 257.64],
                ["2022-02-22 05:40:00", 0.38, 1003.18, 22.99, 1.69, 274.66]]
        series = gw.ingest_measurements(gw.write_xlsx(rows), "xlsx")
        assert series.data["ghi"].tolist() == [0.36, 0.38]

    def test_xlsx_excel_serial_dates(self):
        serial = (pd.Timestamp("2022-02-22 05:30:00")
                  - pd.Timestamp("1899-12-30")) / pd.Timedelta(days=1)
        rows = [list(gw.MEASUREMENT_COLUMNS),
                [serial, 0.36, 1003.06, 22.97, 1.48, 257.64],
                [serial + 10 / 1440, 0.38, 1003.18, 22.99, 1.69, 274.66]]
        series = gw.ingest_measurements(gw.write_xlsx(rows), "xlsx")
        assert series.index[0] == pd.Timestamp("2022-02-22 05:30:00")


class TestModelRuns:
    def _write_files(self, tmp_path, *, bad_series=False, duplicate=False):
        rows = []
        for series_id, issue in (("s1", "2024-05-09 08:00"),
                                 ("s2", "2024-05-09 08:00")):
            for h in range(1, 7):
                rows.append({"series_id": series_id, "issue_time": issue,
                             "horizon": h, "value": 100.0 * h})
        if duplicate:
            extra = [dict(r, issue_time="2024-05-09 08:00") for r in rows[:6]]
            for r in extra:
                r["series_id"] = "s3"
            rows.extend(extra)
        models = tmp_path / "models.csv"
        pd.DataFrame(rows).to_csv(models, index=False)
        horizons = tmp_path / "horizons.csv"
        meta = [
            {"series_id": "s1", "horizons": 6, "plant": "elpaso",
             "sensor": "ghi-1", "model": "lstm", "resolution_minutes": 60},
            {"series_id": "s2", "horizons": 6, "plant": "elpaso",
             "sensor": "ghi-1", "model": "gfs", "resolution_minutes": 60},
        ]
        if duplicate:
            meta.append({"series_id": "s3", "horizons": 6, "plant": "elpaso",
                         "sensor": "ghi-1", "model": "lstm",
                         "resolution_minutes": 60})
        if bad_series:
            meta = meta[:1]
        pd.DataFrame(meta).to_csv(horizons, index=False)
        return models, horizons

    def test_join(self, tmp_path):
        models, horizons = self._write_files(tmp_path)
        runs = gw.ingest_model_runs(models, horizons)
        assert sorted(model for model, _ in runs) == ["gfs", "lstm"]
        run = dict(runs)["lstm"]
        assert run.values == tuple(100.0 * h for h in range(1, 7))
        assert run.step_minutes == 60

    def test_unresolved_series(self, tmp_path):
        models, horizons = self._write_files(tmp_path, bad_series=True)
        with pytest.raises(gw.UnresolvedSeriesId):
            gw.ingest_model_runs(models, horizons)

    def test_duplicate_run(self, tmp_path):
        models, horizons = self._write_files(tmp_path, duplicate=True)
        with pytest.raises(gw.DuplicateRun):
            gw.ingest_model_runs(models, horizons)


class TestStore:
    def _frame(self, n=6):
        index = pd.date_range("2024-05-09 00:00", periods=n, freq="10min")
        return pd.DataFrame({"ghi": np.linspace(0.0, 50.0, n)}, index=index)

    def test_write_then_read_exact(self, tmp_path):
        with gw.StoreHandle(tmp_path / "s.db") as handle:
            gw.store_series(handle, "obs", self._frame())
            out = gw.query_series(handle, "obs")
            assert len(out) == 6
            assert np.array_equal(out["ghi"].to_numpy(),
                                  self._frame()["ghi"].to_numpy())

    def test_half_open_range(self, tmp_path):
        with gw.StoreHandle(tmp_path / "s.db") as handle:
            gw.store_series(handle, "obs", self._frame())
            out = gw.query_series(handle, "obs",
                                  start="2024-05-09 00:10",
                                  end="2024-05-09 00:30")
            assert len(out) == 2

    def test_empty_range(self, tmp_path):
        with gw.StoreHandle(tmp_path / "s.db") as handle:
            gw.store_series(handle, "obs", self._frame())
            out = gw.query_series(handle, "obs", start="2025-01-01",
                                  end="2025-01-02")
            assert out.empty

    def test_table_missing(self, tmp_path):
        with gw.StoreHandle(tmp_path / "s.db") as handle:
            with pytest.raises(gw.TableMissing):
                gw.query_series(handle, "nope")

    def test_second_writer_conflicts(self, tmp_path):
        path = tmp_path / "s.db"
        with gw.StoreHandle(path) as first, gw.StoreHandle(path) as second:
            with first.write_lock():
                with pytest.raises(gw.WriteConflict):
                    gw.store_series(second, "obs", self._frame())

    def test_failed_write_rolls_back(self, tmp_path):
        frame = self._frame()
        bad = frame.rename(columns={"ghi": 'bad"name'})
        with gw.StoreHandle(tmp_path / "s.db") as handle:
            with pytest.raises(ValueError):
                gw.store_series(handle, "obs", bad)
            assert "obs" not in handle.tables()


class TestPiClient:
    def test_minute_day(self, tmp_path):
        series = gw.fetch_pi("2024-05-09T00:00:00", "2024-05-09T23:59:59",
                             "minute", tmp_path / "pi.db",
                             gw.MockPiTransport())
        assert len(series) == 1440
        with gw.StoreHandle(tmp_path / "pi.db") as handle:
            assert len(gw.query_series(handle, "pi_measurements")) == 1440

    def test_deterministic_fixture(self, tmp_path):
        a = gw.fetch_pi("2024-05-09T00:00:00", "2024-05-09T06:00:00",
                        "hourly", tmp_path / "a.db", gw.MockPiTransport())
        b = gw.fetch_pi("2024-05-09T00:00:00", "2024-05-09T06:00:00",
                        "hourly", tmp_path / "b.db", gw.MockPiTransport())
        assert a.data.equals(b.data)

    def test_start_after_end(self, tmp_path):
        with pytest.raises(ValueError):
            gw.fetch_pi("2024-05-10T00:00:00", "2024-05-09T00:00:00",
                        "minute", tmp_path / "pi.db", gw.MockPiTransport())

    def test_unknown_freq(self, tmp_path):
        with pytest.raises(gw.UnknownFreq):
            gw.fetch_pi("2024-05-09T00:00:00", "2024-05-09T23:59:59",
                        "weekly", tmp_path / "pi.db", gw.MockPiTransport())

    def test_nothing_persisted_on_transport_error(self, tmp_path):
        class FailingTransport:
            def fetch(self, start, end, freq_minutes):
                raise gw.TransportError("link down")

        db = tmp_path / "pi.db"
        with pytest.raises(gw.TransportError):
            gw.fetch_pi("2024-05-09T00:00:00", "2024-05-09T23:59:59",
                        "minute", db, FailingTransport())
        assert not db.exists() or not gw.StoreHandle(db).tables()


class TestReuniwattClient:
    def test_two_day_fetch(self, tmp_path):
        bundle = gw.fetch_reuniwatt("20240508", "20240509",
                                    gw.MockReuniwattTransport(), tmp_path)
        assert set(bundle.records) == {"daycast", "hourcast", "instacast"}
        for cast, frame in bundle.records.items():
            days = {stamp.date().isoformat() for stamp in frame.index}
            assert days == {"2024-05-08", "2024-05-09"}
            assert (tmp_path / "reuniwatt" / "20240508" / f"{cast}.csv").exists()
        assert (tmp_path / "reuniwatt" / "20240508" / "images.json").exists()
        assert bundle.image_manifest

    def test_stop_before_start(self, tmp_path):
        with pytest.raises(ValueError):
            gw.fetch_reuniwatt("20240509", "20240508",
                               gw.MockReuniwattTransport(), tmp_path)

    def test_bad_date_format(self, tmp_path):
        with pytest.raises(ValueError):
            gw.fetch_reuniwatt("2024-05-08", "20240509",
                               gw.MockReuniwattTransport(), tmp_path)

    def test_partial_payload_warns(self, tmp_path, caplog):
        transport = gw.MockReuniwattTransport(missing_casts=("instacast",))
        with caplog.at_level("WARNING"):
            bundle = gw.fetch_reuniwatt("20240508", "20240508", transport,
                                        tmp_path)
        assert set(bundle.records) == {"daycast", "hourcast"}
        assert any("instacast" in r.message for r in caplog.records)

    def test_malformed_payload(self, tmp_path):
        class BadTransport:
            def fetch(self, date_start, date_stop):
                return {"daycast": [{"when": "2024-05-08", "w": 1}]}

        with pytest.raises(gw.MalformedPayload):
            gw.fetch_reuniwatt("20240508", "20240508", BadTransport(),
                               tmp_path)


class TestGhiCsv:
    def test_read(self, tmp_path):
        path = tmp_path / "gfs.csv"
        pd.DataFrame({
            "timestamp": pd.date_range("2024-05-09", periods=4, freq="1h"),
            "ghi": [0.0, 10.0, 50.0, 120.0],
        }).to_csv(path, index=False)
        series = gw.read_ghi_csv(path)
        assert series.iloc[2] == 50.0

    def test_header_checked(self, tmp_path):
        path = tmp_path / "gfs.csv"
        pd.DataFrame({"time": [1], "irr": [2]}).to_csv(path, index=False)
        with pytest.raises(gw.HeaderMismatch):
            gw.read_ghi_csv(path)
