"""File ingestion, embedded persistence, and external-server clients.

Measurement files follow the plant's tabular layout (Spanish column
names, 10-minute grid); model-run files come as a long-format value table
plus a companion horizons table. The AVEVA PI and Reuniwatt sky-camera
clients talk through pluggable transports so every test runs offline
against deterministic fixtures. Persistence is a single-writer SQLite
store of named time-series tables.
"""

from __future__ import annotations

import io
import json
import logging
import re
import sqlite3
import zipfile
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence
from xml.etree import ElementTree

import numpy as np
import pandas as pd

from .qc import ForecastSeries, WeatherSeries

log = logging.getLogger(__name__)

#: measurement-file header, exactly as the plant exports it
MEASUREMENT_COLUMNS = ("Fecha", "GHI", "Presion", "Temperatura Ambiente",
                       "Wind Speed", "Wind Direction")
_COLUMN_MAP = {
    "GHI": "ghi",
    "Presion": "pressure",
    "Temperatura Ambiente": "t_amb",
    "Wind Speed": "wind_speed",
    "Wind Direction": "wind_direction",
}

PI_FREQUENCIES = {"minute": 1, "hourly": 60, "daily": 1440}

REUNIWATT_CASTS = ("daycast", "hourcast", "instacast")


class GatewayError(Exception):
    pass


class HeaderMismatch(GatewayError):
    def __init__(self, expected: Sequence[str], found: Sequence[str]):
        self.expected = tuple(expected)
        self.found = tuple(found)
        super().__init__(
            f"expected columns {list(expected)}, found {list(found)}")


class EmptyFile(GatewayError):
    pass


class BadTimestamp(GatewayError):
    pass


class DuplicateStamp(GatewayError):
    pass


class UnresolvedSeriesId(GatewayError):
    pass


class DuplicateRun(GatewayError):
    pass


class TransportError(GatewayError):
    pass


class AuthError(TransportError):
    pass


class EmptyResponse(GatewayError):
    pass


class UnknownFreq(GatewayError):
    pass


class MalformedPayload(GatewayError):
    pass


class TableMissing(GatewayError):
    pass


class WriteConflict(GatewayError):
    pass


# ---------------------------------------------------------------------------
# minimal XLSX codec (single sheet, text and numeric cells)

_EXCEL_EPOCH = pd.Timestamp("1899-12-30")


def _xlsx_rows(data: bytes) -> list[list[object]]:
    ns = {"m": "http://schemas.openxmlformats.org/spreadsheetml/2006/main"}
    with zipfile.ZipFile(io.BytesIO(data)) as zf:
        shared: list[str] = []
        if "xl/sharedStrings.xml" in zf.namelist():
            root = ElementTree.fromstring(zf.read("xl/sharedStrings.xml"))
            for si in root.findall("m:si", ns):
                shared.append("".join(t.text or "" for t in si.iter(
                    "{http://schemas.openxmlformats.org/spreadsheetml/2006/main}t")))
        sheet = ElementTree.fromstring(zf.read("xl/worksheets/sheet1.xml"))
        rows = []
        for row in sheet.iter(
                "{http://schemas.openxmlformats.org/spreadsheetml/2006/main}row"):
            cells: dict[int, object] = {}
            for cell in row:
                ref = cell.get("r", "")
                col = 0
                for ch in ref:
                    if ch.isalpha():
                        col = col * 26 + (ord(ch.upper()) - 64)
                    else:
                        break
                ctype = cell.get("t", "n")
                if ctype == "inlineStr":
                    text = "".join(t.text or "" for t in cell.iter(
                        "{http://schemas.openxmlformats.org/spreadsheetml/2006/main}t"))
                    value: object = text
                else:
                    v = cell.find("m:v", ns)
                    if v is None:
                        continue
                    if ctype == "s":
                        value = shared[int(v.text)]
                    elif ctype == "str":
                        value = v.text
                    else:
                        value = float(v.text)
                cells[col - 1] = value
            width = max(cells) + 1 if cells else 0
            rows.append([cells.get(i) for i in range(width)])
        return rows


def write_xlsx(rows: Iterable[Sequence[object]]) -> bytes:
    """Single-sheet workbook with inline strings; used for fixtures."""
    def cell_xml(ref, value):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return f'<c r="{ref}"><v>{value}</v></c>'
        text = str(value).replace("&", "&amp;").replace("<", "&lt;")
        return f'<c r="{ref}" t="inlineStr"><is><t>{text}</t></is></c>'

    def col_name(i):
        name = ""
        i += 1
        while i:
            i, rem = divmod(i - 1, 26)
            name = chr(65 + rem) + name
        return name

    body = []
    for r, row in enumerate(rows, start=1):
        cells = "".join(cell_xml(f"{col_name(c)}{r}", v)
                        for c, v in enumerate(row) if v is not None)
        body.append(f'<row r="{r}">{cells}</row>')
    sheet = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<worksheet xmlns="http://schemas.openxmlformats.org/'
        'spreadsheetml/2006/main"><sheetData>'
        + "".join(body) + "</sheetData></worksheet>")
    workbook = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<workbook xmlns="http://schemas.openxmlformats.org/'
        'spreadsheetml/2006/main" xmlns:r="http://schemas.openxmlformats.org/'
        'officeDocument/2006/relationships"><sheets>'
        '<sheet name="Sheet1" sheetId="1" r:id="rId1"/></sheets></workbook>')
    rels = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<Relationships xmlns="http://schemas.openxmlformats.org/package/'
        '2006/relationships"><Relationship Id="rId1" Type="http://schemas.'
        'openxmlformats.org/officeDocument/2006/relationships/worksheet" '
        'Target="worksheets/sheet1.xml"/></Relationships>')
    root_rels = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<Relationships xmlns="http://schemas.openxmlformats.org/package/'
        '2006/relationships"><Relationship Id="rId1" Type="http://schemas.'
        'openxmlformats.org/officeDocument/2006/relationships/officeDocument" '
        'Target="xl/workbook.xml"/></Relationships>')
    types = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<Types xmlns="http://schemas.openxmlformats.org/package/2006/'
        'content-types"><Default Extension="rels" ContentType="application/'
        'vnd.openxmlformats-package.relationships+xml"/><Default '
        'Extension="xml" ContentType="application/xml"/><Override '
        'PartName="/xl/workbook.xml" ContentType="application/vnd.'
        'openxmlformats-officedocument.spreadsheetml.sheet.main+xml"/>'
        '<Override PartName="/xl/worksheets/sheet1.xml" ContentType='
        '"application/vnd.openxmlformats-officedocument.spreadsheetml.'
        'worksheet+xml"/></Types>')
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr("[Content_Types].xml", types)
        zf.writestr("_rels/.rels", root_rels)
        zf.writestr("xl/workbook.xml", workbook)
        zf.writestr("xl/_rels/workbook.xml.rels", rels)
        zf.writestr("xl/worksheets/sheet1.xml", sheet)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# measurement files

def _parse_stamp(value: object) -> pd.Timestamp:
    if isinstance(value, float):
        # spreadsheet serial date; sub-second float residue is not real
        return (_EXCEL_EPOCH + pd.Timedelta(days=value)).round("s")
    try:
        return pd.Timestamp(str(value))
    except ValueError as exc:
        raise BadTimestamp(f"cannot parse timestamp {value!r}") from exc


def ingest_measurements(data: bytes, format: str = "csv") -> WeatherSeries:
    """Parse a plant measurement file into a typed weather series.

    The header must match the plant layout exactly (names, accents,
    order). Rows are sorted; duplicate timestamps are rejected.
    """
    if not data or not data.strip():
        raise EmptyFile("measurement file is empty")
    if format == "csv":
        rows = [line.split(",") for line in
                data.decode("utf-8-sig").strip().splitlines()]
    elif format == "xlsx":
        rows = _xlsx_rows(data)
    else:
        raise ValueError(f"unknown format {format!r}")
    if not rows:
        raise EmptyFile("measurement file has no rows")
    header = [str(c).strip() if c is not None else "" for c in rows[0]]
    if tuple(header) != MEASUREMENT_COLUMNS:
        raise HeaderMismatch(MEASUREMENT_COLUMNS, header)
    if len(rows) == 1:
        raise EmptyFile("measurement file has a header but no rows")

    stamps, records = [], []
    for row in rows[1:]:
        if all(c is None or str(c).strip() == "" for c in row):
            continue
        stamps.append(_parse_stamp(row[0]))
        values = []
        for cell in row[1:len(MEASUREMENT_COLUMNS)]:
            if cell is None or str(cell).strip() == "":
                values.append(np.nan)
            else:
                try:
                    values.append(float(cell))
                except ValueError as exc:
                    raise BadTimestamp(
                        f"non-numeric cell {cell!r} at {stamps[-1]}") from exc
        records.append(values)

    index = pd.DatetimeIndex(stamps)
    if index.has_duplicates:
        dupes = index[index.duplicated()].unique()
        raise DuplicateStamp(f"duplicate timestamp(s): {list(dupes[:3])}")
    df = pd.DataFrame(records, index=index,
                      columns=[_COLUMN_MAP[c] for c in MEASUREMENT_COLUMNS[1:]])
    return WeatherSeries.from_frame(df)


def emit_measurements(series: WeatherSeries) -> bytes:
    """Serialize a weather series back to the plant CSV layout."""
    reverse = {v: k for k, v in _COLUMN_MAP.items()}
    lines = [",".join(MEASUREMENT_COLUMNS)]
    df = series.data
    for stamp, row in df.iterrows():
        cells = [stamp.strftime("%Y-%m-%d %H:%M:%S")]
        for name in MEASUREMENT_COLUMNS[1:]:
            col = _COLUMN_MAP[name]
            value = row[col] if col in df.columns else np.nan
            cells.append("" if pd.isna(value) else repr(float(value)))
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode()


# ---------------------------------------------------------------------------
# model-run files

def ingest_model_runs(path_models, path_horizons
                      ) -> list[tuple[str, ForecastSeries]]:
    """Join the forecast-value table with its horizons companion.

    The models file is long-format (series_id, issue_time, horizon,
    value); the horizons file declares, per series id, the model name,
    plant, sensor, step resolution and horizon count. Every series id in
    the values file must resolve, and a (model, issue time) pair may
    appear only once.
    """
    models = pd.read_csv(path_models)
    horizons = pd.read_csv(path_horizons)
    required_m = {"series_id", "issue_time", "horizon", "value"}
    required_h = {"series_id", "horizons", "plant", "sensor", "model",
                  "resolution_minutes"}
    if not required_m <= set(models.columns):
        raise HeaderMismatch(sorted(required_m), list(models.columns))
    if not required_h <= set(horizons.columns):
        raise HeaderMismatch(sorted(required_h), list(horizons.columns))

    meta = horizons.set_index("series_id")
    if meta.index.has_duplicates:
        raise DuplicateRun("horizons file repeats a series id")
    out: list[tuple[str, ForecastSeries]] = []
    seen: set[tuple[str, str]] = set()
    for (series_id, issue), group in models.groupby(["series_id", "issue_time"]):
        if series_id not in meta.index:
            raise UnresolvedSeriesId(f"series id {series_id!r} not in horizons file")
        info = meta.loc[series_id]
        model_id = str(info["model"])
        key = (model_id, str(issue))
        if key in seen:
            raise DuplicateRun(f"model {model_id!r} already has a run at {issue}")
        seen.add(key)
        group = group.sort_values("horizon")
        expected = int(info["horizons"])
        if list(group["horizon"]) != list(range(1, expected + 1)):
            raise MalformedPayload(
                f"series {series_id!r} at {issue}: horizons must be 1..{expected}")
        out.append((model_id, ForecastSeries(
            issue_time=pd.Timestamp(str(issue)),
            values=tuple(float(v) for v in group["value"]),
            step_minutes=int(info["resolution_minutes"]))))
    return out


# ---------------------------------------------------------------------------
# embedded single-writer store

class StoreHandle:
    """Named time-series tables in one SQLite file, single writer."""

    def __init__(self, path):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, timeout=0.2)
        self._conn.isolation_level = None

    def close(self) -> None:
        self._conn.close()

    def __enter__(self) -> "StoreHandle":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    @contextmanager
    def write_lock(self):
        try:
            self._conn.execute("BEGIN IMMEDIATE")
        except sqlite3.OperationalError as exc:
            raise WriteConflict(f"another writer holds {self.path}") from exc
        try:
            yield self._conn
        except Exception:
            self._conn.execute("ROLLBACK")
            raise
        else:
            self._conn.execute("COMMIT")

    def tables(self) -> list[str]:
        rows = self._conn.execute(
            "SELECT name FROM sqlite_master WHERE type='table'").fetchall()
        return [r[0] for r in rows]


def _quote(name: str) -> str:
    if not re.fullmatch(r"[A-Za-z0-9_.-]+", name):
        raise ValueError(f"bad table/column name {name!r}")
    return f'"{name}"'


def store_series(handle: StoreHandle, table: str, frame: pd.DataFrame) -> int:
    """Write a time-indexed frame into a named table, all-or-nothing."""
    cols = list(frame.columns)
    with handle.write_lock() as conn:
        conn.execute(
            f"CREATE TABLE IF NOT EXISTS {_quote(table)} "
            f"(timestamp TEXT PRIMARY KEY, "
            + ", ".join(f"{_quote(c)} REAL" for c in cols) + ")")
        rows = [
            (stamp.isoformat(),) + tuple(
                None if pd.isna(v) else float(v) for v in record)
            for stamp, record in zip(frame.index, frame.to_numpy())
        ]
        conn.executemany(
            f"INSERT OR REPLACE INTO {_quote(table)} VALUES "
            f"({', '.join('?' for _ in range(len(cols) + 1))})", rows)
    return len(frame)


def query_series(handle: StoreHandle, table: str, start=None, end=None
                 ) -> pd.DataFrame:
    """Read rows from a named table over the half-open range [start, end)."""
    if table not in handle.tables():
        raise TableMissing(f"no table {table!r} in {handle.path}")
    query = f"SELECT * FROM {_quote(table)}"
    params: list[str] = []
    clauses = []
    if start is not None:
        clauses.append("timestamp >= ?")
        params.append(pd.Timestamp(start).isoformat())
    if end is not None:
        clauses.append("timestamp < ?")
        params.append(pd.Timestamp(end).isoformat())
    if clauses:
        query += " WHERE " + " AND ".join(clauses)
    query += " ORDER BY timestamp"
    df = pd.read_sql_query(query, handle._conn, params=params or None)
    if df.empty:
        return df
    df["timestamp"] = pd.to_datetime(df["timestamp"])
    return df.set_index("timestamp")


# ---------------------------------------------------------------------------
# AVEVA PI client

class PiTransport(Protocol):
    def fetch(self, start: pd.Timestamp, end: pd.Timestamp,
              freq_minutes: int) -> pd.DataFrame: ...


@dataclass(frozen=True)
class MockPiTransport:
    """Deterministic on-site measurement synthesizer for offline runs."""

    seed: int = 20240509

    def fetch(self, start: pd.Timestamp, end: pd.Timestamp,
              freq_minutes: int) -> pd.DataFrame:
        index = pd.date_range(start, end, freq=f"{freq_minutes}min")
        rng = np.random.default_rng(
            [self.seed, int(start.value), freq_minutes])
        minutes = index.hour * 60 + index.minute
        sun = np.maximum(0.0, np.sin((minutes - 360) / 720 * np.pi))
        ghi = 950.0 * sun * (1.0 - 0.15 * rng.random(len(index)))
        return pd.DataFrame({
            "ghi": np.round(ghi, 2),
            "pressure": np.round(1003.0 + rng.normal(0, 0.8, len(index)), 2),
            "t_amb": np.round(24.0 + 8.0 * sun + rng.normal(0, 0.3, len(index)), 2),
            "wind_speed": np.round(np.abs(rng.normal(1.6, 0.5, len(index))), 2),
            "wind_direction": np.round(rng.uniform(0, 360, len(index)), 2),
        }, index=index)


class HttpPiTransport:
    """JSON gateway to the on-site historian.

    Base URL and credentials come from PI_BASE_URL / PI_USER / PI_PASS.
    """

    def __init__(self, base_url: str, user: str = "", password: str = ""):
        self.base_url = base_url.rstrip("/")
        self.user = user
        self.password = password

    def fetch(self, start, end, freq_minutes):
        import urllib.error
        import urllib.parse
        import urllib.request
        params = urllib.parse.urlencode({
            "start_date": start.isoformat(), "end_date": end.isoformat(),
            "freq_minutes": freq_minutes})
        request = urllib.request.Request(f"{self.base_url}/series?{params}")
        if self.user:
            import base64
            token = base64.b64encode(
                f"{self.user}:{self.password}".encode()).decode()
            request.add_header("Authorization", f"Basic {token}")
        try:
            with urllib.request.urlopen(request, timeout=30) as resp:
                payload = json.loads(resp.read())
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise AuthError(f"historian rejected credentials ({exc.code})")
            raise TransportError(f"historian returned {exc.code}") from exc
        except urllib.error.URLError as exc:
            raise TransportError(str(exc)) from exc
        frame = pd.DataFrame(payload["rows"])
        frame["timestamp"] = pd.to_datetime(frame["timestamp"])
        return frame.set_index("timestamp")


def pi_transport_from_env() -> "HttpPiTransport":
    """Historian client configured from PI_BASE_URL / PI_USER / PI_PASS."""
    import os
    base_url = os.environ.get("PI_BASE_URL")
    if not base_url:
        raise TransportError("PI_BASE_URL is not configured")
    return HttpPiTransport(base_url, os.environ.get("PI_USER", ""),
                           os.environ.get("PI_PASS", ""))


def fetch_pi(start_date: str, end_date: str, freq: str,
             secondary_database, transport: PiTransport) -> WeatherSeries:
    """Download a measurement series and persist it locally.

    Dates use the YYYY-MM-DDThh:mm:ss format; ``freq`` is one of minute /
    hourly / daily. The series lands in the SQLite file at
    ``secondary_database`` (table ``pi_measurements``), written atomically,
    and is returned as a weather series.
    """
    if freq not in PI_FREQUENCIES:
        raise UnknownFreq(
            f"freq must be one of {sorted(PI_FREQUENCIES)}, got {freq!r}")
    start = pd.Timestamp(start_date)
    end = pd.Timestamp(end_date)
    if start >= end:
        raise ValueError("start_date must be before end_date")
    frame = transport.fetch(start, end, PI_FREQUENCIES[freq])
    if frame.empty:
        raise EmptyResponse(f"no rows between {start} and {end}")
    series = WeatherSeries.from_frame(frame)
    with StoreHandle(secondary_database) as handle:
        store_series(handle, "pi_measurements", series.data)
    return series


# ---------------------------------------------------------------------------
# Reuniwatt sky-camera client

class ReuniwattTransport(Protocol):
    def fetch(self, date_start: str, date_stop: str) -> dict: ...


@dataclass(frozen=True)
class MockReuniwattTransport:
    """Deterministic forecast payloads; omit casts via ``missing_casts``."""

    seed: int = 7
    missing_casts: tuple[str, ...] = ()

    def fetch(self, date_start: str, date_stop: str) -> dict:
        days = pd.date_range(pd.Timestamp(date_start),
                             pd.Timestamp(date_stop), freq="1D")
        payload: dict = {"images": []}
        rng = np.random.default_rng([self.seed, int(days[0].value)])
        for cast in REUNIWATT_CASTS:
            if cast in self.missing_casts:
                continue
            records = []
            for day in days:
                for hour in range(6, 18):
                    stamp = day + pd.Timedelta(hours=hour)
                    sun = np.sin((hour * 60 - 360) / 720 * np.pi)
                    records.append({
                        "timestamp": stamp.isoformat(),
                        "ghi": round(float(920.0 * max(sun, 0.0)
                                           * (1 - 0.1 * rng.random())), 2),
                    })
            payload[cast] = records
        for day in days:
            for hour in range(6, 18):
                payload["images"].append(
                    f"sky_{day.strftime('%Y%m%d')}_{hour:02d}00.jpg")
        return payload


class HttpReuniwattTransport:
    """Token-authenticated JSON gateway to the sky-camera forecast server."""

    def __init__(self, base_url: str, token: str = ""):
        self.base_url = base_url.rstrip("/")
        self.token = token

    def fetch(self, date_start: str, date_stop: str) -> dict:
        import urllib.error
        import urllib.parse
        import urllib.request
        params = urllib.parse.urlencode({"date_start": date_start,
                                         "date_stop": date_stop})
        request = urllib.request.Request(
            f"{self.base_url}/forecasts?{params}")
        if self.token:
            request.add_header("Authorization", f"Bearer {self.token}")
        try:
            with urllib.request.urlopen(request, timeout=60) as resp:
                return json.loads(resp.read())
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise AuthError(f"forecast server rejected token ({exc.code})")
            raise TransportError(f"forecast server returned {exc.code}") from exc
        except urllib.error.URLError as exc:
            raise TransportError(str(exc)) from exc


def reuniwatt_transport_from_env() -> HttpReuniwattTransport:
    """Sky-camera client configured from REUNIWATT_BASE_URL / REUNIWATT_TOKEN."""
    import os
    base_url = os.environ.get("REUNIWATT_BASE_URL")
    if not base_url:
        raise TransportError("REUNIWATT_BASE_URL is not configured")
    return HttpReuniwattTransport(base_url,
                                  os.environ.get("REUNIWATT_TOKEN", ""))


@dataclass(frozen=True)
class ReuniwattBundle:
    records: Mapping[str, pd.DataFrame]
    image_manifest: tuple[str, ...]
    directory: Path


_DATE8 = re.compile(r"^\d{8}$")


def fetch_reuniwatt(date_start: str, date_stop: str,
                    transport: ReuniwattTransport,
                    downloads_dir) -> ReuniwattBundle:
    """Download sky-camera forecasts and the image manifest.

    Dates use the YYYYMMDD format. Tabular forecasts for each present
    cast are written as CSV under downloads/reuniwatt/<date_start>/ with
    an images.json manifest alongside; casts absent from the payload are
    logged and skipped.
    """
    for label, value in (("date_start", date_start), ("date_stop", date_stop)):
        if not _DATE8.match(str(value)):
            raise ValueError(f"{label} must be YYYYMMDD, got {value!r}")
    if str(date_stop) < str(date_start):
        raise ValueError("date_stop must not precede date_start")
    payload = transport.fetch(str(date_start), str(date_stop))
    if not isinstance(payload, dict):
        raise MalformedPayload("payload is not an object")

    target = Path(downloads_dir) / "reuniwatt" / str(date_start)
    target.mkdir(parents=True, exist_ok=True)
    records: dict[str, pd.DataFrame] = {}
    for cast in REUNIWATT_CASTS:
        if cast not in payload:
            log.warning("reuniwatt payload has no %s records", cast)
            continue
        rows = payload[cast]
        try:
            frame = pd.DataFrame(rows)[["timestamp", "ghi"]]
            frame["timestamp"] = pd.to_datetime(frame["timestamp"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedPayload(f"bad {cast} records: {exc}") from exc
        frame = frame.set_index("timestamp")
        records[cast] = frame
        frame.to_csv(target / f"{cast}.csv")
    manifest = tuple(str(name) for name in payload.get("images", []))
    (target / "images.json").write_text(json.dumps(list(manifest), indent=1))
    return ReuniwattBundle(records=records, image_manifest=manifest,
                           directory=target)


# ---------------------------------------------------------------------------
# GFS forecast files (timestamp + GHI)

def read_ghi_csv(path) -> pd.Series:
    """Timestamp + GHI table, as delivered for the offer workflow."""
    df = pd.read_csv(path)
    cols = {c.lower().strip(): c for c in df.columns}
    if "timestamp" not in cols or "ghi" not in cols:
        raise HeaderMismatch(("timestamp", "ghi"), tuple(df.columns))
    stamps = pd.to_datetime(df[cols["timestamp"]])
    return pd.Series(df[cols["ghi"]].to_numpy(float),
                     index=pd.DatetimeIndex(stamps), name="ghi").sort_index()
