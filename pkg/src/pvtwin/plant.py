"""Cascading plant architecture: typed tree, JSON parsing, validation.

A plant is described by a plain-text JSON document nested as
system -> conversion units -> inverters -> string boxes -> array
(panel + tracker), with one location (and optionally one database table
binding) per conversion unit. Parsing is strict: unknown keys and missing
fields are errors that name the offending path, and a document only parses
if every structural invariant holds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from importlib import resources
from typing import Any, Optional


TECHNOLOGIES = ("mono-Si", "multi-Si", "CdTe", "CIGS", "a-Si")
MOUNTINGS = ("ground", "roof", "carport")
RACKINGS = ("open_rack", "close_mount", "insulated_back")

ArrayPath = tuple[int, int, int]


class PlantConfigError(Exception):
    """Base for plant-document failures; carries the document path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class ConfigSyntaxError(PlantConfigError):
    pass


class MissingFieldError(PlantConfigError):
    def __init__(self, path: str):
        super().__init__(path, "required field missing")


class UnknownFieldError(PlantConfigError):
    pass


class InvariantViolation(PlantConfigError):
    pass


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return not self.violations

    @property
    def empty(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Location:
    longitude: float          # degrees east
    latitude: float           # degrees north
    altitude: float           # m
    time_zone: float          # UTC offset, hours
    surface_albedo: float


@dataclass(frozen=True)
class SqTable:
    database: str
    table: str


@dataclass(frozen=True)
class Tracker:
    with_tracker: bool
    surface_tilt: float       # deg, used when fixed
    surface_azimuth: float    # deg
    axis_azimuth: float       # deg
    max_angle: float          # deg
    row_height: float         # m
    row_width: float          # m


@dataclass(frozen=True)
class Panel:
    name: str
    noct: float               # deg C
    technology: str
    ns: int                   # cells in series
    isc_ref: float            # A
    voc_ref: float            # V
    imp_ref: float            # A
    vmp_ref: float            # V
    alpha_sc: float           # A/degC
    beta_oc: float            # V/degC
    gamma_r: float            # %/degC
    p_stc: float              # W
    bifacial: bool
    bifaciality: float
    mounting: str
    racking: str
    degradation: float        # fraction/year
    b0: float = 0.05          # incidence-angle modifier coefficient


@dataclass(frozen=True)
class ArrayConfig:
    modules_per_string: int   # PS
    strings_per_inverter: int  # PP
    panel: Panel
    tracker: Tracker


@dataclass(frozen=True)
class StringBox:
    number_of_wires: int
    electrical_resistivity: float  # ohm*m
    wire_length: float             # m
    cross_sectional_area: float    # m^2
    losses: float
    array: ArrayConfig


@dataclass(frozen=True)
class Inverter:
    name: str
    paco: float               # W AC rated
    pdco: float               # W DC at rated AC
    vdco: float               # V DC reference
    pso: float                # W DC start threshold
    c0: float
    c1: float
    c2: float
    c3: float
    p_night: float            # W night draw
    losses: float
    string_boxes: tuple[StringBox, ...]


@dataclass(frozen=True)
class ThermalParams:
    a: float = -3.56          # exponent intercept
    b: float = -0.075         # s/m wind coefficient
    delta_t: float = 3.0      # degC cell-to-back offset at STC


@dataclass(frozen=True)
class ConversionUnit:
    name: str
    wire_voltage: float       # V
    electrical_resistivity: float
    wire_length: float
    cross_sectional_area: float
    losses: float
    location: Location
    inverters: tuple[Inverter, ...]
    sqtable: Optional[SqTable] = None


@dataclass(frozen=True)
class PlantSystem:
    name: str
    kpc: float                # point-of-interconnection derates
    kt: float
    kin: float
    conversion_units: tuple[ConversionUnit, ...]
    thermal: ThermalParams = ThermalParams()


# ---------------------------------------------------------------------------
# parsing

def _node(obj: Any, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigSyntaxError(path, f"expected an object, found {type(obj).__name__}")
    return obj


def _check_keys(obj: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise UnknownFieldError(path, f"unknown key(s): {', '.join(unknown)}")


def _get(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise MissingFieldError(f"{path}/{key}")
    return obj[key]


def _number(obj: dict, key: str, path: str) -> float:
    val = _get(obj, key, path)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigSyntaxError(f"{path}/{key}", "expected a number")
    return float(val)


def _integer(obj: dict, key: str, path: str) -> int:
    val = _get(obj, key, path)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigSyntaxError(f"{path}/{key}", "expected an integer")
    return val


def _text(obj: dict, key: str, path: str) -> str:
    val = _get(obj, key, path)
    if not isinstance(val, str):
        raise ConfigSyntaxError(f"{path}/{key}", "expected text")
    return val


def _flag(obj: dict, key: str, path: str) -> bool:
    val = _get(obj, key, path)
    if not isinstance(val, bool):
        raise ConfigSyntaxError(f"{path}/{key}", "expected true/false")
    return val


def _items(obj: dict, key: str, path: str) -> list:
    val = _get(obj, key, path)
    if not isinstance(val, (list, tuple)):
        raise ConfigSyntaxError(f"{path}/{key}", "expected a list")
    return list(val)


def _parse_location(obj: Any, path: str) -> Location:
    obj = _node(obj, path)
    _check_keys(obj, {"longitude", "latitude", "altitude", "time_zone",
                      "surface_albedo"}, path)
    return Location(
        longitude=_number(obj, "longitude", path),
        latitude=_number(obj, "latitude", path),
        altitude=_number(obj, "altitude", path),
        time_zone=_number(obj, "time_zone", path),
        surface_albedo=_number(obj, "surface_albedo", path),
    )


def _parse_tracker(obj: Any, path: str) -> Tracker:
    obj = _node(obj, path)
    _check_keys(obj, {"with_tracker", "surface_tilt", "surface_azimuth",
                      "axis_azimuth", "max_angle", "row_height", "row_width"},
                path)
    return Tracker(
        with_tracker=_flag(obj, "with_tracker", path),
        surface_tilt=_number(obj, "surface_tilt", path),
        surface_azimuth=_number(obj, "surface_azimuth", path),
        axis_azimuth=_number(obj, "axis_azimuth", path),
        max_angle=_number(obj, "max_angle", path),
        row_height=_number(obj, "row_height", path),
        row_width=_number(obj, "row_width", path),
    )


def _parse_panel(obj: Any, path: str) -> Panel:
    obj = _node(obj, path)
    _check_keys(obj, {"name", "noct", "technology", "ns", "isc_ref",
                      "voc_ref", "imp_ref", "vmp_ref", "alpha_sc", "beta_oc",
                      "gamma_r", "p_stc", "bifacial", "bifaciality",
                      "mounting", "racking", "degradation", "b0"}, path)
    return Panel(
        name=_text(obj, "name", path),
        noct=_number(obj, "noct", path),
        technology=_text(obj, "technology", path),
        ns=_integer(obj, "ns", path),
        isc_ref=_number(obj, "isc_ref", path),
        voc_ref=_number(obj, "voc_ref", path),
        imp_ref=_number(obj, "imp_ref", path),
        vmp_ref=_number(obj, "vmp_ref", path),
        alpha_sc=_number(obj, "alpha_sc", path),
        beta_oc=_number(obj, "beta_oc", path),
        gamma_r=_number(obj, "gamma_r", path),
        p_stc=_number(obj, "p_stc", path),
        bifacial=_flag(obj, "bifacial", path),
        bifaciality=_number(obj, "bifaciality", path),
        mounting=_text(obj, "mounting", path),
        racking=_text(obj, "racking", path),
        degradation=_number(obj, "degradation", path),
        b0=_number(obj, "b0", path) if "b0" in obj else 0.05,
    )


def _parse_array(obj: Any, path: str) -> ArrayConfig:
    obj = _node(obj, path)
    _check_keys(obj, {"modules_per_string", "strings_per_inverter", "panel",
                      "tracker"}, path)
    return ArrayConfig(
        modules_per_string=_integer(obj, "modules_per_string", path),
        strings_per_inverter=_integer(obj, "strings_per_inverter", path),
        panel=_parse_panel(_get(obj, "panel", path), f"{path}/panel"),
        tracker=_parse_tracker(_get(obj, "tracker", path), f"{path}/tracker"),
    )


def _parse_string_box(obj: Any, path: str) -> StringBox:
    obj = _node(obj, path)
    _check_keys(obj, {"number_of_wires", "electrical_resistivity",
                      "wire_length", "cross_sectional_area", "losses",
                      "array"}, path)
    return StringBox(
        number_of_wires=_integer(obj, "number_of_wires", path),
        electrical_resistivity=_number(obj, "electrical_resistivity", path),
        wire_length=_number(obj, "wire_length", path),
        cross_sectional_area=_number(obj, "cross_sectional_area", path),
        losses=_number(obj, "losses", path),
        array=_parse_array(_get(obj, "array", path), f"{path}/array"),
    )


def _parse_inverter(obj: Any, path: str) -> Inverter:
    obj = _node(obj, path)
    _check_keys(obj, {"name", "paco", "pdco", "vdco", "pso", "c0", "c1",
                      "c2", "c3", "p_night", "losses", "string_boxes"}, path)
    boxes = tuple(
        _parse_string_box(b, f"{path}/string_boxes[{i}]")
        for i, b in enumerate(_items(obj, "string_boxes", path)))
    return Inverter(
        name=_text(obj, "name", path),
        paco=_number(obj, "paco", path),
        pdco=_number(obj, "pdco", path),
        vdco=_number(obj, "vdco", path),
        pso=_number(obj, "pso", path),
        c0=_number(obj, "c0", path),
        c1=_number(obj, "c1", path),
        c2=_number(obj, "c2", path),
        c3=_number(obj, "c3", path),
        p_night=_number(obj, "p_night", path),
        losses=_number(obj, "losses", path),
        string_boxes=boxes,
    )


def _parse_conversion_unit(obj: Any, path: str) -> ConversionUnit:
    obj = _node(obj, path)
    _check_keys(obj, {"name", "wire_voltage", "electrical_resistivity",
                      "wire_length", "cross_sectional_area", "losses",
                      "location", "inverters", "sqtable"}, path)
    sqtable = None
    if "sqtable" in obj:
        sq = _node(obj["sqtable"], f"{path}/sqtable")
        _check_keys(sq, {"database", "table"}, f"{path}/sqtable")
        sqtable = SqTable(database=_text(sq, "database", f"{path}/sqtable"),
                          table=_text(sq, "table", f"{path}/sqtable"))
    inverters = tuple(
        _parse_inverter(v, f"{path}/inverters[{i}]")
        for i, v in enumerate(_items(obj, "inverters", path)))
    return ConversionUnit(
        name=_text(obj, "name", path),
        wire_voltage=_number(obj, "wire_voltage", path),
        electrical_resistivity=_number(obj, "electrical_resistivity", path),
        wire_length=_number(obj, "wire_length", path),
        cross_sectional_area=_number(obj, "cross_sectional_area", path),
        losses=_number(obj, "losses", path),
        location=_parse_location(_get(obj, "location", path), f"{path}/location"),
        inverters=inverters,
        sqtable=sqtable,
    )


def parse_plant_architecture(document: str | bytes | dict) -> PlantSystem:
    """Parse and validate a plant architecture document.

    Accepts the raw JSON text/bytes or an already-decoded object. Raises
    ConfigSyntaxError / MissingFieldError / UnknownFieldError for structural
    problems and InvariantViolation when a value is out of bounds; the error
    message names the document path.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ConfigSyntaxError("document", f"malformed JSON: {exc}") from exc
    root = _node(document, "system")
    _check_keys(root, {"name", "kpc", "kt", "kin", "conversion_units",
                       "thermal"}, "system")
    thermal = ThermalParams()
    if "thermal" in root:
        th = _node(root["thermal"], "system/thermal")
        _check_keys(th, {"a", "b", "delta_t"}, "system/thermal")
        thermal = ThermalParams(
            a=_number(th, "a", "system/thermal"),
            b=_number(th, "b", "system/thermal"),
            delta_t=_number(th, "delta_t", "system/thermal"),
        )
    units = tuple(
        _parse_conversion_unit(u, f"system/conversion_units[{i}]")
        for i, u in enumerate(_items(root, "conversion_units", "system")))
    system = PlantSystem(
        name=_text(root, "name", "system"),
        kpc=_number(root, "kpc", "system"),
        kt=_number(root, "kt", "system"),
        kin=_number(root, "kin", "system"),
        conversion_units=units,
        thermal=thermal,
    )
    report = validate_system(system)
    if not report.empty:
        first = report.violations[0]
        raise InvariantViolation(first.path, first.message)
    return system


def load_plant_architecture(path) -> PlantSystem:
    with open(path, "rb") as fh:
        return parse_plant_architecture(fh.read())


# ---------------------------------------------------------------------------
# validation

def _bounds(checks, out, path):
    for field_name, value, ok, message in checks:
        if not ok:
            out.append(Violation(f"{path}/{field_name}", message))


def validate_system(system: PlantSystem) -> ValidationReport:
    """Collect every invariant violation in the tree (empty report = valid)."""
    out: list[Violation] = []
    for key in ("kpc", "kt", "kin"):
        val = getattr(system, key)
        if not 0.0 <= val <= 1.0:
            out.append(Violation(f"system/{key}", "derate factor out of [0, 1]"))
    if not system.conversion_units:
        out.append(Violation("system/conversion_units",
                             "at least one conversion unit required"))
    if system.thermal.b > 0:
        out.append(Violation("system/thermal/b", "wind coefficient must be <= 0"))
    if system.thermal.delta_t < 0:
        out.append(Violation("system/thermal/delta_t", "offset must be >= 0"))
    for i, cu in enumerate(system.conversion_units):
        _validate_cu(cu, f"system/conversion_units[{i}]", out)
    return ValidationReport(tuple(out))


def _validate_cu(cu: ConversionUnit, path: str, out: list[Violation]) -> None:
    _bounds([
        ("wire_voltage", cu.wire_voltage, cu.wire_voltage > 0, "must be > 0"),
        ("electrical_resistivity", cu.electrical_resistivity,
         cu.electrical_resistivity > 0, "must be > 0"),
        ("wire_length", cu.wire_length, cu.wire_length >= 0, "must be >= 0"),
        ("cross_sectional_area", cu.cross_sectional_area,
         cu.cross_sectional_area > 0, "must be > 0"),
        ("losses", cu.losses, 0.0 <= cu.losses <= 1.0, "must be in [0, 1]"),
    ], out, path)
    loc, lpath = cu.location, f"{path}/location"
    _bounds([
        ("latitude", loc.latitude, -90.0 <= loc.latitude <= 90.0,
         "must be in [-90, 90]"),
        ("longitude", loc.longitude, -180.0 <= loc.longitude <= 180.0,
         "must be in [-180, 180]"),
        ("surface_albedo", loc.surface_albedo,
         0.0 <= loc.surface_albedo <= 1.0, "must be in [0, 1]"),
    ], out, lpath)
    for i, inv in enumerate(cu.inverters):
        _validate_inverter(inv, f"{path}/inverters[{i}]", out)


def _validate_inverter(inv: Inverter, path: str, out: list[Violation]) -> None:
    _bounds([
        ("paco", inv.paco, inv.paco > 0, "must be > 0"),
        ("pdco", inv.pdco, inv.pdco >= inv.paco, "must be >= paco"),
        ("pso", inv.pso, inv.pso >= 0, "must be >= 0"),
        ("p_night", inv.p_night, inv.p_night >= 0, "must be >= 0"),
        ("losses", inv.losses, 0.0 <= inv.losses <= 1.0, "must be in [0, 1]"),
    ], out, path)
    for i, box in enumerate(inv.string_boxes):
        _validate_string_box(box, f"{path}/string_boxes[{i}]", out)


def _validate_string_box(box: StringBox, path: str, out: list[Violation]) -> None:
    _bounds([
        ("number_of_wires", box.number_of_wires, box.number_of_wires >= 1,
         "must be >= 1"),
        ("electrical_resistivity", box.electrical_resistivity,
         box.electrical_resistivity > 0, "must be > 0"),
        ("wire_length", box.wire_length, box.wire_length >= 0, "must be >= 0"),
        ("cross_sectional_area", box.cross_sectional_area,
         box.cross_sectional_area > 0, "must be > 0"),
        ("losses", box.losses, 0.0 <= box.losses <= 1.0, "must be in [0, 1]"),
    ], out, path)
    arr, apath = box.array, f"{path}/array"
    _bounds([
        ("modules_per_string", arr.modules_per_string,
         arr.modules_per_string >= 1, "must be >= 1"),
        ("strings_per_inverter", arr.strings_per_inverter,
         arr.strings_per_inverter >= 1, "must be >= 1"),
    ], out, apath)
    _validate_panel(arr.panel, f"{apath}/panel", out)
    _validate_tracker(arr.tracker, f"{apath}/tracker", out)


def _validate_panel(p: Panel, path: str, out: list[Violation]) -> None:
    stc_gap = abs(p.vmp_ref * p.imp_ref - p.p_stc) / p.p_stc if p.p_stc > 0 else 1.0
    _bounds([
        ("technology", p.technology, p.technology in TECHNOLOGIES,
         f"must be one of {', '.join(TECHNOLOGIES)}"),
        ("ns", p.ns, p.ns >= 1, "must be >= 1"),
        ("isc_ref", p.isc_ref, p.isc_ref > p.imp_ref > 0,
         "must satisfy isc_ref > imp_ref > 0"),
        ("voc_ref", p.voc_ref, p.voc_ref > p.vmp_ref > 0,
         "must satisfy voc_ref > vmp_ref > 0"),
        ("p_stc", p.p_stc, p.p_stc > 0 and stc_gap <= 0.02,
         "must be within 2% of vmp_ref * imp_ref"),
        ("gamma_r", p.gamma_r, p.gamma_r < 0, "must be < 0"),
        ("bifaciality", p.bifaciality, 0.0 <= p.bifaciality <= 1.0,
         "must be in [0, 1]"),
        ("mounting", p.mounting, p.mounting in MOUNTINGS,
         f"must be one of {', '.join(MOUNTINGS)}"),
        ("racking", p.racking, p.racking in RACKINGS,
         f"must be one of {', '.join(RACKINGS)}"),
        ("degradation", p.degradation, 0.0 <= p.degradation < 1.0,
         "must be in [0, 1)"),
        ("b0", p.b0, 0.0 <= p.b0 < 1.0, "must be in [0, 1)"),
    ], out, path)


def _validate_tracker(t: Tracker, path: str, out: list[Violation]) -> None:
    _bounds([
        ("max_angle", t.max_angle, 0.0 < t.max_angle <= 90.0,
         "must be in (0, 90]"),
        ("surface_tilt", t.surface_tilt, 0.0 <= t.surface_tilt <= 90.0,
         "must be in [0, 90]"),
        ("surface_azimuth", t.surface_azimuth,
         0.0 <= t.surface_azimuth < 360.0, "must be in [0, 360)"),
        ("axis_azimuth", t.axis_azimuth, 0.0 <= t.axis_azimuth < 360.0,
         "must be in [0, 360)"),
    ], out, path)
    if t.with_tracker and not t.row_width > 0:
        out.append(Violation(f"{path}/row_width",
                             "must be > 0 when with_tracker"))


# ---------------------------------------------------------------------------
# structure helpers

def enumerate_arrays(system: PlantSystem) -> list[ArrayPath]:
    """All (cu, inverter, string box) index triples in document order."""
    return [
        (ci, vi, bi)
        for ci, cu in enumerate(system.conversion_units)
        for vi, inv in enumerate(cu.inverters)
        for bi, _ in enumerate(inv.string_boxes)
    ]


def array_at(system: PlantSystem, path: ArrayPath) -> ArrayConfig:
    ci, vi, bi = path
    return system.conversion_units[ci].inverters[vi].string_boxes[bi].array


def serialize_plant(system: PlantSystem) -> dict:
    """Document form of a system; parse(serialize(s)) == s."""
    doc = asdict(system)
    for cu in doc["conversion_units"]:
        if cu["sqtable"] is None:
            del cu["sqtable"]
    return doc


def serialize_plant_json(system: PlantSystem, indent: int = 2) -> str:
    return json.dumps(serialize_plant(system), indent=indent)


def elpaso_architecture() -> PlantSystem:
    """The bundled 12-CU reference plant description."""
    data = resources.files("pvtwin.data").joinpath("architecture_elpaso.json")
    return parse_plant_architecture(data.read_bytes())
