"""Plant architecture parsing, validation, and enumeration."""

import json
from dataclasses import replace

import pytest

from pvtwin import plant


class TestParse:
    def test_minimal_document(self, minimal_doc):
        system = plant.parse_plant_architecture(minimal_doc)
        assert len(system.conversion_units) == 1
        assert plant.enumerate_arrays(system) == [(0, 0, 0)]

    def test_parse_from_text(self, minimal_doc):
        system = plant.parse_plant_architecture(json.dumps(minimal_doc))
        assert system.name == "Minimal"

    def test_elpaso_structure(self, elpaso):
        assert len(elpaso.conversion_units) == 12
        for cu in elpaso.conversion_units:
            assert len(cu.inverters) == 4
            for inv in cu.inverters:
                assert len(inv.string_boxes) == 8
                configs = [(b.array.modules_per_string,
                            b.array.strings_per_inverter)
                           for b in inv.string_boxes]
                assert configs.count((30, 24)) == 7
                assert configs.count((30, 6)) == 1
        assert len(plant.enumerate_arrays(elpaso)) == 384

    def test_missing_field_names_path(self, minimal_doc):
        del minimal_doc["conversion_units"][0]["inverters"][0]["paco"]
        with pytest.raises(plant.MissingFieldError) as err:
            plant.parse_plant_architecture(minimal_doc)
        assert err.value.path == "system/conversion_units[0]/inverters[0]/paco"

    def test_unknown_key_rejected(self, minimal_doc):
        minimal_doc["conversion_units"][0]["frequency"] = 60
        with pytest.raises(plant.UnknownFieldError) as err:
            plant.parse_plant_architecture(minimal_doc)
        assert "frequency" in str(err.value)

    def test_malformed_json(self):
        with pytest.raises(plant.ConfigSyntaxError):
            plant.parse_plant_architecture("{not json")

    def test_wrong_type_rejected(self, minimal_doc):
        minimal_doc["kpc"] = "high"
        with pytest.raises(plant.ConfigSyntaxError):
            plant.parse_plant_architecture(minimal_doc)

    def test_invariant_enforced_at_parse(self, minimal_doc):
        minimal_doc["kpc"] = 1.2
        with pytest.raises(plant.InvariantViolation):
            plant.parse_plant_architecture(minimal_doc)

    def test_optional_sqtable(self, minimal_doc):
        minimal_doc["conversion_units"][0]["sqtable"] = {
            "database": "plant.db", "table": "cu01"}
        system = plant.parse_plant_architecture(minimal_doc)
        assert system.conversion_units[0].sqtable.table == "cu01"


def _replace_first_array(system, *, panel=None, tracker=None):
    """Copy of a system with the first array's panel or tracker swapped."""
    cu = system.conversion_units[0]
    inv = cu.inverters[0]
    box = inv.string_boxes[0]
    array = replace(box.array,
                    panel=panel if panel is not None else box.array.panel,
                    tracker=tracker if tracker is not None else box.array.tracker)
    box = replace(box, array=array)
    inv = replace(inv, string_boxes=(box,) + inv.string_boxes[1:])
    cu = replace(cu, inverters=(inv,) + cu.inverters[1:])
    return replace(system, conversion_units=(cu,) + system.conversion_units[1:])


class TestValidate:
    def test_conforming_fixture_is_clean(self, elpaso):
        assert plant.validate_system(elpaso).empty

    def test_negative_isc(self, minimal_doc):
        system = plant.parse_plant_architecture(minimal_doc)
        panel = system.conversion_units[0].inverters[0].string_boxes[0].array.panel
        bad = _replace_first_array(system, panel=replace(panel, isc_ref=-1.0))
        report = plant.validate_system(bad)
        assert any(v.path.endswith("panel/isc_ref") for v in report.violations)

    def test_derate_out_of_range(self, minimal_doc):
        system = replace(plant.parse_plant_architecture(minimal_doc), kpc=1.2)
        report = plant.validate_system(system)
        assert any("derate factor out of [0, 1]" in v.message
                   for v in report.violations)

    def test_tracker_row_width(self, minimal_doc):
        system = plant.parse_plant_architecture(minimal_doc)
        tracker = system.conversion_units[0].inverters[0].string_boxes[0].array.tracker
        bad = _replace_first_array(
            system, tracker=replace(tracker, with_tracker=True, row_width=0.0))
        report = plant.validate_system(bad)
        assert any(v.path.endswith("tracker/row_width")
                   for v in report.violations)

    def test_stc_consistency_bound(self, minimal_doc):
        system = plant.parse_plant_architecture(minimal_doc)
        panel = system.conversion_units[0].inverters[0].string_boxes[0].array.panel
        bad = _replace_first_array(
            system,
            panel=replace(panel, p_stc=panel.vmp_ref * panel.imp_ref * 1.05))
        report = plant.validate_system(bad)
        assert any(v.path.endswith("panel/p_stc") for v in report.violations)


class TestRoundTrip:
    def test_minimal_round_trip(self, minimal_doc):
        system = plant.parse_plant_architecture(minimal_doc)
        again = plant.parse_plant_architecture(
            plant.serialize_plant_json(system))
        assert again == system

    def test_elpaso_round_trip(self, elpaso):
        again = plant.parse_plant_architecture(plant.serialize_plant(elpaso))
        assert again == elpaso


class TestEnumerate:
    def test_document_order(self, elpaso):
        paths = plant.enumerate_arrays(elpaso)
        assert paths == sorted(paths)
        assert len(set(paths)) == len(paths)

    def test_bijection_onto_leaves(self, elpaso):
        paths = plant.enumerate_arrays(elpaso)
        total = sum(len(inv.string_boxes)
                    for cu in elpaso.conversion_units
                    for inv in cu.inverters)
        assert len(paths) == total
        for path in paths:
            assert plant.array_at(elpaso, path) is not None

    def test_empty_inverter_contributes_nothing(self, minimal_doc):
        minimal_doc["conversion_units"][0]["inverters"].append({
            **minimal_doc["conversion_units"][0]["inverters"][0],
            "name": "INV 2", "string_boxes": [],
        })
        system = plant.parse_plant_architecture(minimal_doc)
        assert plant.enumerate_arrays(system) == [(0, 0, 0)]
