"""Tests for the design model, design files and the synthetic generator."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import DanglingReferenceError, DesignError, DesignParseError, DimensionError, InfeasibleAreaError
from src.netlist import (
    ChipOutline,
    PinKind,
    design_from_model,
    design_to_model,
    dumps_design,
    generate_synthetic,
    hierarchy_leaves,
    load_design,
    save_design,
)
from tests.conftest import make_design


# =============================================================================
# Design Model
# =============================================================================

class TestDesignModel:
    """Tests for Design construction and lookups."""

    def test_ids_and_counts(self, tiny_design):
        """Macros come first and cells follow in file order."""
        assert tiny_design.macro_ids == (0, 1)
        assert tiny_design.cell_ids == (2, 3, 4, 5)
        assert tiny_design.macro_count == 2
        assert tiny_design.cell_count == 4
        assert tiny_design.macro_index == {0: 0, 1: 1}
        assert tiny_design.macro_area == pytest.approx(400.0)

    def test_name_index(self, tiny_design):
        """Names resolve to instances and ports."""
        assert tiny_design.name_index["ff0"] == (PinKind.INSTANCE, 2)
        assert tiny_design.name_index["pin_n"] == (PinKind.PORT, 1)
        assert tiny_design.instance_by_name("c1").hier_path == ("top", "b")
        with pytest.raises(KeyError):
            tiny_design.instance_by_name("pin_w")

    def test_flattened_pins(self, tiny_design):
        """Ports live after the instances in the flattened node space."""
        assert tiny_design.pin_nodes.tolist() == [0, 2, 2, 1, 3, 4, 6, 5, 7]
        assert tiny_design.net_starts.tolist() == [0, 2, 4, 7]
        assert tiny_design.pin_net.tolist() == [0, 0, 1, 1, 2, 2, 2, 3, 3]
        assert tiny_design.pin_offsets.shape == (9, 2)

    def test_driver_and_sinks(self, tiny_design):
        """The first pin of a net is its driver."""
        net = tiny_design.nets[2]
        assert net.degree == 3
        assert net.driver.index == 3
        assert [p.kind for p in net.sinks] == [PinKind.INSTANCE, PinKind.PORT]

    def test_boundary_distance(self):
        """Distance to the nearest die edge."""
        outline = ChipOutline(100.0, 50.0)
        assert outline.boundary_distance(10.0, 25.0) == pytest.approx(10.0)
        assert outline.boundary_distance(50.0, 48.0) == pytest.approx(2.0)
        assert outline.center == (50.0, 25.0)

    def test_non_positive_outline(self):
        """An outline needs a positive size."""
        with pytest.raises(DimensionError):
            ChipOutline(0.0, 10.0)


# =============================================================================
# Validation
# =============================================================================

class TestValidation:
    """Tests for rejected designs."""

    def test_dangling_reference(self, tiny_payload):
        """A net pin naming nothing is reported with the net."""
        tiny_payload["nets"][0]["pins"][1]["ref"] = "ghost"
        with pytest.raises(DanglingReferenceError) as exc:
            make_design(tiny_payload)
        assert exc.value.net == "n0"
        assert exc.value.reference == "ghost"

    def test_port_off_boundary(self, tiny_payload):
        """Ports must sit on the die edge."""
        tiny_payload["ports"][0]["x"] = 5.0
        with pytest.raises(DimensionError):
            make_design(tiny_payload)

    def test_macro_area_exceeds_outline(self, tiny_payload):
        """Macros larger than the die are rejected."""
        tiny_payload["macros"][0]["width"] = 100.0
        tiny_payload["macros"][0]["height"] = 80.0
        with pytest.raises(DimensionError):
            make_design(tiny_payload)

    def test_non_positive_macro(self, tiny_payload):
        """Macros need a positive size."""
        tiny_payload["macros"][1]["height"] = 0.0
        with pytest.raises(DimensionError):
            make_design(tiny_payload)

    def test_duplicate_name(self, tiny_payload):
        """Instance and port names share one namespace."""
        tiny_payload["ports"][0]["name"] = "c0"
        with pytest.raises(DesignError):
            make_design(tiny_payload)

    def test_single_pin_net(self, tiny_payload):
        """Nets with fewer than two pins fail the schema."""
        tiny_payload["nets"][3]["pins"] = [{"ref": "c2"}]
        with pytest.raises(ValidationError):
            make_design(tiny_payload)

    def test_preplaced_outside(self, tiny_payload):
        """Pre-placed macros must lie inside the outline."""
        tiny_payload["macros"][0]["fixed"] = {"x": 90.0, "y": 0.0}
        with pytest.raises(DimensionError):
            make_design(tiny_payload)


# =============================================================================
# Design Files
# =============================================================================

class TestDesignFiles:
    """Tests for reading and writing design JSON."""

    def test_save_and_load(self, tiny_design, tmp_path):
        """A saved design loads back to the same canonical text."""
        path = tmp_path / "d.json"
        save_design(tiny_design, path)
        loaded = load_design(path)
        assert dumps_design(loaded) == dumps_design(tiny_design)
        assert loaded.nets[2].pins[2].kind is PinKind.PORT

    def test_model_conversion_preserves_fixed(self, tiny_payload):
        """Pre-placed positions survive model conversion."""
        tiny_payload["macros"][1]["fixed"] = {"x": 10.0, "y": 5.0}
        design = make_design(tiny_payload)
        again = design_from_model(design_to_model(design))
        assert again.preplaced_ids == (1,)
        assert again.instances[1].fixed_at == (10.0, 5.0)

    def test_invalid_json_reports_line(self, tmp_path):
        """Broken JSON names its line."""
        path = tmp_path / "bad.json"
        path.write_text('{\n  "outline": {\n    "width": 1,\n  }\n}\n')
        with pytest.raises(DesignParseError) as exc:
            load_design(path)
        assert "line" in exc.value.location

    def test_schema_error_reports_field(self, tmp_path, tiny_payload):
        """Schema violations name the offending field."""
        tiny_payload["macros"][0]["width"] = "wide"
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(tiny_payload))
        with pytest.raises(DesignParseError) as exc:
            load_design(path)
        assert exc.value.location == "macros.0.width"

    def test_missing_file(self, tmp_path):
        """A missing file is a parse error, not an OSError."""
        with pytest.raises(DesignParseError):
            load_design(tmp_path / "nope.json")


# =============================================================================
# Synthetic Generator
# =============================================================================

class TestSyntheticGenerator:
    """Tests for generate_synthetic."""

    def test_deterministic(self):
        """Equal seeds give byte-identical designs."""
        outline = ChipOutline(500.0, 400.0)
        a = generate_synthetic(7, 12, 100, 150, outline)
        b = generate_synthetic(7, 12, 100, 150, outline)
        assert dumps_design(a) == dumps_design(b)

    def test_seeds_differ(self):
        """Different seeds give different designs."""
        outline = ChipOutline(500.0, 400.0)
        assert dumps_design(generate_synthetic(1, 12, 100, 150, outline)) != dumps_design(
            generate_synthetic(2, 12, 100, 150, outline)
        )

    def test_counts(self):
        """Requested macro and cell counts are honored."""
        design = generate_synthetic(5, 10, 80, 120, ChipOutline(300.0, 300.0))
        assert design.macro_count == 10
        assert design.cell_count == 80
        assert len(design.ports) == 10
        assert 0 < len(design.nets) <= 120

    @pytest.mark.parametrize("seed", range(100))
    def test_utilization_cap(self, seed):
        """Macro utilization never exceeds 0.6."""
        outline = ChipOutline(1000.0, 700.0)
        design = generate_synthetic(seed, 20, 10, 30, outline, utilization=0.6)
        assert design.macro_area / outline.area <= 0.6 + 1e-9

    def test_utilization_sweep(self):
        """Lower utilization shrinks the macros."""
        outline = ChipOutline(1000.0, 1000.0)
        low = generate_synthetic(3, 16, 50, 80, outline, utilization=0.1)
        high = generate_synthetic(3, 16, 50, 80, outline, utilization=0.2)
        assert low.macro_area < high.macro_area
        assert low.macro_area / outline.area <= 0.1 + 1e-9

    def test_infeasible_utilization(self):
        """Asking for more than 0.6 raises InfeasibleAreaError."""
        with pytest.raises(InfeasibleAreaError):
            generate_synthetic(1, 4, 10, 10, ChipOutline(100.0, 100.0), utilization=0.7)

    def test_needs_a_macro(self):
        """Zero macros is rejected."""
        with pytest.raises(DesignError):
            generate_synthetic(1, 0, 10, 10, ChipOutline(100.0, 100.0))

    def test_array_macros_share_footprint(self):
        """Every macro sits in a leaf and has a positive size."""
        design = generate_synthetic(11, 12, 60, 90, ChipOutline(400.0, 400.0))
        sizes = design.sizes[list(design.macro_ids)]
        assert np.all(sizes > 0)
        assert all(len(design.instances[m].hier_path) == 3 for m in design.macro_ids)

    def test_hierarchy_leaves(self):
        """A balanced tree of fanout 2 and depth 2 has four leaves."""
        assert hierarchy_leaves(2, 2) == [("b0", "b0"), ("b0", "b1"), ("b1", "b0"), ("b1", "b1")]
        assert hierarchy_leaves(3, 0) == [()]
