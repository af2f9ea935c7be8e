"""Test configuration and fixtures."""

import pytest

from src.driver import PipelineConfig
from src.netlist import ChipOutline, design_from_model, generate_synthetic
from src.netlist.schema import DesignModel


def make_design(payload: dict):
    """Build a Design from a design-file shaped dict."""
    return design_from_model(DesignModel.model_validate(payload))


@pytest.fixture
def tiny_payload():
    """Two macros, four cells, two ports; m0 and m1 talk through a register."""
    return {
        "outline": {"width": 100.0, "height": 80.0},
        "macros": [
            {"name": "m0", "width": 20.0, "height": 10.0, "hier": ["top", "a"]},
            {"name": "m1", "width": 20.0, "height": 10.0, "hier": ["top", "a"]},
        ],
        "cells": [
            {"name": "ff0", "width": 1.0, "height": 1.0, "is_ff": True, "hier": ["top", "a"]},
            {"name": "c0", "width": 1.0, "height": 1.0, "hier": ["top", "a"]},
            {"name": "c1", "width": 1.0, "height": 1.0, "hier": ["top", "b"]},
            {"name": "c2", "width": 1.0, "height": 1.0, "hier": ["top", "b"]},
        ],
        "ports": [
            {"name": "pin_w", "x": 0.0, "y": 40.0},
            {"name": "pin_n", "x": 50.0, "y": 80.0},
        ],
        "nets": [
            {"name": "n0", "pins": [{"ref": "m0"}, {"ref": "ff0"}]},
            {"name": "n1", "pins": [{"ref": "ff0"}, {"ref": "m1"}]},
            {"name": "n2", "pins": [{"ref": "c0"}, {"ref": "c1"}, {"ref": "pin_w"}]},
            {"name": "n3", "pins": [{"ref": "c2"}, {"ref": "pin_n"}]},
        ],
    }


@pytest.fixture
def tiny_design(tiny_payload):
    return make_design(tiny_payload)


@pytest.fixture(scope="session")
def small_design():
    """Synthetic design small enough for full pipeline runs."""
    return generate_synthetic(3, 8, 60, 90, ChipOutline(400.0, 300.0), utilization=0.25)


@pytest.fixture
def fast_config():
    """Pipeline config with short loops for end-to-end tests."""
    return PipelineConfig(
        seed=1,
        proto_bins=16,
        proto_max_iters=40,
        abplace_max_iters=60,
        n_total=10,
        n_eps=4,
        n_pop=3,
        n_min_fraction=0.25,
    )
