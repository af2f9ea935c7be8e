"""Tests for pipeline configuration, the outer loop and run outputs."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.driver import (
    LAYOUT_FILE,
    METRICS_FILE,
    PLACEMENT_FILE,
    PipelineConfig,
    analyze,
    final_cell_positions,
    initial_state,
    load_config,
    load_placement,
    run_pipeline,
    stage_rng,
    step,
    write_outputs,
)
from src.errors import CapExceededError, ConfigError, DesignParseError
from src.evaluator import evaluate_placement
from src.netlist import design_to_model
from src.observability import MetricsCollector, RunTracer
from src.packing import out_of_bounds, total_overlap
from tests.conftest import make_design

FAST = PipelineConfig(
    seed=1,
    proto_bins=16,
    proto_max_iters=40,
    abplace_max_iters=60,
    n_total=10,
    n_eps=4,
    n_pop=3,
    n_min_fraction=0.25,
)


@pytest.fixture(scope="module")
def finished(small_design):
    """One traced end-to-end run shared by the pipeline tests."""
    return run_pipeline(small_design, FAST)


# =============================================================================
# Configuration
# =============================================================================

class TestConfig:
    """Tests for PipelineConfig and load_config."""

    def test_defaults(self):
        """Defaults match the documented constants."""
        config = PipelineConfig()
        assert (config.td_init, config.td_finish) == (0.92, 0.5)
        assert (config.beta_init, config.beta_finish) == (0.9, 0.5)
        assert (config.n_eps, config.n_total, config.n_pop) == (20, 100, 5)
        assert config.mutation_p == pytest.approx(2.0 / 3.0)
        assert config.cost_weights().w == (0.4, 0.4, 1.0, 1.6, 1.6, 1.6, 1.0)
        assert config.cost_weights().alpha == (5.0, 0.5, 4.0, 1.0)
        assert config.d_max == 3
        assert config.max_outer_iterations == 20

    def test_rejects_out_of_range(self):
        """Schedule endpoints must lie in (0, 1) and be ordered."""
        with pytest.raises(ValidationError):
            PipelineConfig(td_init=1.5)
        with pytest.raises(ValidationError):
            PipelineConfig(beta_init=0.4, beta_finish=0.5)
        with pytest.raises(ValidationError):
            PipelineConfig(prototype="external")

    def test_override_error_names_field(self):
        """Bad overrides become ConfigError with the field."""
        with pytest.raises(ConfigError) as exc:
            load_config(None, n_eps=0)
        assert exc.value.field == "n_eps"

    def test_none_overrides_ignored(self, tmp_path):
        """Unset CLI options keep the file value."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"seed": 9, "n_eps": 7}))
        config = load_config(path, seed=None, n_eps=3)
        assert config.seed == 9
        assert config.n_eps == 3

    def test_file_errors(self, tmp_path):
        """Unknown keys and wrong types name the field."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"bogus": 1}))
        with pytest.raises(ConfigError) as exc:
            load_config(path)
        assert exc.value.field == "bogus"
        path.write_text(json.dumps({"halo": "wide"}))
        with pytest.raises(ConfigError) as exc:
            load_config(path)
        assert exc.value.field == "halo"

    def test_tune_result_loads(self, tmp_path):
        """A tune result file is read through its best configuration."""
        path = tmp_path / "tune_result.json"
        best = PipelineConfig(seed=7, abplace_lambda=0.3).model_dump()
        path.write_text(json.dumps({"best": {"objective": 2.5}, "best_config": best, "history": []}))
        config = load_config(path)
        assert config.seed == 7
        assert config.abplace_lambda == 0.3

    def test_ablation_switches(self):
        """Switches collapse the schedules they control."""
        config = PipelineConfig(shrink_ellipse=False, dynamic_density=False)
        assert config.resolved_gamma == 1.0
        schedule = config.density_schedule()
        assert schedule.target(1) == schedule.target(9) == 0.92

    def test_prototype_file(self):
        """file:<path> selects an injected prototype."""
        assert PipelineConfig(prototype="file:proto.json").prototype_file == "proto.json"
        assert PipelineConfig().prototype_file is None


# =============================================================================
# Outer Loop
# =============================================================================

class TestPipeline:
    """Tests for analyze, step and run_pipeline."""

    def test_initial_state_skips_preplaced(self, tiny_payload):
        """Pre-placed macros start fixed and are not pending."""
        tiny_payload["macros"][0]["fixed"] = {"x": 0.0, "y": 0.0}
        design = make_design(tiny_payload)
        config = PipelineConfig()
        state = initial_state(design, config, analyze(design, config))
        assert state.k == 0
        assert state.unplaced_macros == [1]
        assert state.placed == {0: (0.0, 0.0, 20.0, 10.0)}

    def test_step_makes_progress(self, small_design):
        """One iteration fixes at least the round budget."""
        config = FAST.model_copy(update={"use_macro_groups": False})
        analysis = analyze(small_design, config)
        state = initial_state(small_design, config, analysis)
        after = step(state, small_design, config, analysis)
        assert after.k == 1
        assert len(after.placed) >= 2
        assert len(after.unplaced_macros) == small_design.macro_count - len(after.placed)
        assert state.placed == {}
        assert after.history[0].target_density == pytest.approx(0.92)

    def test_everything_placed(self, finished, small_design):
        """Every macro ends up fixed, inside the die, without overlap."""
        rects = np.array([finished.rects[m] for m in small_design.macro_ids])
        assert sorted(finished.rects) == list(small_design.macro_ids)
        assert total_overlap(rects) == pytest.approx(0.0, abs=1e-9)
        W, H = small_design.outline.width, small_design.outline.height
        assert not out_of_bounds(rects, W, H).any()
        assert finished.metrics.out_of_bounds == 0

    def test_metrics_filled(self, finished):
        """The run reports wirelength, iterations, penalties and a baseline."""
        metrics = finished.metrics
        assert metrics.hpwl > 0
        assert 1 <= metrics.iterations <= FAST.max_outer_iterations
        assert metrics.iterations == finished.iterations
        assert set(metrics.penalties) == {"disp", "conn", "peri", "group_bb", "corner_bb", "io", "notch"}
        assert metrics.random_baseline_hpwl is not None
        assert finished.cell_positions is not None

    def test_beats_random_baseline(self, finished):
        """The final wirelength is no worse than the mean random legal placement."""
        assert finished.metrics.random_baseline_hpwl is not None
        assert finished.metrics.hpwl <= finished.metrics.random_baseline_hpwl

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_legal_and_fixed_over_seeds(self, small_design, seed):
        """Every seed ends legal, and no fixed rectangle moves in any iteration."""
        payload = design_to_model(small_design).model_dump()
        payload["macros"][0]["fixed"] = {"x": 0.0, "y": 0.0}
        design = make_design(payload)
        config = FAST.model_copy(update={"seed": seed})
        analysis = analyze(design, config)
        state = initial_state(design, config, analysis)
        (preplaced,) = design.preplaced_ids
        start = state.placed[preplaced]

        while not state.done:
            assert state.k < config.max_outer_iterations
            before = dict(state.placed)
            state = step(state, design, config, analysis)
            assert all(state.placed[m] == rect for m, rect in before.items())
        assert state.placed[preplaced] == start

        rects = dict(state.placed)
        assert sorted(rects) == list(design.macro_ids)
        cells = final_cell_positions(design, config, analysis, rects, state.k, state.prototype)
        result = evaluate_placement(design, rects, cells, io_regions=analysis.io_regions)
        assert result.total_overlap == pytest.approx(0.0, abs=1e-9)
        assert result.out_of_bounds == 0

    def test_deterministic(self, finished, small_design):
        """Equal seeds give equal placements."""
        again = run_pipeline(small_design, FAST, with_baseline=False)
        assert again.rects == finished.rects

    def test_cap_exceeded(self, small_design):
        """One iteration with one macro per round cannot finish."""
        config = FAST.model_copy(update={
            "use_macro_groups": False, "n_min_fraction": 0.1, "max_outer_iterations": 1,
        })
        with pytest.raises(CapExceededError) as exc:
            run_pipeline(small_design, config, with_baseline=False)
        assert exc.value.iteration == 1

    def test_ablations_still_place(self, small_design):
        """Switching off ABPlace and the ellipse still yields a full placement."""
        config = FAST.model_copy(update={"use_abplace": False, "use_ellipse": False, "io_keepout": False})
        final = run_pipeline(small_design, config, with_baseline=False)
        assert len(final.rects) == small_design.macro_count
        assert final.metrics.total_overlap == pytest.approx(0.0, abs=1e-9)

    def test_stage_streams_independent(self):
        """Each (seed, iteration, stage) has its own stream."""
        a = stage_rng(1, 1, 0).random(4)
        assert np.array_equal(a, stage_rng(1, 1, 0).random(4))
        assert not np.array_equal(a, stage_rng(1, 1, 1).random(4))
        assert not np.array_equal(a, stage_rng(1, 2, 0).random(4))


# =============================================================================
# Outputs and Tracing
# =============================================================================

class TestOutputs:
    """Tests for run files and trace artifacts."""

    def test_write_outputs(self, finished, small_design, tmp_path):
        """placement.json, metrics.json and layout.svg are written."""
        out = write_outputs(finished, tmp_path / "out", dump_connectivity=True)
        assert (out / LAYOUT_FILE).read_text().startswith("<svg")
        assert json.loads((out / METRICS_FILE).read_text())["hpwl"] == pytest.approx(finished.metrics.hpwl)
        assert load_placement(small_design, out / PLACEMENT_FILE) == finished.rects
        assert (out / "connectivity.json").exists()

    def test_placement_missing_macro(self, finished, small_design, tmp_path):
        """A placement without every macro is rejected."""
        out = write_outputs(finished, tmp_path / "out")
        payload = json.loads((out / PLACEMENT_FILE).read_text())
        payload["macros"] = payload["macros"][1:]
        (out / PLACEMENT_FILE).write_text(json.dumps(payload))
        with pytest.raises(DesignParseError):
            load_placement(small_design, out / PLACEMENT_FILE)

    def test_trace_files(self, small_design, tmp_path):
        """A traced run writes its debug artifacts and timings."""
        trace = tmp_path / "trace"
        metrics = MetricsCollector()
        final = run_pipeline(small_design, FAST, tracer=RunTracer(trace), metrics=metrics, with_baseline=False)
        for name in (
            "timings.json", "iterations.json", "spans.jsonl", "relocating.jsonl",
            "trees.txt", "contours.csv", "abplace_trace.csv",
        ):
            assert (trace / name).exists(), name
        iterations = json.loads((trace / "iterations.json").read_text())["iterations"]
        assert len(iterations) == final.iterations
        placed = [m for record in iterations for m in record["newly_placed"]]
        assert sorted(placed) == list(small_design.macro_ids)
        timings = json.loads((trace / "timings.json").read_text())
        assert sum(timings["stages"].values()) == pytest.approx(timings["total_ms"])
        assert metrics.counter("prototype_rounds") == final.iterations
