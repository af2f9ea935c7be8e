"""Tests for I/O keepouts, the preference matrix, relocating penalties and relocate."""

from types import SimpleNamespace

import numpy as np
import pytest

from src.connectivity import (
    MacroGroup,
    build_matrix,
    cluster_cells,
    default_cluster_count,
    extract_dataflow,
    extract_direct,
    group_macros,
)
from src.driver import PipelineConfig, run_pipeline
from src.errors import AllBannedError, StuckError
from src.netlist import ChipOutline, design_to_model
from src.observability import MetricsCollector, RunTracer
from src.packing import Corner, PackedPlacement, out_of_bounds, total_overlap
from src.relocator import (
    CandidateEvaluator,
    CornerLayout,
    CostWeights,
    IoRegions,
    PenaltyNormalizer,
    RelocateSettings,
    RelocationContext,
    build_io_regions,
    compute_preference,
    corner_packing_search,
    corner_point,
    default_notch_threshold,
    evaluate_cost,
    generation_count,
    gravity_center,
    min_macros_per_round,
    notch_area,
    penalty_vector,
    port_keepout,
    quadrant,
    relocate,
    split_group,
    tournament_select,
    try_assignment,
)
from tests.conftest import make_design

OUTLINE = ChipOutline(100.0, 80.0)
FAST = RelocateSettings(n_eps=3, n_total=6, n_pop=3)


def make_context(design, seed=0, io_regions=None):
    """Context with random instance centers and centroids inside the die."""
    rng = np.random.default_rng(seed)
    clusters = cluster_cells(design, default_cluster_count(design.cell_count))
    matrix = build_matrix(
        extract_direct(design, clusters), extract_dataflow(design, clusters), design.macro_count,
    )
    W, H = design.outline.width, design.outline.height
    positions = rng.uniform(0.0, 1.0, size=(len(design.instances), 2)) * (W, H)
    centroids = rng.uniform(0.0, 1.0, size=(len(clusters), 2)) * (W, H)
    return RelocationContext(
        design=design,
        matrix=matrix,
        positions=positions,
        centroids=centroids,
        io_regions=io_regions or IoRegions(),
        notch_threshold=default_notch_threshold(design),
    )


# =============================================================================
# I/O Regions
# =============================================================================

class TestIoRegions:
    """Tests for port keepouts and corner territories."""

    def test_quadrants(self):
        """Quadrants split the die at its center."""
        assert quadrant(OUTLINE, Corner.BL) == (0.0, 0.0, 50.0, 40.0)
        assert quadrant(OUTLINE, Corner.TR) == (50.0, 40.0, 50.0, 40.0)
        assert corner_point(OUTLINE, Corner.BR) == (100.0, 0.0)
        assert corner_point(OUTLINE, Corner.TL) == (0.0, 80.0)

    def test_left_edge_keepout(self):
        """A left-edge port reserves depth inward and width along the edge."""
        assert port_keepout(OUTLINE, 0.0, 40.0) == pytest.approx((0.0, 38.0, 4.0, 4.0))

    def test_bottom_edge_keepout(self):
        """A bottom-edge port spans a fraction of the die width."""
        assert port_keepout(OUTLINE, 50.0, 0.0) == pytest.approx((47.5, 0.0, 5.0, 4.0))

    def test_keepout_clipped(self):
        """Keepouts near a corner are clipped to the outline."""
        x, y, w, h = port_keepout(OUTLINE, 100.0, 1.0)
        assert (x, y) == pytest.approx((96.0, 0.0))
        assert h == pytest.approx(3.0)

    def test_union_not_double_counted(self):
        """Overlapping keepouts count their shared area once."""
        regions = IoRegions(rects=((0.0, 0.0, 10.0, 10.0), (5.0, 0.0, 10.0, 10.0)))
        assert regions.area == pytest.approx(150.0)
        assert regions.area_within((0.0, 0.0, 5.0, 5.0)) == pytest.approx(25.0)
        assert regions.overlap([(0.0, 0.0, 20.0, 5.0), (0.0, 5.0, 1.0, 1.0)]) == pytest.approx(76.0)

    def test_disabled(self, tiny_design):
        """Switched-off regions are empty."""
        regions = build_io_regions(tiny_design, enabled=False)
        assert regions.empty
        assert regions.area == 0.0
        assert regions.overlap([(0.0, 0.0, 10.0, 10.0)]) == 0.0

    def test_from_design(self, tiny_design):
        """One keepout per port."""
        regions = build_io_regions(tiny_design)
        assert len(regions.rects) == 2
        assert regions.area == pytest.approx(16.0 + 20.0)


# =============================================================================
# Preference
# =============================================================================

class TestPreference:
    """Tests for compute_preference."""

    def _group(self):
        return MacroGroup(id=0, member_macro_ids=(0, 1), footprint=(20.0, 10.0))

    def test_weights_validated(self):
        """Weights need the right lengths and non-negative values."""
        with pytest.raises(ValueError):
            CostWeights(w=(1.0,) * 6)
        with pytest.raises(ValueError):
            CostWeights(alpha=(1.0, 1.0, -1.0, 1.0))
        with pytest.raises(ValueError):
            CostWeights(w=(float("nan"),) + (1.0,) * 6)

    def test_nearest_corner_wins(self, tiny_design):
        """With empty corners the group goes where its gravity center is closest."""
        positions = np.full((6, 2), 50.0)
        positions[:2] = (90.0, 70.0)
        pref = compute_preference(
            [self._group()], tiny_design, positions, [0.0] * 4, IoRegions(), CostWeights(),
        )
        assert pref.best() == (0, Corner.TR)
        assert pref.values[0, int(Corner.TR)] == pytest.approx(5.0 * 400.0 - np.hypot(10.0, 10.0))

    def test_ties_go_to_lower_corner(self, tiny_design):
        """A group at the die center prefers BL among equal entries."""
        positions = np.full((6, 2), 0.0)
        positions[:2] = (50.0, 40.0)
        pref = compute_preference(
            [self._group()], tiny_design, positions, [0.0] * 4, IoRegions(), CostWeights(),
        )
        assert pref.best() == (0, Corner.BL)

    def test_utilization_pushes_away(self, tiny_design):
        """A busy corner loses to an empty one at equal distance."""
        positions = np.zeros((6, 2))
        positions[:2] = (50.0, 40.0)
        pref = compute_preference(
            [self._group()], tiny_design, positions, [1000.0, 0.0, 0.0, 0.0], IoRegions(), CostWeights(),
        )
        assert pref.best() == (0, Corner.BR)

    def test_io_heavy_corner_banned(self, tiny_design):
        """A quadrant more than half covered by keepouts is banned."""
        io = IoRegions(rects=((0.0, 0.0, 50.0, 40.0),))
        positions = np.zeros((6, 2))
        pref = compute_preference([self._group()], tiny_design, positions, [0.0] * 4, io, CostWeights())
        assert pref.banned_corners == (Corner.BL,)
        assert pref.values[0, int(Corner.BL)] == -np.inf
        assert pref.best()[1] is not Corner.BL

    def test_all_banned(self, tiny_design):
        """Keepouts over the whole die leave no legal entry."""
        io = IoRegions(rects=((0.0, 0.0, 100.0, 80.0),))
        with pytest.raises(AllBannedError):
            compute_preference([self._group()], tiny_design, np.zeros((6, 2)), [0.0] * 4, io, CostWeights())

    def test_masking(self, tiny_design):
        """Masked entries are skipped and a fully masked matrix refuses best()."""
        pref = compute_preference(
            [self._group()], tiny_design, np.zeros((6, 2)), [0.0] * 4, IoRegions(), CostWeights(),
        )
        pref.mask(0, Corner.BL)
        assert pref.best()[1] is not Corner.BL
        for corner in Corner:
            pref.mask(0, corner)
        assert pref.row_banned(0)
        with pytest.raises(AllBannedError):
            pref.best()

    def test_gravity_center_area_weighted(self, tiny_payload):
        """Larger members pull the gravity center harder."""
        tiny_payload["macros"][1]["width"] = 60.0
        design = make_design(tiny_payload)
        positions = np.zeros((6, 2))
        positions[1] = (40.0, 0.0)
        group = MacroGroup(id=0, member_macro_ids=(0, 1), footprint=(20.0, 10.0))
        assert gravity_center(group, positions, design).tolist() == pytest.approx([30.0, 0.0])

    def test_empty_groups(self, tiny_design):
        """No groups gives an empty matrix rather than an error."""
        pref = compute_preference([], tiny_design, np.zeros((6, 2)), [0.0] * 4, IoRegions(), CostWeights())
        assert pref.values.shape == (0, 4)


# =============================================================================
# Notch Area
# =============================================================================

class TestNotchArea:
    """Tests for notch_area."""

    def test_narrow_gap(self):
        """A 2-wide gap between two macros is a notch at threshold 5."""
        outline = ChipOutline(100.0, 100.0)
        rects = [(0.0, 0.0, 10.0, 40.0), (12.0, 0.0, 10.0, 40.0)]
        assert notch_area(rects, outline, 5.0) == pytest.approx(80.0)

    def test_wide_gap(self):
        """A gap at least the threshold wide is usable space."""
        outline = ChipOutline(100.0, 100.0)
        rects = [(0.0, 0.0, 10.0, 40.0), (20.0, 0.0, 10.0, 40.0)]
        assert notch_area(rects, outline, 5.0) == 0.0

    def test_gap_to_boundary(self):
        """A sliver between a macro and the die edge is a notch."""
        outline = ChipOutline(100.0, 100.0)
        assert notch_area([(0.0, 1.0, 30.0, 20.0)], outline, 5.0) == pytest.approx(30.0)

    def test_obstacles_count(self):
        """Obstacles close gaps the same way as rectangles do."""
        outline = ChipOutline(100.0, 100.0)
        rects = [(0.0, 0.0, 10.0, 40.0)]
        obstacles = [(12.0, 0.0, 10.0, 40.0)]
        assert notch_area(rects, outline, 5.0, obstacles=obstacles) == pytest.approx(80.0)

    def test_empty(self):
        """Nothing placed means no notches."""
        assert notch_area([], OUTLINE, 5.0) == 0.0

    def test_default_threshold(self, tiny_design):
        """Twice the mean cell height."""
        assert default_notch_threshold(tiny_design) == pytest.approx(2.0)

    def test_default_threshold_without_cells(self, tiny_payload):
        """Falls back to a fraction of the shorter die side."""
        tiny_payload["cells"] = []
        tiny_payload["nets"] = [{"name": "n0", "pins": [{"ref": "m0"}, {"ref": "m1"}]}]
        assert default_notch_threshold(make_design(tiny_payload)) == pytest.approx(1.6)


# =============================================================================
# Penalties
# =============================================================================

class TestPenalties:
    """Tests for penalty_vector and batch normalization."""

    def _context(self, design):
        A_wl = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
        positions = np.zeros((6, 2))
        positions[0] = (10.0, 5.0)
        positions[1] = (90.0, 70.0)
        return RelocationContext(
            design=design,
            matrix=build_matrix(A_wl, np.zeros((3, 3)), n_macros=2),
            positions=positions,
            centroids=np.array([[10.0, 45.0]]),
            io_regions=IoRegions(),
            notch_threshold=2.0,
        )

    def test_corner_flush_macro(self, tiny_design):
        """A macro packed flush into BL at its own position pays only wire and area."""
        group = MacroGroup(id=0, member_macro_ids=(0,), footprint=(20.0, 10.0))
        packed = PackedPlacement(corner=Corner.BL, rects={0: (0.0, 0.0, 20.0, 10.0)})
        layout = CornerLayout.from_design(tiny_design)
        penalties = penalty_vector(packed, group, layout, self._context(tiny_design))
        assert penalties.tolist() == pytest.approx([0.0, 40.0, 0.0, 200.0, 200.0, 0.0, 0.0])

    def test_io_overlap(self, tiny_design):
        """Area inside a keepout is charged."""
        group = MacroGroup(id=0, member_macro_ids=(0,), footprint=(20.0, 10.0))
        packed = PackedPlacement(corner=Corner.BL, rects={0: (0.0, 0.0, 20.0, 10.0)})
        ctx = self._context(tiny_design)
        ctx.io_regions = IoRegions(rects=((0.0, 0.0, 5.0, 40.0),))
        penalties = penalty_vector(packed, group, CornerLayout.from_design(tiny_design), ctx)
        assert penalties[5] == pytest.approx(50.0)

    def test_constant_penalty_contributes_nothing(self):
        """A penalty equal across the batch normalizes to zero."""
        batch = [np.array([1.0, 5.0, 0, 0, 0, 0, 0]), np.array([3.0, 5.0, 0, 0, 0, 0, 0])]
        costs, normalizer = evaluate_cost(batch, np.ones(7))
        assert costs == pytest.approx([0.0, 1.0])
        assert normalizer.normalize(np.array([2.0, 99.0, 0, 0, 0, 0, 0]))[1] == 0.0

    def test_infeasible_is_infinite(self):
        """None entries cost +inf and do not shift the bounds."""
        batch = [None, np.array([2.0] * 7), np.array([4.0] * 7)]
        costs, normalizer = evaluate_cost(batch, np.ones(7))
        assert costs[0] == float("inf")
        assert normalizer.lo.tolist() == [2.0] * 7

    def test_all_infeasible(self):
        """A batch without feasible entries fits to zeros."""
        normalizer = PenaltyNormalizer.fit([None, None])
        assert normalizer.scalar(np.ones(7), np.ones(7)) == 0.0
        assert normalizer.scalar(None, np.ones(7)) == float("inf")

    def test_batch_order_irrelevant(self):
        """Reordering a batch reorders its costs and nothing else."""
        rng = np.random.default_rng(3)
        batch = [rng.uniform(0.0, 10.0, 7) for _ in range(6)] + [None]
        order = rng.permutation(len(batch))
        weights = CostWeights().w_array
        costs, _ = evaluate_cost(batch, weights)
        shuffled, _ = evaluate_cost([batch[i] for i in order], weights)
        assert shuffled == pytest.approx([costs[i] for i in order])


# =============================================================================
# Corner Layout
# =============================================================================

class TestCornerLayout:
    """Tests for CornerLayout."""

    def test_preplaced_and_blockages(self, tiny_payload):
        """Pre-placed macros and blockages are obstacles for every corner."""
        tiny_payload["macros"][1]["fixed"] = {"x": 70.0, "y": 60.0}
        tiny_payload["blockages"] = [{"name": "b0", "x": 40.0, "y": 30.0, "width": 10.0, "height": 10.0}]
        layout = CornerLayout.from_design(make_design(tiny_payload))
        assert layout.placed == {1: (70.0, 60.0, 20.0, 10.0)}
        assert layout.obstacles_for(Corner.BL) == [(70.0, 60.0, 20.0, 10.0), (40.0, 30.0, 10.0, 10.0)]

    def test_commit(self, tiny_design):
        """Committing a packing fixes its macros and excludes them from that corner's obstacles."""
        layout = CornerLayout.from_design(tiny_design)
        ctx = make_context(tiny_design)
        group = MacroGroup(id=0, member_macro_ids=(0, 1), footprint=(20.0, 10.0))
        trial = try_assignment(
            group, Corner.BL, layout, ctx, CostWeights().w_array, 2, np.random.default_rng(0),
        )
        best = trial.candidates[0]
        new = layout.commit(best.tree, best.packed)
        assert sorted(new) == [0, 1]
        assert layout.corner_util() == pytest.approx([400.0, 0.0, 0.0, 0.0])
        assert layout.obstacles_for(Corner.BL) == []
        assert len(layout.obstacles_for(Corner.TR)) == 2
        assert set(layout.centers()) == {0, 1}

    def test_copy_is_independent(self, tiny_design):
        """Copies do not share placed rectangles."""
        layout = CornerLayout.from_design(tiny_design)
        clone = layout.copy()
        clone.placed[0] = (0.0, 0.0, 20.0, 10.0)
        assert layout.placed == {}


# =============================================================================
# Assignment and Search
# =============================================================================

class TestAssignment:
    """Tests for try_assignment and corner_packing_search."""

    def _group(self):
        return MacroGroup(id=0, member_macro_ids=(0, 1), footprint=(20.0, 10.0))

    def test_evaluation_count(self, tiny_design):
        """Exactly n_eps trees are evaluated per slot."""
        layout = CornerLayout.from_design(tiny_design)
        trial = try_assignment(
            self._group(), Corner.TR, layout, make_context(tiny_design), CostWeights().w_array, 4,
            np.random.default_rng(1),
        )
        assert trial.slot_count == 1
        assert trial.evaluations == 4
        assert len(trial.batch) == 4
        assert len(trial.candidates) == 1
        assert trial.candidates[0].feasible

    def test_slots_grow_with_tree(self, tiny_design):
        """A corner holding k macros offers k + 1 slots."""
        layout = CornerLayout.from_design(tiny_design)
        ctx = make_context(tiny_design)
        w = CostWeights().w_array
        first = MacroGroup(id=0, member_macro_ids=(0,), footprint=(20.0, 10.0))
        best = try_assignment(first, Corner.BL, layout, ctx, w, 1, np.random.default_rng(0)).candidates[0]
        layout.commit(best.tree, best.packed)
        second = MacroGroup(id=1, member_macro_ids=(1,), footprint=(20.0, 10.0))
        trial = try_assignment(second, Corner.BL, layout, ctx, w, 3, np.random.default_rng(0))
        assert trial.slot_count == 2
        assert trial.evaluations == 6

    def test_blocked_corner(self, tiny_payload):
        """A corner covered by a blockage yields no candidates."""
        tiny_payload["blockages"] = [{"name": "b0", "x": 0.0, "y": 0.0, "width": 60.0, "height": 50.0}]
        design = make_design(tiny_payload)
        trial = try_assignment(
            self._group(), Corner.BL, CornerLayout.from_design(design), make_context(design),
            CostWeights().w_array, 3, np.random.default_rng(0),
        )
        assert trial.candidates == []
        assert all(not c.feasible for c in trial.batch)

    def test_invalid_n_eps(self, tiny_design):
        """n_eps must be positive."""
        with pytest.raises(ValueError):
            try_assignment(
                self._group(), Corner.BL, CornerLayout.from_design(tiny_design), make_context(tiny_design),
                CostWeights().w_array, 0, np.random.default_rng(0),
            )

    def test_generation_count(self):
        """Generations are the evaluation budget over the population size."""
        assert generation_count(100, 5) == 20
        assert generation_count(4, 5) == 0
        assert generation_count(-3, 5) == 0

    def test_tournament_prefers_lower_cost(self):
        """A large tournament almost surely returns the cheapest member."""
        population = [SimpleNamespace(cost=c) for c in (3.0, 1.0, 2.0)]
        picked = tournament_select(population, np.random.default_rng(0), tournament_size=60)
        assert picked is population[1]

    def test_tournament_ties_lower_index(self):
        """Equal costs resolve to the lowest drawn index."""
        population = [SimpleNamespace(cost=1.0) for _ in range(2)]
        picked = tournament_select(population, np.random.default_rng(0), tournament_size=60)
        assert picked is population[0]

    def _seeded_search(self, design, n_total, n_pop):
        layout = CornerLayout.from_design(design)
        ctx = make_context(design)
        w = CostWeights().w_array
        rng = np.random.default_rng(3)
        trial = try_assignment(self._group(), Corner.BL, layout, ctx, w, 4, rng)
        evaluator = CandidateEvaluator(self._group(), Corner.BL, layout, ctx)
        best = corner_packing_search(
            trial.candidates, evaluator, trial.normalizer, w, rng, n_total=n_total, n_pop=n_pop,
        )
        return trial, evaluator, best

    def test_search_never_worse(self, tiny_design):
        """The refined candidate is at most the best seed's cost."""
        trial, evaluator, best = self._seeded_search(tiny_design, n_total=12, n_pop=3)
        assert best.cost <= min(c.cost for c in trial.candidates)
        assert best.feasible
        assert evaluator.evaluations >= 12

    def test_search_without_generations(self, tiny_design):
        """A budget below the population size returns the best seed."""
        trial, evaluator, best = self._seeded_search(tiny_design, n_total=2, n_pop=5)
        assert best is min(trial.candidates, key=lambda c: c.cost)
        assert evaluator.evaluations == 0

    def test_search_rejects_empty(self, tiny_design):
        """The search needs at least one seed."""
        evaluator = CandidateEvaluator(
            self._group(), Corner.BL, CornerLayout.from_design(tiny_design), make_context(tiny_design),
        )
        with pytest.raises(ValueError):
            corner_packing_search([], evaluator, PenaltyNormalizer.fit([]), np.ones(7), np.random.default_rng(0))


# =============================================================================
# Relocate
# =============================================================================

class TestRelocate:
    """Tests for relocate."""

    def test_round_budget(self):
        """At least ten percent of the macros, rounded up, at least one."""
        assert min_macros_per_round(132) == 14
        assert min_macros_per_round(100) == 10
        assert min_macros_per_round(5) == 1
        assert min_macros_per_round(40, 0.25) == 10

    def test_split_group(self):
        """Splitting yields singletons with fresh ids."""
        group = MacroGroup(id=2, member_macro_ids=(4, 5, 6), footprint=(8.0, 8.0), hier_path=("top",))
        parts = split_group(group, next_id=10)
        assert [p.id for p in parts] == [10, 11, 12]
        assert [p.member_macro_ids for p in parts] == [(4,), (5,), (6,)]
        assert all(p.hier_path == ("top",) for p in parts)

    def test_places_budget_legally(self, small_design, tmp_path):
        """Placed macros stay inside the die and never overlap."""
        layout = CornerLayout.from_design(small_design)
        metrics = MetricsCollector()
        tracer = RunTracer(tmp_path)
        result = relocate(
            layout, group_macros(small_design), make_context(small_design), CostWeights(),
            np.random.default_rng(1), FAST, n_min=4, tracer=tracer, metrics=metrics, iteration=1,
        )
        assert len(result.newly_placed) >= 4
        rects = np.array(list(layout.placed.values()))
        assert total_overlap(rects) == pytest.approx(0.0, abs=1e-9)
        assert not out_of_bounds(rects, small_design.outline.width, small_design.outline.height).any()
        assert metrics.counter("candidate_evaluations") > 0
        lines = (tmp_path / "relocating.jsonl").read_text().splitlines()
        assert len(lines) == len(result.assignments)

    def test_whole_groups(self, small_design):
        """Groups are fixed whole, so assignments cover every member."""
        layout = CornerLayout.from_design(small_design)
        groups = group_macros(small_design)
        result = relocate(
            layout, groups, make_context(small_design), CostWeights(), np.random.default_rng(2), FAST,
        )
        by_id = {g.id: g for g in groups}
        for assignment in result.assignments:
            if assignment.group_id in by_id:
                assert assignment.macro_ids == by_id[assignment.group_id].member_macro_ids
        placed = set(result.newly_placed)
        remaining = {m for g in result.remaining for m in g.member_macro_ids}
        assert placed.isdisjoint(remaining)
        assert placed | remaining == set(small_design.macro_ids)

    def test_deterministic(self, small_design):
        """Equal seeds give equal layouts."""
        runs = []
        for _ in range(2):
            layout = CornerLayout.from_design(small_design)
            relocate(
                layout, group_macros(small_design), make_context(small_design), CostWeights(),
                np.random.default_rng(5), FAST, n_min=3,
            )
            runs.append(layout.placed)
        assert runs[0] == runs[1]

    def test_stuck(self, tiny_payload):
        """A die covered by a blockage leaves nothing placeable."""
        tiny_payload["blockages"] = [{"name": "b0", "x": 0.0, "y": 0.0, "width": 100.0, "height": 80.0}]
        design = make_design(tiny_payload)
        with pytest.raises(StuckError) as exc:
            relocate(
                CornerLayout.from_design(design), group_macros(design), make_context(design), CostWeights(),
                np.random.default_rng(0), FAST,
            )
        assert exc.value.remaining_groups == [1, 2]

    def test_group_overshoots_budget(self):
        """A 20-macro group is fixed whole even though the budget is 5."""
        design = make_design({
            "outline": {"width": 100.0, "height": 80.0},
            "macros": [{"name": f"m{i}", "width": 3.0, "height": 3.0, "hier": ["top", "a"]} for i in range(20)],
            "cells": [{"name": f"c{i}", "width": 1.0, "height": 1.0, "hier": ["top", "a"]} for i in range(4)],
            "nets": [{"name": f"n{i}", "pins": [{"ref": f"m{i}"}, {"ref": f"c{i % 4}"}]} for i in range(20)],
        })
        group = MacroGroup(id=0, member_macro_ids=design.macro_ids, footprint=(3.0, 3.0), hier_path=("top", "a"))
        result = relocate(
            CornerLayout.from_design(design), [group], make_context(design), CostWeights(),
            np.random.default_rng(0), FAST, n_min=5,
        )
        assert len(result.assignments) == 1
        assert sorted(result.newly_placed) == list(design.macro_ids)
        assert result.remaining == []

    def test_positions_follow_packing(self, small_design):
        """Fixed macros move to their packed centers in the shared context."""
        layout = CornerLayout.from_design(small_design)
        ctx = make_context(small_design)
        result = relocate(
            layout, group_macros(small_design), ctx, CostWeights(), np.random.default_rng(1), FAST, n_min=4,
        )
        centers = layout.centers()
        for m in result.newly_placed:
            assert tuple(ctx.positions[m]) == pytest.approx(centers[m])

    def test_io_heavy_corner_gets_no_macros(self, small_design):
        """A quadrant mostly under keepouts receives no macro in a full run."""
        payload = design_to_model(small_design).model_dump()
        dropped = {p["name"] for p in payload["ports"]}
        payload["ports"] = [{"name": "io_bl", "x": 0.0, "y": 75.0}]
        nets = []
        for net in payload["nets"]:
            pins = [p for p in net["pins"] if p["ref"] not in dropped]
            if len(pins) >= 2:
                nets.append({**net, "pins": pins})
        nets.append({"name": "io_bl_net", "pins": [{"ref": "io_bl"}, {"ref": payload["macros"][0]["name"]}]})
        payload["nets"] = nets
        design = make_design(payload)
        config = PipelineConfig(
            seed=1, proto_bins=16, proto_max_iters=40, abplace_max_iters=60,
            n_total=10, n_eps=4, n_pop=3, n_min_fraction=0.25,
            io_depth_fraction=0.5, io_width_fraction=0.5,
        )
        regions = build_io_regions(design, config.io_depth_fraction, config.io_width_fraction)
        x, y, w, h = quadrant(design.outline, Corner.BL)
        assert regions.area_within((x, y, w, h)) > 0.5 * w * h

        final = run_pipeline(design, config, with_baseline=False)
        assert len(final.rects) == design.macro_count
        assert final.state.layout.trees[Corner.BL].macro_ids == []
