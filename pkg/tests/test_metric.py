import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contractcheck.errors import DuplicatePoint, ShapeMismatch, TooFewPoints
from contractcheck.metric import (
    FiniteMetricSpace,
    SelfMap,
    brute_force_fixed_points,
    is_contractive,
    lipschitz_constant,
    picard_iterate,
    picard_iterate_real,
    validate_metric,
)
from contractcheck.rational import rat


class TestSpace:
    def test_induced_from_reals_dist(self):
        space = FiniteMetricSpace.induced_from_reals([0.0, 1.0, 3.5])
        assert space.n == 3
        assert space.distance(0, 2) == 3.5
        assert np.allclose(space.dist, space.dist.T)

    def test_duplicate_points_rejected(self):
        with pytest.raises(DuplicatePoint):
            FiniteMetricSpace.induced_from_reals([1.0, 2.0, 1.0])

    def test_exact_flag(self):
        assert FiniteMetricSpace.induced_from_reals([rat(0), rat(1, 3)]).exact
        assert not FiniteMetricSpace.induced_from_reals([0.0, 0.5]).exact

    def test_distance_exact(self):
        space = FiniteMetricSpace.induced_from_reals([rat(0), rat(1, 3), rat(2)])
        assert space.distance_exact(1, 2) == rat(5, 3)
        assert space.distance_exact(2, 1) == rat(5, 3)

    def test_matrix_shape_checks(self):
        with pytest.raises(ShapeMismatch):
            FiniteMetricSpace(["a", "b"], dist=[[0, 1, 2], [1, 0, 1]])
        with pytest.raises(ShapeMismatch):
            FiniteMetricSpace(["a", "b"])

    def test_json_roundtrip_exact(self):
        space = FiniteMetricSpace.induced_from_reals([rat(0), rat("1/3")])
        data = space.to_json()
        assert data["coords_exact"] == ["0", "1/3"]
        back = FiniteMetricSpace.from_json(data)
        assert back.exact
        assert back.distance_exact(0, 1) == rat(1, 3)

    def test_json_roundtrip_matrix_only(self):
        space = FiniteMetricSpace(["a", "b"], dist=[[0.0, 2.0], [2.0, 0.0]])
        back = FiniteMetricSpace.from_json(space.to_json())
        assert back.distance(0, 1) == 2.0


class TestValidateMetric:
    def test_line_space_passes(self):
        space = FiniteMetricSpace.induced_from_reals([0.0, 1.0, 4.0])
        v = validate_metric(space)
        assert v.passed
        assert "by construction" in v.note

    def test_matrix_space_triangle_scanned(self):
        d = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.5], [2.0, 1.5, 0.0]])
        v = validate_metric(FiniteMetricSpace(list("abc"), dist=d))
        assert v.passed and v.note == ""

    def test_triangle_violation_witnessed(self):
        d = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
        v = validate_metric(FiniteMetricSpace(list("abc"), dist=d))
        assert v.status == "fail"
        assert v.note.startswith("triangle")
        assert (v.witness.i, v.witness.j, v.witness.k) == (0, 2, 1)

    def test_symmetry_violation(self):
        d = np.array([[0.0, 1.0], [1.5, 0.0]])
        v = validate_metric(FiniteMetricSpace(list("ab"), dist=d))
        assert v.status == "fail" and v.note == "symmetry violated"

    def test_nonzero_diagonal(self):
        d = np.array([[0.1, 1.0], [1.0, 0.0]])
        v = validate_metric(FiniteMetricSpace(list("ab"), dist=d))
        assert v.status == "fail" and v.note == "nonzero self-distance"

    def test_zero_off_diagonal(self):
        d = np.array([[0.0, 0.0], [0.0, 0.0]])
        v = validate_metric(FiniteMetricSpace(list("ab"), dist=d))
        assert v.status == "fail"
        assert "distance <= 0" in v.note

    def test_forced_triangle_on_line_space(self):
        space = FiniteMetricSpace.induced_from_reals([0.0, 1.0, 4.0])
        v = validate_metric(space, force_triangle=True)
        assert v.passed and v.note == ""


class TestLipschitzContractive:
    def test_halving_space(self, halving_space):
        space, smap = halving_space
        assert lipschitz_constant(space, smap) == pytest.approx(0.5)
        assert is_contractive(space, smap).passed

    def test_isometry_not_contractive(self):
        space = FiniteMetricSpace.induced_from_reals([0.0, 1.0, 2.0])
        swap = SelfMap([2, 1, 0])
        v = is_contractive(space, swap)
        assert v.status in ("fail", "inconclusive-at-tolerance")
        assert lipschitz_constant(space, swap) == pytest.approx(1.0)

    def test_exact_mode_agrees(self, halving_space):
        pts = [rat(1, 8), rat(1, 4), rat(1, 2), rat(1), rat(2)]
        space = FiniteMetricSpace.induced_from_reals(pts)
        smap = SelfMap([0, 0, 1, 2, 3])
        vf = is_contractive(space, smap, mode="float")
        ve = is_contractive(space, smap, mode="exact")
        assert vf.passed and ve.passed
        assert float(ve.margin) == pytest.approx(vf.margin)

    def test_exact_mode_strictness_at_tie(self):
        # the identity preserves every distance: margin exactly 0 must fail
        space = FiniteMetricSpace.induced_from_reals([rat(0), rat(1), rat(2)])
        smap = SelfMap([0, 1, 2])
        v = is_contractive(space, smap, mode="exact")
        assert v.status == "fail" and v.margin == 0

    def test_too_few_points(self):
        space = FiniteMetricSpace.induced_from_reals([1.0])
        with pytest.raises(TooFewPoints):
            lipschitz_constant(space, SelfMap([0]))

    def test_map_validation(self):
        space = FiniteMetricSpace.induced_from_reals([0.0, 1.0])
        with pytest.raises(ShapeMismatch):
            is_contractive(space, SelfMap([0, 5]))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_lipschitz_below_one_implies_contractive(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-5, 5, size=6)
        while len(np.unique(pts)) < 6:
            pts = rng.uniform(-5, 5, size=6)
        space = FiniteMetricSpace.induced_from_reals(pts.tolist())
        smap = SelfMap(rng.integers(0, 6, size=6).tolist())
        lam = lipschitz_constant(space, smap)
        v = is_contractive(space, smap)
        if lam < 1 - 1e-9:
            assert v.passed
        elif lam > 1 + 1e-9:
            assert v.status == "fail"


class TestPicard:
    def test_orbit_reaches_fixed_point(self, halving_space):
        space, smap = halving_space
        trace = picard_iterate(space, smap, start=6)
        assert trace.termination == "fixed-point"
        assert trace.iterates[-1] == 0
        assert trace.step_distances[-1] == 0.0
        assert trace.fixed_points == [0]

    def test_steps_match_distances(self, halving_space):
        space, smap = halving_space
        trace = picard_iterate(space, smap, start=4)
        for a, b, s in zip(trace.iterates, trace.iterates[1:], trace.step_distances):
            assert s == pytest.approx(space.distance(a, b))

    def test_cycle_detected(self):
        space = FiniteMetricSpace.induced_from_reals([0.0, 1.0, 2.0])
        trace = picard_iterate(space, SelfMap([1, 0, 0]), start=2)
        assert trace.cycle
        assert trace.termination == "max-iterations"
        assert trace.fixed_points == []

    def test_start_at_fixed_point(self, halving_space):
        space, smap = halving_space
        trace = picard_iterate(space, smap, start=0)
        assert trace.termination == "fixed-point"
        assert trace.iterates == [0, 0]
        assert trace.step_distances == [0.0]

    def test_csv_layout(self, halving_space):
        space, smap = halving_space
        text = picard_iterate(space, smap, start=2).to_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "iteration,point,step_distance"
        assert lines[1].split(",")[2] == ""  # no step before the first iterate
        assert len(lines) == len(picard_iterate(space, smap, start=2).iterates) + 1

    def test_real_iteration_contraction(self):
        trace = picard_iterate_real(lambda x: 0.5 * x + 1.0, 10.0, atol=1e-12)
        assert trace.termination in ("tolerance", "fixed-point")
        assert trace.iterates[-1] == pytest.approx(2.0, abs=1e-9)
        # geometric decay of the steps
        ratios = [b / a for a, b in zip(trace.step_distances, trace.step_distances[1:]) if a > 0]
        assert all(r == pytest.approx(0.5, abs=1e-6) for r in ratios[:-1])

    def test_real_iteration_nonconvergent(self):
        trace = picard_iterate_real(lambda x: -x, 1.0, max_iter=30)
        assert trace.termination == "max-iterations"

    def test_fixed_point_scan(self):
        space = FiniteMetricSpace.induced_from_reals([0.0, 1.0, 2.0, 3.0])
        assert brute_force_fixed_points(space, SelfMap([0, 0, 2, 2])) == [0, 2]
