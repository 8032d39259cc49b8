import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trineknap.errors import InfeasibleInstance, ParameterError, UndefinedGradient
from trineknap.kspace import (
    KSolution,
    ProblemInstance,
    continuous_feasible_range,
    integer_candidates,
    integer_feasible_range,
    kkt_candidates,
    partial_k0,
    partial_k1,
    projected_objective,
    solve_continuous,
    solve_integer,
    y_from_counts,
)
from trineknap.objective import make_objective
from trineknap.sampling import random_spec
from trineknap.tangency import preprocess


def brute_force(spec, n, M):
    """Best integer (k0, k1) by a plain double loop; independent of the numpy scan."""
    best = -math.inf
    for k0 in range(n + 1):
        for k1 in range(n + 1 - k0):
            ky = n - k0 - k1
            if ky == 0:
                if abs(k1 - M) > 1e-12 * max(1, n):
                    continue
                val = spec.f0 * k0 + spec.f1 * k1
            else:
                y = (M - k1) / ky
                if y < -1e-12 or y > 1 + 1e-12:
                    continue
                y = min(max(y, 0.0), 1.0)
                val = spec.f0 * k0 + spec.f1 * k1 + float(spec.value(y)) * ky
            best = max(best, val)
    return best


def point(y, ky=1.0):
    return KSolution(k0=0.0, k1=0.0, ky=ky, y=y, objective=None)


@pytest.fixture
def smooth_tang(smooth):
    return preprocess(smooth, 1e-10)


def test_y_from_counts():
    assert y_from_counts(4, 2, 1, 0) == pytest.approx(2 / 3)
    assert y_from_counts(4, 2, 2, 2) is None
    assert y_from_counts(4, 2, 0, 0) == 0.5
    with pytest.raises(ParameterError):
        y_from_counts(4, 2, 3, 2)


@pytest.mark.parametrize(
    "n,M,y,k0,k1",
    [
        (4, 2, 2 / 3, (1, 2), (0, 2)),
        (4, 2, 0.5, (0, 2), (0, 2)),
        (5, 2, 0.6, (5 / 3, 3), (0, 2)),
    ],
)
def test_continuous_feasible_range(n, M, y, k0, k1):
    r0, r1 = continuous_feasible_range(n, M, y)
    assert r0 == pytest.approx(k0)
    assert r1 == pytest.approx(k1)


def test_integer_feasible_range():
    assert integer_feasible_range(5, 2, 0.6) == (range(2, 4), range(0, 3))
    assert integer_feasible_range(4, 2, 2 / 3) == (range(1, 3), range(0, 3))
    # upper bound floor(2.5) = 2; k1 = 0 would need ky = 5 > n, so the lower bound is 1
    assert integer_feasible_range(4, 2.5, 0.5)[1] == range(1, 3)


def test_integer_range_may_be_empty():
    # y = 0.9 with M = 0.1, n = 3: k0 >= (2.7 - 0.1)/0.9 = 2.89 but k0 <= 2.9
    r0, _ = integer_feasible_range(3, 0.1, 0.9)
    assert list(r0) == []


def test_partial_k0_examples(smooth):
    assert partial_k0(smooth, point(0.75)) == pytest.approx(0.0, abs=1e-15)
    assert partial_k0(smooth, point(0.5)) == pytest.approx(0.25)
    assert partial_k0(smooth, point(0.9)) < 0


def test_partial_k1_examples(smooth):
    assert partial_k1(smooth, point(0.25)) == pytest.approx(0.0, abs=1e-15)
    assert partial_k1(smooth, point(0.5)) == pytest.approx(-0.25)
    assert partial_k1(smooth, point(0.1)) > 0


def test_partials_need_interior(smooth):
    k = KSolution(k0=2, k1=2, ky=0, y=None, objective=2.0)
    with pytest.raises(UndefinedGradient):
        partial_k0(smooth, k)
    with pytest.raises(UndefinedGradient):
        partial_k1(smooth, k)


def test_instance_validation(smooth):
    with pytest.raises(InfeasibleInstance, match=r"M outside \[0, n\]"):
        ProblemInstance(4, 5.0, smooth)
    with pytest.raises(InfeasibleInstance):
        ProblemInstance(4, -0.1, smooth)
    with pytest.raises(ParameterError):
        ProblemInstance(0, 0.0, smooth)
    assert ProblemInstance(4, 4 + 1e-13, smooth).M == 4.0
    assert ProblemInstance(4, -1e-13, smooth).M == 0.0


def test_kkt_table(smooth, smooth_tang):
    rows = {r.label: r for r in kkt_candidates(ProblemInstance(4, 2.0, smooth), smooth_tang)}
    c2 = rows["C2"]
    assert (c2.k0, c2.k1, c2.ky, c2.y) == pytest.approx((4 / 3, 0, 8 / 3, 0.75))
    assert c2.feasible and c2.objective == pytest.approx(2.25, abs=1e-12)
    a = rows["A"]
    assert (a.k0, a.k1, a.ky, a.y) == (2.0, 2.0, 0.0, None)
    assert a.objective == 2.0
    assert rows["C1"].y == 0.5
    c3 = rows["C3"]
    assert c3.y == pytest.approx(0.25)
    # k1 = n - (n - M)/(1 - d1) = 4 - 8/3
    assert c3.k1 == pytest.approx(4 / 3) and c3.feasible
    assert "B" not in rows


def test_kkt_flags_infeasible_rows(smooth, smooth_tang):
    rows = {r.label: r for r in kkt_candidates(ProblemInstance(4, 3.5, smooth), smooth_tang)}
    assert not rows["C2"].feasible  # M > d0 n
    rows = {r.label: r for r in kkt_candidates(ProblemInstance(4, 0.5, smooth), smooth_tang)}
    assert not rows["C3"].feasible  # M < d1 n
    assert rows["C2"].feasible


def test_kkt_empty_knapsack(any_spec):
    tang = preprocess(any_spec, 1e-8)
    a = kkt_candidates(ProblemInstance(4, 0.0, any_spec), tang)[0]
    assert (a.k0, a.k1, a.ky) == (4.0, 0.0, 0.0)
    assert a.objective == pytest.approx(4 * any_spec.f0)


def test_solve_continuous(smooth, smooth_tang):
    k = solve_continuous(ProblemInstance(4, 2.0, smooth), smooth_tang)
    assert (k.k0, k.k1, k.ky, k.y) == pytest.approx((4 / 3, 0, 8 / 3, 0.75))
    assert k.objective == pytest.approx(2.25, abs=1e-12)
    k = solve_continuous(ProblemInstance(4, 3.5, smooth), smooth_tang)
    assert (k.k0, k.k1, k.ky, k.y) == (0.0, 0.0, 4.0, 0.875)
    k = solve_continuous(ProblemInstance(4, 3.0, smooth), smooth_tang)
    assert (k.k0, k.k1, k.ky) == pytest.approx((0, 0, 4), abs=1e-9)
    assert k.y == pytest.approx(0.75)


def test_solve_integer_below_threshold(smooth, smooth_tang):
    rep = solve_integer(ProblemInstance(4, 2.0, smooth), smooth_tang)
    k = rep.chosen
    assert k.counts == (1, 0, 3) and k.y == pytest.approx(2 / 3)
    assert k.label == "C2_minus"
    assert k.objective == pytest.approx(20 / 9, abs=1e-12)
    assert rep.x == pytest.approx((0, 2 / 3, 2 / 3, 2 / 3))
    # C2+ = (2, 0, 2, y=1) folds onto A- = (2, 2, 0) and is listed once
    assert [c.label for c in rep.candidates] == ["A_minus", "C2_minus"]


def test_solve_integer_above_threshold(smooth, smooth_tang):
    k = solve_integer(ProblemInstance(4, 3.2, smooth), smooth_tang).chosen
    assert k.counts == (0, 0, 4) and k.y == pytest.approx(0.8)
    assert k.objective == pytest.approx(3.584, abs=1e-12)


def test_full_knapsack(any_spec):
    tang = preprocess(any_spec, 1e-8)
    k = solve_integer(ProblemInstance(5, 5.0, any_spec), tang).chosen
    assert k.counts == (0, 5, 0) and k.y is None
    assert k.objective == pytest.approx(5 * any_spec.f1)


def test_c2_candidates_merge_when_integral(smooth, smooth_tang):
    # M / d0 = 2 exactly
    cands = integer_candidates(ProblemInstance(4, 1.5, smooth), smooth_tang)
    c2 = [c for c in cands if c.label.startswith("C2")]
    assert len(c2) == 1 and c2[0].y == 0.75


def test_c2_plus_overfull_flagged(smooth, smooth_tang):
    cands = {c.label: c for c in integer_candidates(ProblemInstance(4, 1.2, smooth), smooth_tang)}
    assert cands["C2_plus"].y == pytest.approx(1.2)
    assert not cands["C2_plus"].feasible and cands["C2_plus"].objective is None


def test_tangency_past_one():
    """Steep logistic with c near 0.9 has d0 > 1; solvers must still match enumeration."""
    spec = make_objective("logistic", {"scale": 10.0, "center": 0.85})
    tang = preprocess(spec, 1e-10)
    assert tang[0].d_r > 1
    for n, M in [(45, 37.86), (51, 20.23), (17, 14.8), (6, 5.5)]:
        inst = ProblemInstance(n, M, spec)
        assert solve_integer(inst, tang).objective == pytest.approx(brute_force(spec, n, M), abs=1e-9)
        cont = solve_continuous(inst, tang)
        assert cont.ky == 0 and cont.k1 == pytest.approx(M)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 40), u=st.floats(0, 1))
def test_integer_rule_matches_brute_force(seed, n, u):
    spec = random_spec(np.random.default_rng(seed))
    tang = preprocess(spec, 1e-10)
    M = u * n
    inst = ProblemInstance(n, M, spec)
    rep = solve_integer(inst, tang)
    k = rep.chosen
    assert rep.objective == pytest.approx(brute_force(spec, n, inst.M), abs=1e-9)
    # equality feasibility, integrality, y in (0, 1)
    assert k.k0 + k.k1 + k.ky == n
    assert all(isinstance(v, int) and v >= 0 for v in k.counts)
    assert abs(k.k1 + (k.y or 0.0) * k.ky - inst.M) <= 1e-9
    assert (k.y is None) == (k.ky == 0)
    if k.y is not None:
        assert 0 < k.y < 1
    # relaxation bound
    assert solve_continuous(inst, tang).objective >= rep.objective - 1e-12


def _grid_points(n, M):
    k0s = np.linspace(0, 0.95 * (n - M), 20)
    k1s = np.linspace(0, 0.95 * M, 20)
    return [(a, b) for a in k0s for b in k1s]


@pytest.mark.parametrize("n,M", [(20, 7.3), (10, 8.9), (12, 1.1)])
def test_gradient_signs_and_finite_differences(any_spec, n, M):
    d0, d1 = (t.d_r for t in preprocess(any_spec, 1e-12))
    h = 1e-5
    for k0, k1 in _grid_points(n, M):
        ky = n - k0 - k1
        y = y_from_counts(n, M, k0, k1)
        k = KSolution(k0=k0, k1=k1, ky=ky, y=y, objective=None)
        g0, g1 = partial_k0(any_spec, k), partial_k1(any_spec, k)
        if abs(y - d0) > 1e-6:
            assert np.sign(g0) == np.sign(d0 - y)
        if abs(y - d1) > 1e-6:
            assert np.sign(g1) == np.sign(d1 - y)
        fd0 = (projected_objective(any_spec, n, M, k0 + h, k1) - projected_objective(any_spec, n, M, k0 - h, k1)) / (2 * h)
        fd1 = (projected_objective(any_spec, n, M, k0, k1 + h) - projected_objective(any_spec, n, M, k0, k1 - h)) / (2 * h)
        assert abs(fd0 - g0) <= 1e-6 * abs(g0) + 1e-9
        assert abs(fd1 - g1) <= 1e-6 * abs(g1) + 1e-9
        # dy/dk0 = y / ky >= 0
        dy = (y_from_counts(n, M, k0 + h, k1) - y_from_counts(n, M, k0 - h, k1)) / (2 * h)
        assert dy == pytest.approx(y / ky, rel=1e-6) and dy >= 0


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 200), u=st.floats(0, 1))
def test_kkt_multiplier_structure(seed, n, u):
    spec = random_spec(np.random.default_rng(seed))
    tang = preprocess(spec, 1e-10)
    k = solve_integer(ProblemInstance(n, u * n, spec), tang).chosen
    if k.ky > 0:
        fy = float(spec.deriv(k.y))
        if k.k0 > 0:
            assert float(spec.deriv(0.0)) <= fy + 1e-9
        if k.k1 > 0:
            assert fy <= float(spec.deriv(1.0)) + 1e-9
