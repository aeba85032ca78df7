import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_ic.polytope import (
    Inequality,
    InequalitySystem,
    InfeasibleSystem,
    UnboundedPolytope,
    contains,
    dyadic,
    enumerate_vertices,
    fourier_motzkin_eliminate,
    in_projection,
    remove_redundant,
    set_equal,
)

from _gen import brute_vertices, random_point, random_system


def system(variables, rows):
    return InequalitySystem.from_rows(variables, rows)


def as_set(sys):
    return {(r.coeffs, r.rhs) for r in sys.rows}


# -- Fourier-Motzkin ------------------------------------------------------------


def test_fm_single_pairing():
    sys = system("x y".split(), [([0, 1], 2), ([1, -1], 1), ([-1, 0], 0)])
    proj = fourier_motzkin_eliminate(sys, ["y"])
    assert proj.variables == ("x",)
    assert as_set(proj) == as_set(system(["x"], [([1], 3), ([-1], 0)]))


def test_fm_variable_without_upper_bound():
    sys = system("x y".split(), [([0, -1], 0), ([1, -1], 1), ([1, 0], 4), ([-1, 0], 0)])
    proj = fourier_motzkin_eliminate(sys, ["y"])
    assert as_set(proj) == as_set(system(["x"], [([1], 4), ([-1], 0)]))


def test_fm_infeasible_raises_with_certificate():
    sys = system("x y".split(), [([1, 1], 0), ([-1, 0], -1), ([0, -1], 0)])
    with pytest.raises(InfeasibleSystem) as info:
        fourier_motzkin_eliminate(sys, ["y"])
    y = info.value.certificate
    assert min(y) >= 0
    A, b = sys.matrix()
    assert all(sum(y[j] * A[j][k] for j in range(len(A))) == 0 for k in range(2))
    assert sum(yj * bj for yj, bj in zip(y, b)) < 0


def test_fm_rejects_unknown_variable():
    with pytest.raises(ValueError):
        fourier_motzkin_eliminate(system(["x"], [([1], 1)]), ["z"])


def test_fm_timeout_reports_partial():
    from cyclic_ic.polytope import EliminationTimeout

    sys = system("x y z".split(), [([1, 1, 1], 1), ([-1, 0, 0], 0), ([0, -1, 0], 0), ([0, 0, -1], 0)])
    with pytest.raises(EliminationTimeout) as info:
        fourier_motzkin_eliminate(sys, ["y", "z"], deadline=0.0)
    assert info.value.partial == sys


# -- redundancy -----------------------------------------------------------------


def test_remove_redundant_dominated():
    out = remove_redundant(system(["x"], [([1], 1), ([1], 2)]))
    assert as_set(out) == {((Fraction(1),), Fraction(1))}


def test_remove_redundant_lp_check():
    # x + y <= 2 is implied by x <= 1 and y <= 1 as well, so both sum rows go
    sys = system("x y".split(), [([1, 1], 2), ([1, 0], 1), ([0, 1], 1), ([1, 1], 3)])
    out = remove_redundant(sys)
    assert as_set(out) == as_set(system("x y".split(), [([1, 0], 1), ([0, 1], 1)]))


def test_remove_redundant_keeps_binding_sum():
    sys = system("x y".split(), [([1, 1], 1), ([1, 0], 1), ([0, 1], 1), ([1, 1], 3)])
    out = remove_redundant(sys)
    assert as_set(out) == as_set(system("x y".split(), [([1, 1], 1), ([1, 0], 1), ([0, 1], 1)]))


def test_remove_redundant_scaled_duplicates():
    out = remove_redundant(system(["x"], [([2], 2), ([1], 1), ([Fraction(1, 2)], Fraction(1, 2))]))
    assert len(out) == 1


def test_remove_redundant_infeasible_returns_minimal_core():
    sys = system("x y".split(), [([1, 0], 0), ([-1, 0], -1), ([0, 1], 5), ([0, -1], 5)])
    out = remove_redundant(sys)
    assert len(out) == 2
    with pytest.raises(InfeasibleSystem):
        fourier_motzkin_eliminate(out, ["x"])


def test_remove_redundant_sequential_with_implicit_equality():
    # x = 0 makes y <= 1 and x + y <= 1 interchangeable; exactly one must stay
    sys = system("x y".split(), [([1, 0], 0), ([-1, 0], 0), ([0, 1], 1), ([1, 1], 1), ([0, -1], 0)])
    out = remove_redundant(sys)
    assert set_equal(out, sys)[0]
    assert len(out) == 4


# -- containment and equality ---------------------------------------------------


def box(bounds):
    n = len(bounds)
    rows = []
    for i, u in enumerate(bounds):
        e = [0] * n
        e[i] = 1
        rows += [(e, u), ([-v for v in e], 0)]
    return system([f"R{i + 1}" for i in range(n)], rows)


def test_box_inside_box():
    assert contains(box([2, 2]), box([1, 1])) == (True, None)


def test_containment_witness():
    inner = system(["R1", "R2"], [([1, 0], 3), ([-1, 0], 0), ([0, 1], 0), ([0, -1], 0)])
    outer = system(["R1", "R2"], [([1, 0], 2)])
    ok, w = contains(outer, inner)
    assert not ok
    assert w.violated_row == 0
    assert w.point == (3, 0)


def test_containment_unbounded_inner():
    inner = system(["x"], [([-1], 0)])
    ok, w = contains(system(["x"], [([1], 5)]), inner)
    assert not ok and w.ray is not None
    assert w.point[0] > 5 and inner.contains_point(w.point)


def test_empty_inner_is_contained():
    assert contains(box([1]), system(["R1"], [([1], 0), ([-1], -1)]))[0]


def test_set_equal_identical_and_scaled():
    a = system(["x"], [([1], 1)])
    assert set_equal(a, a) == (True, None)
    assert set_equal(a, system(["x"], [([2], 2)]))[0]


def test_set_equal_reorders_variables():
    a = system(["x", "y"], [([1, 0], 1), ([0, 1], 2), ([-1, 0], 0), ([0, -1], 0)])
    b = system(["y", "x"], [([0, 1], 1), ([1, 0], 2), ([-1, 0], 0), ([0, -1], 0)])
    assert set_equal(a, b)[0]


def test_set_equal_witness_side():
    ok, w = set_equal(box([1, 1]), box([1, 2]))
    assert not ok and box([1, 2]).contains_point(w.point) and not box([1, 1]).contains_point(w.point)


# -- vertices -------------------------------------------------------------------


def test_vertices_box():
    sys = system(["R1", "R2"], [([1, 0], 1), ([0, 1], 2)])
    verts = enumerate_vertices(sys, nonneg=True)
    assert set(verts) == {(0, 0), (1, 0), (0, 2), (1, 2)}
    # counterclockwise: positive signed area
    shoelace = sum(float(verts[i - 1][0] * verts[i][1] - verts[i][0] * verts[i - 1][1])
                   for i in range(len(verts)))
    assert shoelace > 0


def test_vertices_infeasible_is_empty_list():
    assert enumerate_vertices(system(["x"], [([1], 0), ([-1], -1)])) == []


def test_vertices_unbounded_raises():
    with pytest.raises(UnboundedPolytope) as info:
        enumerate_vertices(system(["x", "y"], [([1, 0], 1)]), nonneg=True)
    assert info.value.ray[1] > 0


def test_vertices_dimension_guard():
    with pytest.raises(ValueError):
        enumerate_vertices(box([1, 1, 1, 1]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_vertices_match_brute_force(seed):
    rng = np.random.default_rng(seed)
    bounded = random_system(rng, max_vars=3, max_rows=6)
    n = bounded.dim
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        bounded = bounded.add_rows([Inequality(tuple(e), Fraction(4)),
                                    Inequality(tuple(-v for v in e), Fraction(4))])
    A, b = bounded.matrix()
    assert set(enumerate_vertices(bounded)) == brute_vertices(A, b)


# -- interchange format and dyadic conversion -----------------------------------


fractions = st.fractions(max_denominator=10**6).filter(lambda f: abs(f) < 10**6)


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.tuples(st.lists(fractions, min_size=n, max_size=n), fractions),
                       max_size=6).map(lambda rows: (n, rows))))
def test_text_round_trip(data):
    n, rows = data
    rows = [(c, r) for c, r in rows if any(c) or r >= 0]
    sys = system([f"v{i}" for i in range(n)], rows)
    assert InequalitySystem.loads(sys.dumps()) == sys


def test_text_format_shape():
    sys = system(["R1", "R2"], [([1, Fraction(-1, 2)], Fraction(7, 3))])
    assert sys.dumps() == "R1 R2\n1 -1/2 <= 7/3\n"


def test_text_format_errors():
    with pytest.raises(ValueError, match="line 2"):
        InequalitySystem.loads("x y\n1 2 3 <= 1\n")
    with pytest.raises(ValueError):
        InequalitySystem.loads("")


def test_invariant_rejects_bad_rows():
    with pytest.raises(InfeasibleSystem):
        system(["x"], [([0], -1)])
    with pytest.raises(ValueError):
        system(["x"], [([1, 2], 1)])


@given(st.floats(-1e3, 1e3, allow_nan=False))
def test_dyadic_is_nearest_grid_point(x):
    q = dyadic(x)
    assert q.denominator <= 2**40
    assert abs(q - Fraction(x)) <= Fraction(1, 2**41)


def test_dyadic_rejects_nonfinite():
    with pytest.raises(ValueError):
        dyadic(math.inf)


# -- properties -----------------------------------------------------------------


def _feasible(sys):
    try:
        fourier_motzkin_eliminate(sys, [])
        return True
    except InfeasibleSystem:
        return False


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_projection_soundness(seed):
    rng = np.random.default_rng(seed)
    sys = random_system(rng)
    k = int(rng.integers(1, sys.dim))
    elim = list(sys.variables[:k])
    keep = sys.variables[k:]
    if not _feasible(sys):
        with pytest.raises(InfeasibleSystem):
            fourier_motzkin_eliminate(sys, elim)
        return
    proj = fourier_motzkin_eliminate(sys, elim)
    for _ in range(8):
        pt = random_point(rng, len(keep))
        assert proj.contains_point(pt) == in_projection(sys, dict(zip(keep, pt)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_redundancy_removal_preserves_set(seed):
    rng = np.random.default_rng(seed)
    sys = random_system(rng)
    if not _feasible(sys):
        return
    out = remove_redundant(sys)
    assert len(out) <= len(sys)
    assert set_equal(out, sys)[0]
    # irredundant: dropping any remaining row enlarges the set
    for i in range(len(out)):
        rest = out.with_rows(r for j, r in enumerate(out.rows) if j != i)
        assert not contains(out, rest)[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_elimination_order_invariance(seed):
    rng = np.random.default_rng(seed)
    sys = random_system(rng)
    if sys.dim < 3 or not _feasible(sys):
        return
    elim = list(sys.variables[:2])
    a = fourier_motzkin_eliminate(sys, elim, order=elim)
    b = fourier_motzkin_eliminate(sys, elim, order=elim[::-1])
    assert set_equal(a, b)[0]


def test_pruning_does_not_change_projection():
    rng = np.random.default_rng(5)
    for _ in range(10):
        sys = random_system(rng, max_vars=4, max_rows=7)
        if not _feasible(sys):
            continue
        elim = list(sys.variables[:2])
        pruned = fourier_motzkin_eliminate(sys, elim)
        raw = fourier_motzkin_eliminate(sys, elim, prune=False)
        assert set_equal(pruned, raw)[0]
