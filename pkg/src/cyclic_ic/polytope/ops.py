"""Projection, redundancy removal and comparison of exact inequality systems."""

from __future__ import annotations

import itertools
import logging
import math
import time
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, feasible_point, maximize
from .system import (
    Inequality,
    InequalitySystem,
    InfeasibleSystem,
    UnboundedPolytope,
    Witness,
    to_fraction,
)

log = logging.getLogger(__name__)

MAX_VERTEX_DIM = 3


class EliminationTimeout(TimeoutError):
    """FM ran past its deadline; ``partial`` is the system reached so far."""

    def __init__(self, message: str, partial: InequalitySystem, eliminated: tuple[str, ...]):
        super().__init__(message)
        self.partial = partial
        self.eliminated = eliminated


def _check_feasible(sys: InequalitySystem) -> tuple[Fraction, ...]:
    A, b = sys.matrix()
    res = feasible_point(A, b, sys.dim)
    if res.status == INFEASIBLE:
        raise InfeasibleSystem("system is infeasible", sys, res.certificate)
    return res.x


def _canonical_rows(rows: Iterable[Inequality]) -> list[Inequality]:
    """Normalize, drop ``0 <= nonneg`` rows, keep the tightest of parallel duplicates."""
    best: dict[tuple, Inequality] = {}
    for r in rows:
        r = r.normalized()
        if r.is_trivial():
            if r.rhs < 0:
                raise InfeasibleSystem(f"derived row 0 <= {r.rhs}")
            continue
        prev = best.get(r.coeffs)
        if prev is None or r.rhs < prev.rhs:
            best[r.coeffs] = r
    return list(best.values())


def remove_redundant(sys: InequalitySystem) -> InequalitySystem:
    """Return an irredundant system with the same solution set.

    Row ``c.x <= b`` is dropped when ``max c.x`` over the remaining rows is at
    most ``b``; rows are tested in order against the rows still kept. For an
    infeasible input the result is a minimal infeasible subsystem instead.
    """
    try:
        rows = _canonical_rows(sys.rows)
    except InfeasibleSystem:
        bad = next(r for r in sys.rows if r.is_trivial() and r.rhs < 0)
        return sys.with_rows([bad])
    A = [list(r.coeffs) for r in rows]
    b = [r.rhs for r in rows]
    res = feasible_point(A, b, sys.dim)
    if res.status == INFEASIBLE:
        return sys.with_rows(r for r, y in zip(rows, res.certificate) if y > 0)

    keep = [True] * len(rows)
    for i, row in enumerate(rows):
        others = [j for j in range(len(rows)) if keep[j] and j != i]
        out = maximize([A[j] for j in others], [b[j] for j in others], A[i])
        if out.status == OPTIMAL and out.value <= row.rhs:
            keep[i] = False
    return sys.with_rows(r for r, k in zip(rows, keep) if k)


def _eliminate_one(sys: InequalitySystem, var: str) -> InequalitySystem:
    k = sys.variables.index(var)
    zero, pos, neg = [], [], []
    for r in sys.rows:
        c = r.coeffs[k]
        (pos if c > 0 else neg if c < 0 else zero).append(r)
    new_rows = list(zero)
    for p in pos:
        for q in neg:
            lp, lq = -q.coeffs[k], p.coeffs[k]
            coeffs = tuple(lp * a + lq * c for a, c in zip(p.coeffs, q.coeffs))
            new_rows.append(Inequality(coeffs, lp * p.rhs + lq * q.rhs))
    variables = sys.variables[:k] + sys.variables[k + 1:]
    out = []
    for r in new_rows:
        r = Inequality(r.coeffs[:k] + r.coeffs[k + 1:], r.rhs)
        if r.is_trivial():
            if r.rhs < 0:
                raise InfeasibleSystem(f"eliminating {var} produced 0 <= {r.rhs}")
            continue
        out.append(r)
    return InequalitySystem(variables, tuple(out))


def _pick_next(sys: InequalitySystem, remaining: list[str]) -> str:
    def cost(v):
        k = sys.variables.index(v)
        p = sum(1 for r in sys.rows if r.coeffs[k] > 0)
        n = sum(1 for r in sys.rows if r.coeffs[k] < 0)
        return p * n - p - n
    return min(remaining, key=lambda v: (cost(v), remaining.index(v)))


def fourier_motzkin_eliminate(sys: InequalitySystem, elim: Iterable[str],
                              order: Optional[Sequence[str]] = None,
                              prune: bool = True,
                              deadline: Optional[float] = None) -> InequalitySystem:
    """Project ``sys`` onto the variables not in ``elim``.

    Variables are removed one at a time by pairing every lower bound with every
    upper bound. ``order`` fixes the elimination sequence; otherwise the
    variable with the fewest generated rows goes next. With ``prune`` the
    result of each step is passed through :func:`remove_redundant`.
    ``deadline`` is a ``time.monotonic()`` value.
    """
    elim = list(dict.fromkeys(elim))
    missing = [v for v in elim if v not in sys.variables]
    if missing:
        raise ValueError(f"cannot eliminate unknown variables {missing}")
    if order is not None:
        if sorted(order) != sorted(elim):
            raise ValueError("order must be a permutation of the eliminated variables")
        elim = list(order)
    _check_feasible(sys)

    done: list[str] = []
    cur = sys
    remaining = list(elim)
    while remaining:
        if deadline is not None and time.monotonic() > deadline:
            raise EliminationTimeout(
                f"deadline hit after eliminating {done}", cur, tuple(done))
        var = remaining[0] if order is not None else _pick_next(cur, remaining)
        remaining.remove(var)
        cur = _eliminate_one(cur, var)
        if prune:
            cur = remove_redundant(cur)
        done.append(var)
        log.debug("eliminated %s: %d rows over %d variables", var, len(cur), cur.dim)
    return cur


def in_projection(sys: InequalitySystem, point: dict[str, object]) -> bool:
    """True iff some assignment of the other variables extends ``point`` to a solution."""
    try:
        sliced = sys.fix(point)
    except InfeasibleSystem:
        return False
    if sliced.dim == 0:
        return True
    A, b = sliced.matrix()
    return feasible_point(A, b, sliced.dim).status != INFEASIBLE


def _aligned(outer: InequalitySystem, inner: InequalitySystem) -> InequalitySystem:
    if outer.variables == inner.variables:
        return outer
    return outer.reorder(inner.variables)


def contains(outer: InequalitySystem, inner: InequalitySystem) -> tuple[bool, Optional[Witness]]:
    """Decide ``inner ⊆ outer`` by maximizing each outer row over ``inner``.

    On failure the witness is a point of ``inner`` violating the returned row
    of ``outer``. If the violation comes from ``inner`` being unbounded along
    the row's direction, the witness also carries that ray.
    """
    outer = _aligned(outer, inner)
    A, b = inner.matrix()
    if inner.rows:
        feas = feasible_point(A, b, inner.dim)
        if feas.status == INFEASIBLE:
            return True, None
    for i, row in enumerate(outer.rows):
        res = maximize(A, b, row.coeffs)
        if res.status == INFEASIBLE:
            return True, None
        if res.status == UNBOUNDED:
            x0, d = res.x, res.ray
            slope = row.evaluate(d)
            t = max(Fraction(0), (row.rhs - row.evaluate(x0)) / slope) + 1
            point = tuple(a + t * r for a, r in zip(x0, d))
            return False, Witness(point, i, ray=d, note="inner is unbounded along this row")
        if res.value > row.rhs:
            return False, Witness(res.x, i, note=f"max {res.value} exceeds {row.rhs}")
    return True, None


def set_equal(a: InequalitySystem, b: InequalitySystem) -> tuple[bool, Optional[Witness]]:
    ok, w = contains(a, b)
    if not ok:
        return False, Witness(w.point, w.violated_row, w.ray,
                              "point of the second system violates the first: " + w.note)
    ok, w = contains(b, a)
    if not ok:
        return False, Witness(w.point, w.violated_row, w.ray,
                              "point of the first system violates the second: " + w.note)
    return True, None


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    n = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def enumerate_vertices(sys: InequalitySystem, nonneg: bool = False) -> list[tuple[Fraction, ...]]:
    """All vertices of a bounded polytope of dimension at most 3.

    Infeasible systems give an empty list. Unbounded ones raise
    :class:`UnboundedPolytope`. Planar output is counterclockwise.
    """
    n = sys.dim
    if n > MAX_VERTEX_DIM:
        raise ValueError(f"vertex enumeration supports at most {MAX_VERTEX_DIM} variables, got {n}")
    if nonneg:
        sys = sys.nonnegative()
    A, b = sys.matrix()
    if feasible_point(A, b, n).status == INFEASIBLE:
        return []
    for k in range(n):
        for s in (1, -1):
            c = [0] * n
            c[k] = s
            res = maximize(A, b, c)
            if res.status == UNBOUNDED:
                raise UnboundedPolytope(
                    f"polytope is unbounded along ray {tuple(str(v) for v in res.ray)}", res.ray)
    if n == 0:
        return [()]

    found = []
    seen = set()
    for combo in itertools.combinations(range(len(A)), n):
        x = _solve_square([A[i] for i in combo], [b[i] for i in combo])
        if x is None:
            continue
        pt = tuple(x)
        if pt in seen:
            continue
        if sys.contains_point(pt):
            seen.add(pt)
            found.append(pt)
    if n == 2 and len(found) > 2:
        cx = sum(float(p[0]) for p in found) / len(found)
        cy = sum(float(p[1]) for p in found) / len(found)
        found.sort(key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))
    else:
        found.sort()
    return found
