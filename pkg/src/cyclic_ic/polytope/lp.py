"""Exact rational linear programming.

Solves ``max c.x  s.t.  A x <= b`` over free variables ``x`` by running a
two-phase tableau simplex (Bland's rule) on the dual problem

    min b.y  s.t.  A^T y = c,  y >= 0.

The dual tableau has one row per variable, so it stays small even when the
primal has many inequalities, which is the common case for redundancy checks.
Primal solutions are read back from the simplex multipliers.

Arithmetic is done in ``gmpy2.mpq``; inputs and outputs are ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = mpq(0)
_ONE = mpq(1)


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`maximize`.

    ``x`` is an optimal point (OPTIMAL) or a feasible point (UNBOUNDED).
    ``ray`` satisfies ``A ray <= 0`` and ``c.ray > 0`` when UNBOUNDED.
    ``certificate`` is a Farkas vector ``y >= 0`` with ``A^T y = 0`` and
    ``b.y < 0`` when INFEASIBLE.
    """

    status: str
    value: Optional[Fraction] = None
    x: Optional[tuple[Fraction, ...]] = None
    ray: Optional[tuple[Fraction, ...]] = None
    certificate: Optional[tuple[Fraction, ...]] = None


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _f(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _DualTableau:
    """Tableau for ``A^T y = c, y >= 0`` plus one artificial per equality."""

    def __init__(self, A: list[list[mpq]], c: list[mpq], n: int):
        m = len(A)
        self.m, self.n = m, n
        self.sign = [(-1 if ck < 0 else 1) for ck in c]
        width = m + n
        self.rows = []
        for k in range(n):
            s = self.sign[k]
            row = [s * A[j][k] for j in range(m)] + [_ZERO] * n
            row[m + k] = _ONE
            self.rows.append(row)
        self.rhs = [self.sign[k] * c[k] for k in range(n)]
        self.basis = [m + k for k in range(n)]
        self.width = width

    def pivot(self, p: int, e: int) -> None:
        rows, rhs = self.rows, self.rhs
        prow = rows[p]
        piv = prow[e]
        if piv != _ONE:
            inv = 1 / piv
            prow = [v * inv for v in prow]
            rows[p] = prow
            rhs[p] = rhs[p] * inv
        nz = [j for j, v in enumerate(prow) if v]
        for k in range(len(rows)):
            if k == p:
                continue
            f = rows[k][e]
            if f:
                row = rows[k]
                for j in nz:
                    row[j] -= f * prow[j]
                rhs[k] -= f * rhs[p]
        self.basis[p] = e

    def reduced_costs(self, cost: list[mpq]) -> tuple[list[mpq], mpq]:
        r = list(cost)
        value = _ZERO
        for k, bk in enumerate(self.basis):
            cb = cost[bk]
            if cb:
                row = self.rows[k]
                for j in range(self.width):
                    if row[j]:
                        r[j] -= cb * row[j]
                value += cb * self.rhs[k]
        return r, value

    def run(self, cost: list[mpq], allowed: int) -> tuple[str, Optional[int], list[mpq]]:
        """Minimize ``cost`` with entering columns restricted to ``range(allowed)``.

        Returns (status, entering column on unboundedness, reduced costs).
        """
        while True:
            r, _ = self.reduced_costs(cost)
            e = next((j for j in range(allowed) if r[j] < 0), None)
            if e is None:
                return OPTIMAL, None, r
            best = None
            for k, row in enumerate(self.rows):
                a = row[e]
                if a > 0:
                    ratio = self.rhs[k] / a
                    if best is None or ratio < best[0] or (
                        ratio == best[0] and self.basis[k] < self.basis[best[1]]
                    ):
                        best = (ratio, k)
            if best is None:
                return UNBOUNDED, e, r
            self.pivot(best[1], e)

    def drive_out_artificials(self) -> None:
        m = self.m
        for k in range(self.n):
            if self.basis[k] >= m:
                row = self.rows[k]
                j = next((j for j in range(m) if row[j]), None)
                if j is not None:
                    self.pivot(k, j)


def _solve(A: list[list[mpq]], b: list[mpq], c: list[mpq], n: int):
    """Returns (kind, payload) with kind in {"opt", "dual_infeasible", "primal_infeasible"}."""
    m = len(A)
    T = _DualTableau(A, c, n)
    phase1 = [_ZERO] * m + [_ONE] * n
    _, _, r1 = T.run(phase1, m + n)
    _, infeas = T.reduced_costs(phase1)
    if infeas > 0:
        # multipliers w_k = 1 - r[m+k]; d = sign * w gives A d <= 0, c.d > 0
        ray = [T.sign[k] * (_ONE - r1[m + k]) for k in range(n)]
        return "dual_infeasible", ray
    T.drive_out_artificials()
    phase2 = list(b) + [_ZERO] * n
    status, e, r2 = T.run(phase2, m)
    if status == UNBOUNDED:
        y = [_ZERO] * m
        y[e] = _ONE
        for k, bk in enumerate(T.basis):
            if bk < m:
                y[bk] = -T.rows[k][e]
        return "primal_infeasible", y
    x = [T.sign[k] * (-r2[m + k]) for k in range(n)]
    return "opt", x


def maximize(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """Exactly maximize ``c.x`` subject to ``A x <= b`` with ``x`` free."""
    n = len(c)
    Aq = [[_q(v) for v in row] for row in A]
    if any(len(row) != n for row in Aq):
        raise ValueError("row length does not match objective length")
    bq = [_q(v) for v in b]
    cq = [_q(v) for v in c]
    if n == 0:
        bad = next((j for j, bj in enumerate(bq) if bj < 0), None)
        if bad is not None:
            cert = [Fraction(0)] * len(bq)
            cert[bad] = Fraction(1)
            return LPResult(INFEASIBLE, certificate=tuple(cert))
        return LPResult(OPTIMAL, value=Fraction(0), x=())

    kind, payload = _solve(Aq, bq, cq, n)
    if kind == "opt":
        x = tuple(_f(v) for v in payload)
        value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
        return LPResult(OPTIMAL, value=value, x=x)
    if kind == "primal_infeasible":
        return LPResult(INFEASIBLE, certificate=tuple(_f(v) for v in payload))
    ray = tuple(_f(v) for v in payload)
    kind0, payload0 = _solve(Aq, bq, [_ZERO] * n, n)
    if kind0 == "primal_infeasible":
        return LPResult(INFEASIBLE, certificate=tuple(_f(v) for v in payload0))
    x0 = tuple(_f(v) for v in payload0)
    return LPResult(UNBOUNDED, x=x0, ray=ray)


def feasible_point(A: Sequence[Sequence], b: Sequence, n: int) -> LPResult:
    """Feasibility check; OPTIMAL carries a point, INFEASIBLE a Farkas vector."""
    return maximize(A, b, [0] * n)
