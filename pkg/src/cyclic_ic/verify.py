"""Exact polyhedral checks of the closed-form regions."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .achievable import HkParams, achievable_constraints, pre_elimination_system
from .channel import ChannelRatios, Regime, classify_regime
from .constraints import box
from .outer import _strong_params, mac_intersection, strong_capacity
from .polytope import (
    EliminationTimeout,
    Inequality,
    InequalitySystem,
    Witness,
    fourier_motzkin_eliminate,
    remove_redundant,
    set_equal,
)

EQUAL = "EQUAL"
NOT_EQUAL = "NOT-EQUAL"
TIMEOUT = "TIMEOUT"

CORRUPTION = Fraction(1, 256)


@dataclass(frozen=True)
class FmVerdict:
    verdict: str
    K: int
    projected: InequalitySystem
    closed_form: InequalitySystem
    seconds: float
    witness: Optional[Witness] = None
    eliminated: tuple[str, ...] = ()

    @property
    def equal(self) -> bool:
        return self.verdict == EQUAL

    def to_dict(self) -> dict:
        w = self.witness
        return {
            "verdict": self.verdict,
            "K": self.K,
            "seconds": round(self.seconds, 3),
            "projected_rows": len(self.projected),
            "closed_form_rows": len(self.closed_form),
            "eliminated": list(self.eliminated),
            "witness": None if w is None else {
                "point": [str(v) for v in w.point] if w.point is not None else None,
                "point_float": [float(v) for v in w.point] if w.point is not None else None,
                "violated_row": w.violated_row,
                "note": w.note,
            },
        }


def fm_check(p: HkParams, corrupt: bool = False, timeout: Optional[float] = None) -> FmVerdict:
    """Project the rate-split system onto the rates and compare with the closed form.

    ``corrupt`` tightens every closed-form row by ``1/256`` bit, which must
    make the comparison fail (negative control).
    """
    K = p.K
    t0 = time.monotonic()
    closed = achievable_constraints(p, K).to_system()
    if corrupt:
        closed = closed.with_rows(
            Inequality(r.coeffs, r.rhs - CORRUPTION) if r.rhs > 0 else r for r in closed.rows)
    sys = pre_elimination_system(p, K)
    elim = [v for v in sys.variables if not v.startswith("R")]
    deadline = t0 + timeout if timeout is not None else None
    try:
        projected = fourier_motzkin_eliminate(sys, elim, deadline=deadline)
    except EliminationTimeout as exc:
        return FmVerdict(TIMEOUT, K, exc.partial, closed, time.monotonic() - t0,
                         eliminated=exc.eliminated)
    projected = projected.reorder(closed.variables)
    ok, w = set_equal(projected, closed)
    return FmVerdict(EQUAL if ok else NOT_EQUAL, K, projected, closed,
                     time.monotonic() - t0, w, tuple(elim))


@dataclass(frozen=True)
class StrongCheck:
    regime: Regime
    mac_equals_strong: bool
    box_equals_strong: Optional[bool]
    reduced_rows: int
    witness: Optional[Witness] = None


def strong_reduction_check(r: ChannelRatios) -> StrongCheck:
    """Redundancy-reduced MAC intersection vs the strong-regime capacity region.

    For very strong channels also compares the pairwise region against the
    plain box of single-user capacities.
    """
    regime = classify_regime(r)
    strong = strong_capacity(r, reduce_very_strong=False).to_system()
    reduced = remove_redundant(mac_intersection(r).to_system())
    ok, w = set_equal(reduced, strong)
    box_ok = None
    if regime == Regime.VERY_STRONG:
        lam = _strong_params(r)["lambda"]
        box_ok, w2 = set_equal(box(r.K, lam).to_system(), strong)
        w = w or w2
    return StrongCheck(regime, ok, box_ok, len(reduced), w)
