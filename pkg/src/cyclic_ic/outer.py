"""Genie-aided outer bound (weak regime) and strong-regime capacity regions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .achievable import _others
from .channel import ChannelRatios, Regime, classify_regime
from .constraints import ConstraintSet, Kind, make_constraint


class NotStrongRegime(ValueError):
    def __init__(self, message: str, regime: Regime, index: int | None):
        super().__init__(message)
        self.regime = regime
        self.index = index


@dataclass(frozen=True)
class OuterParams:
    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    gamma: tuple[float, ...]
    lam: tuple[float, ...]
    mu: tuple[float, ...]

    @property
    def K(self) -> int:
        return len(self.alpha)

    @property
    def rho(self) -> tuple[float, ...]:
        K = self.K
        return tuple(self.beta[i - 1] + self.gamma[i] + sum(self.alpha[j] for j in _others(K, (i, i - 1)))
                     for i in range(K))

    def as_params(self) -> dict[str, tuple[float, ...]]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
                "lambda": self.lam, "mu": self.mu}


def _outer_values(snr, inr, log2: Callable = math.log2):
    K = len(snr)
    alpha, beta, gamma, lam, mu = [], [], [], [], []
    for i in range(K):
        nxt = inr[(i + 1) % K]
        alpha.append(log2(1 + nxt + snr[i] / (1 + inr[i])))
        beta.append(log2((1 + snr[i]) / (1 + inr[i])))
        gamma.append(log2(1 + nxt + snr[i]))
        lam.append(log2(1 + snr[i]))
        mu.append(log2(1 + inr[i]))
    return alpha, beta, gamma, lam, mu


def outer_parameters(r: ChannelRatios) -> OuterParams:
    return OuterParams(*(tuple(v) for v in _outer_values(r.snr, r.inr)))


def _diagnostics(p: OuterParams) -> tuple[str, ...]:
    return tuple(f"beta_{i + 1} = {b:.6g} < 0 (INR_{i + 1} exceeds SNR_{i + 1}); row kept as computed"
                 for i, b in enumerate(p.beta) if b < 0)


def outer_constraints(p: OuterParams, K: int | None = None,
                      regime: Regime | None = None) -> ConstraintSet:
    """The outer bound, row-for-row pairable with ``achievable_constraints``.

    The bound is only established for the weak regime; for other regimes the
    set is still produced but tagged as unasserted.
    """
    K = p.K if K is None else K
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    params = p.as_params()
    cons = []
    for i in range(K):
        cons.append(make_constraint(Kind.individual(i), K, [(("lambda", i),)], params))
    for m in range(K):
        for l in range(2, K):
            last = ("beta", (m + l - 1) % K)
            first = ((("gamma", m),) + tuple(("alpha", j % K) for j in range(m + 1, m + l - 1))
                     + (last,))
            second = ((("mu", m),) + tuple(("alpha", j % K) for j in range(m, m + l - 1))
                      + (last,))
            cons.append(make_constraint(Kind.adjacent(m, l), K, [first, second], params))
    sum_alpha = tuple(("alpha", j) for j in range(K))
    rho = [(("beta", (k - 1) % K), ("gamma", k)) + tuple(("alpha", j) for j in _others(K, (k, k - 1)))
           for k in range(K)]
    cons.append(make_constraint(Kind.total(), K, [sum_alpha] + rho, params))
    for i in range(K):
        expr = (("beta", i), ("gamma", i)) + tuple(("alpha", j) for j in _others(K, (i,)))
        cons.append(make_constraint(Kind.total_plus(i), K, [expr], params))
    notes = _diagnostics(p)
    if regime is not None and regime != Regime.WEAK:
        notes = (f"regime: {regime.value} - bound unasserted",) + notes
    return ConstraintSet(K, tuple(cons), params, "outer",
                         regime.value if regime is not None else None, notes)


def outer_region(r: ChannelRatios) -> ConstraintSet:
    return outer_constraints(outer_parameters(r), r.K, classify_regime(r))


def _strong_params(r: ChannelRatios) -> dict[str, tuple[float, ...]]:
    _, _, gamma, lam, mu = _outer_values(r.snr, r.inr)
    return {"lambda": tuple(lam), "gamma": tuple(gamma), "mu": tuple(mu)}


def very_strong_pairs_implied(r: ChannelRatios) -> list[bool]:
    """Per ``i``: is ``R_i + R_{i+1} <= gamma_i`` implied by the two box rows?

    Decided exactly on the ratios: ``(1+SNR_i)(1+SNR_{i+1}) <= 1+SNR_i+INR_{i+1}``.
    """
    K = r.K
    out = []
    for i in range(K):
        s0, s1 = Fraction(r.snr[i]), Fraction(r.snr[(i + 1) % K])
        n1 = Fraction(r.inr[(i + 1) % K])
        out.append((1 + s0) * (1 + s1) <= 1 + s0 + n1)
    return out


def strong_capacity(r: ChannelRatios, reduce_very_strong: bool = True) -> ConstraintSet:
    """Capacity region in the strong regime; a box in the very strong regime.

    With ``reduce_very_strong=False`` the pairwise rows are kept even when
    they are implied.
    """
    regime = classify_regime(r)
    if not regime.is_strong:
        bad = next(i for i in range(r.K) if r.inr[i] < r.snr[i])
        raise NotStrongRegime(
            f"channel is in the {regime.value} regime: INR_{bad + 1} = {r.inr[bad]} "
            f"< SNR_{bad + 1} = {r.snr[bad]}", regime, bad)
    K = r.K
    params = _strong_params(r)
    cons = [make_constraint(Kind.individual(i), K, [(("lambda", i),)], params) for i in range(K)]
    if regime == Regime.VERY_STRONG and reduce_very_strong:
        implied = very_strong_pairs_implied(r)
        if not all(implied):
            raise AssertionError(f"very strong channel with non-implied pair rows: {implied}")
        return ConstraintSet(K, tuple(cons), params, "strong", regime.value,
                             ("very strong regime: pairwise rows implied, region is a box",))
    for i in range(K):
        cons.append(make_constraint(Kind.adjacent(i, 2), K, [(("gamma", i),)], params))
    return ConstraintSet(K, tuple(cons), params, "strong", regime.value)


def mac_intersection(r: ChannelRatios) -> ConstraintSet:
    """Intersection of the ``K`` MAC regions seen by each receiver.

    Receiver ``i`` decodes both users ``i`` and ``i+1``; the row
    ``R_{i+1} <= log2(1 + INR_{i+1})`` is tagged ``individual`` for user
    ``i+1`` and written with the ``mu`` symbol.
    """
    K = r.K
    params = _strong_params(r)
    cons = []
    notes = []
    for i in range(K):
        j = (i + 1) % K
        cons.append(make_constraint(Kind.individual(i), K, [(("lambda", i),)], params))
        cons.append(make_constraint(Kind.individual(j), K, [(("mu", j),)], params))
        cons.append(make_constraint(Kind.adjacent(i, 2), K, [(("gamma", i),)], params))
        if r.inr[j] == 0:
            notes.append(f"INR_{j + 1} = 0: receiver {i + 1} forces R_{j + 1} <= 0")
    return ConstraintSet(K, tuple(cons), params, "mac", classify_regime(r).value, tuple(notes))
