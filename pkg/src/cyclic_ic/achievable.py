"""Han-Kobayashi achievable region for the cyclic channel.

Each user splits its signal into a common part (decoded at its own receiver
and at the receiver it interferes with) and a private part (treated as noise
there). With Gaussian inputs and a fixed split the rate parameters are
closed-form, and the region is a polytope with ``K**2 + 1`` constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .channel import ChannelError, ChannelRatios
from .constraints import ConstraintSet, Kind, make_constraint
from .polytope.system import DYADIC_BITS, Inequality, InequalitySystem, dyadic

SPLIT_REL_TOL = 1e-9


@dataclass(frozen=True)
class PowerSplit:
    """Private-part ratios: ``inr_p[i]`` at receiver ``i-1``, ``snr_p[i]`` at receiver ``i``."""

    inr_p: tuple[float, ...]
    snr_p: tuple[float, ...]

    def check(self, r: ChannelRatios) -> None:
        if len(self.inr_p) != r.K or len(self.snr_p) != r.K:
            raise ChannelError("power split length does not match K")
        for i in range(r.K):
            ip, sp = self.inr_p[i], self.snr_p[i]
            if not (0 <= ip <= r.inr[i] * (1 + SPLIT_REL_TOL)):
                raise ChannelError(f"user {i + 1}: private INR {ip} outside [0, {r.inr[i]}]")
            if not (0 <= sp <= r.snr[i] * (1 + SPLIT_REL_TOL)):
                raise ChannelError(f"user {i + 1}: private SNR {sp} outside [0, {r.snr[i]}]")
            lhs, rhs = sp * r.inr[i], r.snr[i] * ip
            if r.inr[i] > 0 and abs(lhs - rhs) > SPLIT_REL_TOL * max(abs(lhs), abs(rhs), 1e-300):
                raise ChannelError(
                    f"user {i + 1}: private SNR and INR imply different power fractions")


def split_from_fraction(r: ChannelRatios, fractions: tuple[float, ...]) -> PowerSplit:
    """Split where user ``i`` keeps ``fractions[i]`` of its power private."""
    return PowerSplit(tuple(f * x for f, x in zip(fractions, r.inr)),
                      tuple(f * x for f, x in zip(fractions, r.snr)))


def etw_split(r: ChannelRatios) -> PowerSplit:
    """Private part received at the interfered receiver at the noise level.

    ``INR_ip = min(INR_i, 1)``; users whose interference is already at or
    below the noise floor send everything privately.
    """
    inr_p, snr_p = [], []
    for snr, inr in zip(r.snr, r.inr):
        if inr > 1:
            inr_p.append(1.0)
            snr_p.append(snr / inr)
        else:
            inr_p.append(inr)
            snr_p.append(snr)
    return PowerSplit(tuple(inr_p), tuple(snr_p))


def all_private_split(r: ChannelRatios) -> PowerSplit:
    return PowerSplit(r.inr, r.snr)


@dataclass(frozen=True)
class HkParams:
    a: tuple[float, ...]
    d: tuple[float, ...]
    e: tuple[float, ...]
    g: tuple[float, ...]

    @property
    def K(self) -> int:
        return len(self.a)

    @property
    def r(self) -> tuple[float, ...]:
        K = self.K
        return tuple(
            self.a[i - 1] + self.g[i] + sum(self.e[j] for j in range(K) if j not in (i, (i - 1) % K))
            for i in range(K))

    def as_params(self) -> dict[str, tuple[float, ...]]:
        return {"a": self.a, "d": self.d, "e": self.e, "g": self.g}

    def check(self, tol: float = 1e-12) -> None:
        for i in range(self.K):
            a, d, e, g = self.a[i], self.d[i], self.e[i], self.g[i]
            if not all(math.isfinite(v) and v >= -tol for v in (a, d, e, g)):
                raise ValueError(f"user {i + 1}: parameters must be finite and >= 0")
            if not (a <= d + tol and d <= g + tol and a <= e + tol and e <= g + tol):
                raise ValueError(f"user {i + 1}: expected a <= d <= g and a <= e <= g, "
                                 f"got a={a}, d={d}, e={e}, g={g}")


def _hk_values(snr, inr, snr_p, inr_p, log2: Callable = math.log2):
    K = len(snr)
    a, d, e, g = [], [], [], []
    for i in range(K):
        j = (i + 1) % K
        noise = 1 + inr_p[j]
        a.append(log2(1 + snr_p[i] / noise))
        d.append(log2(1 + snr[i] / noise))
        e.append(log2((1 + inr[j] + snr_p[i]) / noise))
        g.append(log2((1 + inr[j] + snr[i]) / noise))
    return a, d, e, g


def hk_parameters(r: ChannelRatios, s: PowerSplit) -> HkParams:
    """Gaussian-input HK parameters; the interferer's private part is noise.

    At receiver ``i`` the own signal has SNR ``snr[i]`` (private part
    ``snr_p[i]``) and the interferer ``i+1`` arrives with INR ``inr[i+1]``
    (private part ``inr_p[i+1]``).
    """
    s.check(r)
    a, d, e, g = _hk_values(r.snr, r.inr, s.snr_p, s.inr_p)
    return HkParams(tuple(a), tuple(d), tuple(e), tuple(g))


def etw_closed_form(r: ChannelRatios) -> HkParams:
    """ETW-split parameters in the ``log2(...) - 1`` form.

    Only valid when every ``INR_i >= 1`` (the interferer's private part then
    sits exactly at the noise floor).
    """
    if any(x < 1 for x in r.inr):
        raise ValueError("closed form needs INR_i >= 1 for every user")
    s = etw_split(r)
    K = r.K
    a = tuple(math.log2(2 + s.snr_p[i]) - 1 for i in range(K))
    d = tuple(math.log2(2 + r.snr[i]) - 1 for i in range(K))
    e = tuple(math.log2(1 + r.inr[(i + 1) % K] + s.snr_p[i]) - 1 for i in range(K))
    g = tuple(math.log2(1 + r.inr[(i + 1) % K] + r.snr[i]) - 1 for i in range(K))
    return HkParams(a, d, e, g)


def _others(K: int, skip: tuple[int, ...]) -> list[int]:
    skip = {s % K for s in skip}
    return [j for j in range(K) if j not in skip]


def achievable_constraints(p: HkParams, K: int | None = None) -> ConstraintSet:
    """The HK region for one Gaussian input distribution (no time sharing)."""
    K = p.K if K is None else K
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    if p.K != K:
        raise ValueError(f"parameters are for K={p.K}, not K={K}")
    params = p.as_params()
    cons = []
    for i in range(K):
        cons.append(make_constraint(Kind.individual(i), K,
                                    [(("d", i),), (("a", i), ("e", (i - 1) % K))], params))
    for m in range(K):
        for l in range(2, K):
            last = ("a", (m + l - 1) % K)
            first = (("g", m),) + tuple(("e", j % K) for j in range(m + 1, m + l - 1)) + (last,)
            second = tuple(("e", j % K) for j in range(m - 1, m + l - 1)) + (last,)
            cons.append(make_constraint(Kind.adjacent(m, l), K, [first, second], params))
    sum_e = tuple(("e", j) for j in range(K))
    r_exprs = [(("a", (k - 1) % K), ("g", k)) + tuple(("e", j) for j in _others(K, (k, k - 1)))
               for k in range(K)]
    cons.append(make_constraint(Kind.total(), K, [sum_e] + r_exprs, params))
    for i in range(K):
        expr = (("a", i), ("g", i)) + tuple(("e", j) for j in _others(K, (i,)))
        cons.append(make_constraint(Kind.total_plus(i), K, [expr], params))
    return ConstraintSet(K, tuple(cons), params, "achievable")


def achievable_region(r: ChannelRatios, split: str = "etw") -> ConstraintSet:
    s = {"etw": etw_split, "none": all_private_split}[split](r)
    return achievable_constraints(hk_parameters(r, s), r.K)


def split_variables(K: int) -> tuple[str, ...]:
    return (tuple(f"S{i + 1}" for i in range(K)) + tuple(f"T{i + 1}" for i in range(K))
            + tuple(f"R{i + 1}" for i in range(K)))


def pre_elimination_system(p: HkParams, K: int | None = None,
                           bits: int = DYADIC_BITS) -> InequalitySystem:
    """Rate-split system over private rates ``S``, common rates ``T`` and ``R = S + T``.

    Receiver ``i`` decodes its private message, its own common message and
    the common message of user ``i+1``::

        S_i <= a_i,  S_i + T_i <= d_i,  S_i + T_{i+1} <= e_i,  S_i + T_i + T_{i+1} <= g_i

    Parameters enter as dyadic rationals with ``bits`` fractional bits.
    """
    K = p.K if K is None else K
    names = split_variables(K)
    n = len(names)
    S = lambda i: i % K
    T = lambda i: K + i % K
    R = lambda i: 2 * K + i % K
    rows = []

    def row(terms: dict[int, int], rhs: Fraction):
        c = [Fraction(0)] * n
        for k, v in terms.items():
            c[k] += v
        rows.append(Inequality(tuple(c), rhs))

    zero = Fraction(0)
    for i in range(K):
        row({S(i): -1}, zero)
        row({T(i): -1}, zero)
        row({R(i): 1, S(i): -1, T(i): -1}, zero)
        row({R(i): -1, S(i): 1, T(i): 1}, zero)
    for i in range(K):
        a, d, e, g = (dyadic(v[i], bits) for v in (p.a, p.d, p.e, p.g))
        row({S(i): 1}, a)
        row({S(i): 1, T(i): 1}, d)
        row({S(i): 1, T(i + 1): 1}, e)
        row({S(i): 1, T(i): 1, T(i + 1): 1}, g)
    return InequalitySystem(names, tuple(rows))
