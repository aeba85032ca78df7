"""Per-constraint gaps between the achievable region and the outer bound."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import mpmath
import numpy as np

from .achievable import (
    _hk_values,
    achievable_constraints,
    all_private_split,
    etw_split,
    hk_parameters,
)
from .channel import ChannelRatios, Regime, classify_regime
from .constraints import FAMILIES, ConstraintSet, Kind
from .outer import _outer_values, outer_constraints, outer_parameters
from .polytope import contains

GAP_TOL = 1e-9
SPLITS = {"etw": etw_split, "none": all_private_split}


class KindMismatch(ValueError):
    pass


class EmptySweep(ValueError):
    pass


def gap_bound(kind: Kind, K: int) -> float:
    return 2.0 * kind.rate_terms(K)


@dataclass(frozen=True)
class GapPair:
    kind: Kind
    achievable_rhs: float
    outer_rhs: float
    delta: float
    bound: float
    terms: int
    passed: bool
    near_bound: bool = False

    @property
    def normalized(self) -> float:
        return self.delta / self.terms


@dataclass(frozen=True)
class GapReport:
    K: int
    pairs: tuple[GapPair, ...]
    regime: Optional[str] = None
    seed: Optional[int] = None

    @property
    def asserted(self) -> bool:
        """Bounds are only claimed in the weak regime."""
        return self.regime == Regime.WEAK.value

    @property
    def all_pass(self) -> bool:
        return all(p.passed for p in self.pairs)

    @property
    def max_normalized_gap(self) -> float:
        return max(p.normalized for p in self.pairs)

    @property
    def min_delta(self) -> float:
        return min(p.delta for p in self.pairs)

    def violations(self) -> list[GapPair]:
        return [p for p in self.pairs if not p.passed]

    def family_max(self) -> dict[str, GapPair]:
        out: dict[str, GapPair] = {}
        for p in self.pairs:
            cur = out.get(p.kind.family)
            if cur is None or p.normalized > cur.normalized:
                out[p.kind.family] = p
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "achievable_rhs", "outer_rhs", "delta", "bound", "normalized",
                     "pass", "near_bound"])
        for p in self.pairs:
            w.writerow([str(p.kind), repr(p.achievable_rhs), repr(p.outer_rhs), repr(p.delta),
                        repr(p.bound), repr(p.normalized), int(p.passed), int(p.near_bound)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "K": self.K,
            "regime": self.regime,
            "seed": self.seed,
            "asserted": self.asserted,
            "all_pass": self.all_pass,
            "max_normalized_gap": self.max_normalized_gap,
            "min_delta": self.min_delta,
            "violations": [str(p.kind) for p in self.violations()],
        }


def gap_report(ach: ConstraintSet, out: ConstraintSet, regime: Optional[Regime | str] = None,
               seed: Optional[int] = None, tol: float = GAP_TOL) -> GapReport:
    """Pair rows by kind and compare right-hand sides.

    A pair passes when ``outer - achievable <= bound - tol``; deltas within
    ``tol`` of the bound are flagged for high-precision rechecking.
    """
    if ach.K != out.K:
        raise KindMismatch(f"K differs: {ach.K} vs {out.K}")
    a_kinds, o_kinds = ach.by_kind(), out.by_kind()
    if set(a_kinds) != set(o_kinds):
        missing = sorted(map(str, set(a_kinds) ^ set(o_kinds)))
        raise KindMismatch(f"constraint kinds do not pair up: {missing}")
    K = ach.K
    pairs = []
    for c in ach.constraints:
        o = o_kinds[c.kind]
        if o.coeffs != c.coeffs:
            raise KindMismatch(f"{c.kind}: coefficient vectors differ")
        delta = o.rhs - c.rhs
        bound = gap_bound(c.kind, K)
        pairs.append(GapPair(c.kind, c.rhs, o.rhs, delta, bound, c.kind.rate_terms(K),
                             delta <= bound - tol, abs(delta - bound) <= tol))
    if isinstance(regime, Regime):
        regime = regime.value
    return GapReport(K, tuple(pairs), regime, seed)


def channel_gap_report(r: ChannelRatios, split: str = "etw", seed: Optional[int] = None,
                       tol: float = GAP_TOL) -> GapReport:
    regime = classify_regime(r)
    ach = achievable_constraints(hk_parameters(r, SPLITS[split](r)), r.K)
    out = outer_constraints(outer_parameters(r), r.K, regime)
    rep = gap_report(ach, out, regime, seed, tol)
    if any(p.near_bound for p in rep.pairs):
        rep = _recheck(r, split, rep)
    return rep


def _recheck(r: ChannelRatios, split: str, rep: GapReport, dps: int = 60) -> GapReport:
    """Recompute flagged pairs with ``dps`` decimal digits and decide strictly."""
    s = SPLITS[split](r)
    with mpmath.workdps(dps):
        mp = lambda v: [mpmath.mpf(x) for x in v]
        a, d, e, g = _hk_values(mp(r.snr), mp(r.inr), mp(s.snr_p), mp(s.inr_p), mpmath.log2)
        alpha, beta, gamma, lam, mu = _outer_values(mp(r.snr), mp(r.inr), mpmath.log2)
        hp_ach = {"a": a, "d": d, "e": e, "g": g}
        hp_out = {"alpha": alpha, "beta": beta, "gamma": gamma, "lambda": lam, "mu": mu}
        ach = achievable_constraints(hk_parameters(r, s), r.K).by_kind()
        out = outer_constraints(outer_parameters(r), r.K).by_kind()
        val = lambda c, P: min(sum((P[sym][i] for sym, i in ex), mpmath.mpf(0))
                               for ex in c.candidates)
        pairs = []
        for p in rep.pairs:
            if p.near_bound:
                hd = val(out[p.kind], hp_out) - val(ach[p.kind], hp_ach)
                p = GapPair(p.kind, p.achievable_rhs, p.outer_rhs, p.delta, p.bound, p.terms,
                            bool(hd < p.bound), True)
            pairs.append(p)
    return GapReport(rep.K, tuple(pairs), rep.regime, rep.seed)


# -- randomized sweeps ---------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    """Seeded channel sampling.

    SNR is uniform in dB over ``snr_db``. For ``regime="weak"`` INR is uniform
    in dB over ``[inr_db[0], min(SNR, inr_db[1])]``; for ``"strong"`` it is
    ``SNR + U[0, inr_db[1] - inr_db[0]]`` dB; otherwise independent over
    ``inr_db`` and filtered by regime (``"any"`` keeps everything).
    """

    k_values: tuple[int, ...] = (2, 3, 4, 5, 6)
    samples: int = 1000
    snr_db: tuple[float, float] = (0.0, 40.0)
    inr_db: tuple[float, float] = (0.0, 40.0)
    regime: str = "weak"
    seed: int = 0
    containment: bool = False
    containment_max_k: int = 6
    split: str = "etw"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "snr_db", tuple(float(v) for v in self.snr_db))
        object.__setattr__(self, "inr_db", tuple(float(v) for v in self.inr_db))
        if not self.k_values or min(self.k_values) < 2:
            raise ValueError("k_values must be non-empty with every K >= 2")
        if self.samples < 0:
            raise ValueError("samples must be >= 0")
        if self.regime not in ("weak", "strong", "mixed", "any"):
            raise ValueError(f"unknown regime filter {self.regime!r}")
        if self.split not in SPLITS:
            raise ValueError(f"unknown split {self.split!r}")
        for name in ("snr_db", "inr_db"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} range is empty: {lo} > {hi}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown sweep config keys {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


def sample_channel(cfg: SweepConfig, index: int) -> ChannelRatios:
    """Channel number ``index`` of the sweep; independent of all other samples."""
    rng = np.random.default_rng([cfg.seed, index])
    K = int(cfg.k_values[rng.integers(len(cfg.k_values))])
    snr_db = rng.uniform(cfg.snr_db[0], cfg.snr_db[1], K)
    lo, hi = cfg.inr_db
    if cfg.regime == "weak":
        top = np.minimum(snr_db, hi)
        bottom = np.minimum(lo, top)
        inr_db = bottom + rng.uniform(0.0, 1.0, K) * (top - bottom)
    elif cfg.regime == "strong":
        inr_db = snr_db + rng.uniform(0.0, hi - lo, K)
    else:
        inr_db = rng.uniform(lo, hi, K)
    snr = 10.0 ** (snr_db / 10.0)
    inr = 10.0 ** (inr_db / 10.0)
    # dB rounding can nudge INR a hair past SNR at the weak boundary
    if cfg.regime == "weak":
        inr = np.minimum(inr, snr)
    elif cfg.regime == "strong":
        inr = np.maximum(inr, snr)
    return ChannelRatios(K, tuple(float(x) for x in snr), tuple(float(x) for x in inr))


@dataclass(frozen=True)
class SampleResult:
    index: int
    K: int
    regime: str
    snr: tuple[float, ...]
    inr: tuple[float, ...]
    family_max_delta: dict = field(default_factory=dict)
    family_max_normalized: dict = field(default_factory=dict)
    max_normalized: float = 0.0
    min_delta: float = 0.0
    violations: tuple[str, ...] = ()
    contained: Optional[bool] = None
    witness: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.regime == "weak" and (bool(self.violations) or self.contained is False)

    def channel(self) -> dict:
        return {"K": self.K, "snr": list(self.snr), "inr": list(self.inr)}


def evaluate_sample(cfg: SweepConfig, index: int) -> Optional[SampleResult]:
    r = sample_channel(cfg, index)
    regime = classify_regime(r)
    if cfg.regime == "mixed" and regime != Regime.MIXED:
        return None
    if cfg.regime == "weak" and regime != Regime.WEAK:
        return None
    if cfg.regime == "strong" and not regime.is_strong:
        return None
    rep = channel_gap_report(r, cfg.split, cfg.seed)
    fam = rep.family_max()
    contained = witness = None
    if cfg.containment and regime == Regime.WEAK and r.K <= cfg.containment_max_k:
        ach = achievable_constraints(hk_parameters(r, SPLITS[cfg.split](r)), r.K)
        out = outer_constraints(outer_parameters(r), r.K, regime)
        contained, w = contains(out.to_system(), ach.to_system())
        if w is not None:
            witness = f"row {w.violated_row}: point {[str(v) for v in w.point]}"
    return SampleResult(
        index, r.K, regime.value, r.snr, r.inr,
        {f: max(p.delta for p in rep.pairs if p.kind.family == f) for f in fam},
        {f: p.normalized for f, p in fam.items()},
        rep.max_normalized_gap, rep.min_delta,
        tuple(str(p.kind) for p in rep.violations()) if rep.asserted else (),
        contained, witness)


def _evaluate_chunk(args):
    cfg, indices = args
    return [evaluate_sample(cfg, i) for i in indices]


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    results: tuple[SampleResult, ...]

    @property
    def failures(self) -> list[SampleResult]:
        return [s for s in self.results if s.failed]

    def summary(self) -> dict:
        res = self.results
        fam_max = {}
        for f in FAMILIES:
            vals = [s.family_max_normalized[f] for s in res if f in s.family_max_normalized]
            fam_max[f] = max(vals) if vals else None
        weak = [s for s in res if s.regime == "weak"]
        checked = [s for s in res if s.contained is not None]
        return {
            "config": self.config.to_dict(),
            "samples": len(res),
            "regimes": {reg.value: sum(1 for s in res if s.regime == reg.value) for reg in Regime},
            "max_normalized_gap": max((s.max_normalized for s in res), default=None),
            "max_normalized_gap_by_family": fam_max,
            "min_delta_weak": min((s.min_delta for s in weak), default=None),
            "negative_delta_weak": sum(1 for s in weak if s.min_delta < 0),
            "gap_violations": sum(1 for s in weak if s.violations),
            "containment_checked": len(checked),
            "containment_failures": sum(1 for s in checked if not s.contained),
            "failed_samples": [s.index for s in self.failures],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sample", "K", "regime", "family", "max_delta", "max_normalized",
                    "pass", "contained", "snr", "inr"])
        for s in self.results:
            for f in FAMILIES:
                if f not in s.family_max_delta:
                    continue
                passed = not any(v.split(":")[0] == f for v in s.violations)
                w.writerow([s.index, s.K, s.regime, f, repr(s.family_max_delta[f]),
                            repr(s.family_max_normalized[f]), int(passed),
                            "" if s.contained is None else int(s.contained),
                            " ".join(repr(x) for x in s.snr), " ".join(repr(x) for x in s.inr)])
        return buf.getvalue()

    def replay(self) -> list[dict]:
        """Channel specs for every failing sample, loadable by the CLI."""
        return [dict(s.channel(), sample=s.index, violations=list(s.violations),
                     contained=s.contained, witness=s.witness) for s in self.failures]

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2) + "\n"


def sweep(cfg: SweepConfig) -> SweepReport:
    """Evaluate ``cfg.samples`` seeded channels, dropping those outside the regime filter."""
    indices = list(range(cfg.samples))
    if cfg.workers > 1 and len(indices) > 1:
        chunks = [indices[k::cfg.workers] for k in range(cfg.workers)]
        with ProcessPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(_evaluate_chunk, [(cfg, c) for c in chunks]))
        flat = sorted((r for part in parts for r in part if r is not None), key=lambda s: s.index)
    else:
        flat = [r for r in (evaluate_sample(cfg, i) for i in indices) if r is not None]
    if not flat:
        raise EmptySweep(f"no samples left after filtering for regime {cfg.regime!r} "
                         f"({cfg.samples} drawn)")
    return SweepReport(cfg, tuple(flat))
