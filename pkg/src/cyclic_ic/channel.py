"""K-user cyclic Gaussian interference channel instances and regimes.

Transmitter ``i`` reaches receiver ``i`` directly and interferes only at
receiver ``i-1``. User indices are 0-based here and wrap modulo ``K``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence


class ChannelError(ValueError):
    """Invalid channel description."""


class Regime(str, enum.Enum):
    WEAK = "weak"
    STRONG = "strong"
    VERY_STRONG = "very_strong"
    MIXED = "mixed"

    @property
    def is_strong(self) -> bool:
        return self in (Regime.STRONG, Regime.VERY_STRONG)


def _vector(name: str, values: Sequence[float], K: int) -> tuple[float, ...]:
    vals = tuple(float(v) for v in values)
    if len(vals) != K:
        raise ChannelError(f"{name} has {len(vals)} entries, expected K={K}")
    for i, v in enumerate(vals):
        if not math.isfinite(v) or v < 0:
            raise ChannelError(f"{name}[{i + 1}] = {v!r} must be finite and >= 0")
    return vals


@dataclass(frozen=True)
class ChannelInstance:
    """Physical description: ``direct[i] = |h_{i,i}|^2``, ``cross[i] = |h_{i,i-1}|^2``."""

    K: int
    direct: tuple[float, ...]
    cross: tuple[float, ...]
    powers: tuple[float, ...]
    noise: float = 1.0

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 2:
            raise ChannelError(f"K must be an integer >= 2, got {self.K!r}")
        object.__setattr__(self, "direct", _vector("direct gain", self.direct, self.K))
        object.__setattr__(self, "cross", _vector("cross gain", self.cross, self.K))
        object.__setattr__(self, "powers", _vector("power", self.powers, self.K))
        if not math.isfinite(self.noise) or self.noise <= 0:
            raise ChannelError(f"noise must be positive, got {self.noise!r}")


@dataclass(frozen=True)
class ChannelRatios:
    """``inr[i]`` is caused by transmitter ``i`` at receiver ``i-1``."""

    K: int
    snr: tuple[float, ...]
    inr: tuple[float, ...]

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 2:
            raise ChannelError(f"K must be an integer >= 2, got {self.K!r}")
        object.__setattr__(self, "snr", _vector("snr", self.snr, self.K))
        object.__setattr__(self, "inr", _vector("inr", self.inr, self.K))

    @classmethod
    def symmetric(cls, K: int, snr: float, inr: float) -> "ChannelRatios":
        return cls(K, (snr,) * K, (inr,) * K)

    def to_dict(self) -> dict:
        return {"K": self.K, "snr": list(self.snr), "inr": list(self.inr)}


def derive_ratios(ch: ChannelInstance) -> ChannelRatios:
    snr = tuple(g * p / ch.noise for g, p in zip(ch.direct, ch.powers))
    inr = tuple(g * p / ch.noise for g, p in zip(ch.cross, ch.powers))
    return ChannelRatios(ch.K, snr, inr)


def classify_regime(r: ChannelRatios) -> Regime:
    """Weak, strong, very strong or mixed.

    When every ``INR_i == SNR_i`` both orderings hold and the channel is
    reported as strong, where the capacity region is known exactly.
    """
    K = r.K
    if all(r.inr[i] >= r.snr[i] for i in range(K)):
        if all(r.inr[i] >= (1 + r.snr[i - 1]) * r.snr[i] for i in range(K)):
            return Regime.VERY_STRONG
        return Regime.STRONG
    if all(r.inr[i] <= r.snr[i] for i in range(K)):
        return Regime.WEAK
    return Regime.MIXED


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0 else -math.inf
