"""Exact-rational linear inequality systems and their text interchange format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

DYADIC_BITS = 40


class InfeasibleSystem(Exception):
    """Raised when an inequality system has no solution.

    ``certificate`` holds nonnegative multipliers over ``system.rows`` whose
    combination reads ``0 <= negative``.
    """

    def __init__(self, message: str, system: "InequalitySystem | None" = None,
                 certificate: Optional[tuple[Fraction, ...]] = None):
        super().__init__(message)
        self.system = system
        self.certificate = certificate


class UnboundedPolytope(Exception):
    def __init__(self, message: str, ray: tuple[Fraction, ...]):
        super().__init__(message)
        self.ray = ray


@dataclass(frozen=True)
class Inequality:
    """``coeffs . x <= rhs``"""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction

    def evaluate(self, point: Sequence) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point) if c), Fraction(0))

    def satisfied_by(self, point: Sequence) -> bool:
        return self.evaluate(point) <= self.rhs

    def is_trivial(self) -> bool:
        return not any(self.coeffs)

    def normalized(self) -> "Inequality":
        """Scale by a positive factor so the coefficients are coprime integers."""
        if self.is_trivial():
            return self
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        scale = Fraction(lcm, g)
        return Inequality(tuple(Fraction(v // g) for v in ints), self.rhs * scale)


@dataclass(frozen=True)
class Witness:
    """A point separating two systems.

    When ``violated_row`` is set, ``point`` lies in one system and violates
    that row of the other. ``ray`` is set when the separation comes from an
    unbounded direction of the inner system.
    """

    point: Optional[tuple[Fraction, ...]]
    violated_row: Optional[int] = None
    ray: Optional[tuple[Fraction, ...]] = None
    note: str = ""


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


def dyadic(x: float, bits: int = DYADIC_BITS) -> Fraction:
    """Round a float to the nearest multiple of ``2**-bits`` as an exact rational."""
    if not math.isfinite(x):
        raise ValueError(f"cannot convert non-finite value {x!r}")
    return Fraction(round(x * (1 << bits)), 1 << bits)


@dataclass(frozen=True)
class InequalitySystem:
    variables: tuple[str, ...]
    rows: tuple[Inequality, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        n = len(self.variables)
        for i, row in enumerate(self.rows):
            if len(row.coeffs) != n:
                raise ValueError(
                    f"row {i} has {len(row.coeffs)} coefficients, expected {n}")
            if row.is_trivial() and row.rhs < 0:
                cert = [Fraction(0)] * len(self.rows)
                cert[i] = Fraction(1)
                raise InfeasibleSystem(f"row {i} reads 0 <= {row.rhs}",
                                       certificate=tuple(cert))

    @classmethod
    def from_rows(cls, variables: Iterable[str],
                  rows: Iterable[tuple[Sequence, object]]) -> "InequalitySystem":
        """Build from ``(coeffs, rhs)`` pairs of ints, Fractions or strings."""
        return cls(tuple(variables), tuple(
            Inequality(tuple(to_fraction(c) for c in coeffs), to_fraction(rhs))
            for coeffs, rhs in rows))

    @property
    def dim(self) -> int:
        return len(self.variables)

    def __len__(self) -> int:
        return len(self.rows)

    def matrix(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        return [list(r.coeffs) for r in self.rows], [r.rhs for r in self.rows]

    def contains_point(self, point: Sequence) -> bool:
        return all(r.satisfied_by(point) for r in self.rows)

    def first_violated(self, point: Sequence) -> Optional[int]:
        return next((i for i, r in enumerate(self.rows) if not r.satisfied_by(point)), None)

    def with_rows(self, rows: Iterable[Inequality]) -> "InequalitySystem":
        return InequalitySystem(self.variables, tuple(rows))

    def add_rows(self, rows: Iterable[Inequality]) -> "InequalitySystem":
        return InequalitySystem(self.variables, self.rows + tuple(rows))

    def nonnegative(self) -> "InequalitySystem":
        """Append ``-x_i <= 0`` for every variable."""
        n = self.dim
        extra = []
        for i in range(n):
            coeffs = [Fraction(0)] * n
            coeffs[i] = Fraction(-1)
            extra.append(Inequality(tuple(coeffs), Fraction(0)))
        return self.add_rows(extra)

    def reorder(self, variables: Sequence[str]) -> "InequalitySystem":
        """Permute columns to match ``variables`` (same name set)."""
        if sorted(variables) != sorted(self.variables):
            raise ValueError(f"variable sets differ: {self.variables} vs {tuple(variables)}")
        idx = [self.variables.index(v) for v in variables]
        return InequalitySystem(tuple(variables), tuple(
            Inequality(tuple(r.coeffs[i] for i in idx), r.rhs) for r in self.rows))

    def fix(self, values: dict[str, object]) -> "InequalitySystem":
        """Slice: substitute fixed values for some variables and drop their columns."""
        keep = [i for i, v in enumerate(self.variables) if v not in values]
        unknown = set(values) - set(self.variables)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        fixed = {self.variables.index(v): to_fraction(x) for v, x in values.items()}
        rows = []
        for r in self.rows:
            shift = sum((r.coeffs[i] * x for i, x in fixed.items()), Fraction(0))
            new = Inequality(tuple(r.coeffs[i] for i in keep), r.rhs - shift)
            if new.is_trivial():
                if new.rhs < 0:
                    raise InfeasibleSystem("slice is empty")
                continue
            rows.append(new)
        return InequalitySystem(tuple(self.variables[i] for i in keep), tuple(rows))

    # -- interchange format -------------------------------------------------

    def dumps(self) -> str:
        lines = [" ".join(self.variables)]
        for r in self.rows:
            lines.append(" ".join(_fmt(c) for c in r.coeffs) + " <= " + _fmt(r.rhs))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "InequalitySystem":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise ValueError("empty system text: missing header line")
        variables = tuple(lines[0].split())
        rows = []
        for lineno, ln in enumerate(lines[1:], start=2):
            if "<=" not in ln:
                raise ValueError(f"line {lineno}: expected '<=' in {ln!r}")
            lhs, rhs = ln.split("<=")
            coeffs = lhs.split()
            if len(coeffs) != len(variables):
                raise ValueError(
                    f"line {lineno}: {len(coeffs)} coefficients for {len(variables)} variables")
            rows.append((coeffs, rhs.strip()))
        return cls.from_rows(variables, rows)


def _fmt(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"
