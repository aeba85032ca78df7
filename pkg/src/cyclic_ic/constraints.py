"""Rate constraints over ``(R_1, ..., R_K)`` with symbolic right-hand sides.

Each constraint keeps the candidate expressions whose minimum forms its
right-hand side, e.g. ``d_1 | a_1+e_2``. An expression is a sum of named
per-user parameters; ``ConstraintSet.params`` holds their values in bits.
Keeping the symbols lets the exact-arithmetic path re-evaluate every
right-hand side from dyadic parameters, so sums agree bit for bit with the
rational systems built elsewhere.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .polytope.system import DYADIC_BITS, Inequality, InequalitySystem, dyadic

INDIVIDUAL = "individual"
ADJACENT = "adjacent"
TOTAL = "total"
TOTAL_PLUS = "total_plus"
FAMILIES = (INDIVIDUAL, ADJACENT, TOTAL, TOTAL_PLUS)

Term = tuple[str, int]
Expr = tuple[Term, ...]


@dataclass(frozen=True, order=True)
class Kind:
    """Constraint family tag; ``index`` and ``length`` are 0-based/absolute."""

    family: str
    index: Optional[int] = None
    length: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown constraint family {self.family!r}")

    @classmethod
    def individual(cls, i: int) -> "Kind":
        return cls(INDIVIDUAL, i)

    @classmethod
    def adjacent(cls, m: int, l: int) -> "Kind":
        return cls(ADJACENT, m, l)

    @classmethod
    def total(cls) -> "Kind":
        return cls(TOTAL)

    @classmethod
    def total_plus(cls, i: int) -> "Kind":
        return cls(TOTAL_PLUS, i)

    def rate_terms(self, K: int) -> int:
        """Number of rate variables counted with multiplicity."""
        return {INDIVIDUAL: 1, ADJACENT: self.length, TOTAL: K, TOTAL_PLUS: K + 1}[self.family]

    def coeffs(self, K: int) -> tuple[int, ...]:
        c = [0] * K
        if self.family == INDIVIDUAL:
            c[self.index] = 1
        elif self.family == ADJACENT:
            for j in range(self.index, self.index + self.length):
                c[j % K] += 1
        else:
            c = [1] * K
            if self.family == TOTAL_PLUS:
                c[self.index] += 1
        return tuple(c)

    def __str__(self) -> str:
        if self.family == TOTAL:
            return TOTAL
        if self.family == ADJACENT:
            return f"{ADJACENT}:{self.index + 1}:{self.length}"
        return f"{self.family}:{self.index + 1}"

    @classmethod
    def parse(cls, text: str) -> "Kind":
        parts = text.strip().split(":")
        fam = parts[0]
        if fam == TOTAL and len(parts) == 1:
            return cls.total()
        if fam == ADJACENT and len(parts) == 3:
            return cls.adjacent(int(parts[1]) - 1, int(parts[2]))
        if fam in (INDIVIDUAL, TOTAL_PLUS) and len(parts) == 2:
            return cls(fam, int(parts[1]) - 1)
        raise ValueError(f"malformed constraint kind {text!r}")


def expr_str(expr: Expr) -> str:
    return "+".join(f"{s}_{i + 1}" for s, i in expr) if expr else "0"


_TERM = re.compile(r"^([A-Za-z]+)_(\d+)$")


def parse_expr(text: str) -> Expr:
    text = text.strip()
    if text == "0":
        return ()
    terms = []
    for tok in text.split("+"):
        m = _TERM.match(tok.strip())
        if not m:
            raise ValueError(f"malformed term {tok!r} in {text!r}")
        terms.append((m.group(1), int(m.group(2)) - 1))
    return tuple(terms)


def evaluate(expr: Expr, params: Mapping[str, Sequence[float]]) -> float:
    total = 0.0
    for s, i in expr:
        total += params[s][i]
    return total


@dataclass(frozen=True)
class LinearConstraint:
    """``coeffs . R <= rhs``, where ``rhs = min`` over ``candidates``."""

    kind: Kind
    coeffs: tuple[int, ...]
    rhs: float
    candidates: tuple[Expr, ...] = ()
    branch: int = 0

    @property
    def branch_expr(self) -> Optional[Expr]:
        return self.candidates[self.branch] if self.candidates else None

    def __str__(self) -> str:
        lhs = " + ".join(
            (f"{c}*R_{j + 1}" if c != 1 else f"R_{j + 1}") for j, c in enumerate(self.coeffs) if c)
        alts = ", ".join(expr_str(e) for e in self.candidates)
        return f"{lhs} <= {self.rhs:.6f}  [{self.kind}; min{{{alts}}}]"


def make_constraint(kind: Kind, K: int, candidates: Sequence[Expr],
                    params: Mapping[str, Sequence[float]],
                    coeffs: Optional[Sequence[int]] = None) -> LinearConstraint:
    """Evaluate every candidate and keep the smallest (first on ties)."""
    values = [evaluate(e, params) for e in candidates]
    branch = min(range(len(values)), key=lambda k: (values[k], k))
    return LinearConstraint(kind, tuple(coeffs) if coeffs is not None else kind.coeffs(K),
                            values[branch], tuple(tuple(e) for e in candidates), branch)


@dataclass(frozen=True)
class ConstraintSet:
    """A polytope ``{R >= 0 : every constraint holds}`` plus provenance."""

    K: int
    constraints: tuple[LinearConstraint, ...]
    params: Mapping[str, tuple[float, ...]] = field(default_factory=dict)
    label: str = ""
    regime: Optional[str] = None
    notes: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def by_kind(self) -> dict[Kind, LinearConstraint]:
        out = {}
        for c in self.constraints:
            if c.kind in out:
                raise ValueError(f"duplicate constraint kind {c.kind} in {self.label!r} set")
            out[c.kind] = c
        return out

    def variables(self) -> tuple[str, ...]:
        return tuple(f"R{i + 1}" for i in range(self.K))

    def exact_rhs(self, c: LinearConstraint, bits: int = DYADIC_BITS) -> Fraction:
        """Right-hand side from dyadic-rounded parameters, summed exactly."""
        if c.candidates and all(s in self.params for e in c.candidates for s, _ in e):
            return min(sum((dyadic(self.params[s][i], bits) for s, i in e), Fraction(0))
                       for e in c.candidates)
        return dyadic(c.rhs, bits)

    def to_system(self, nonneg: bool = True, bits: int = DYADIC_BITS) -> InequalitySystem:
        rows = [Inequality(tuple(Fraction(v) for v in c.coeffs), self.exact_rhs(c, bits))
                for c in self.constraints]
        sys = InequalitySystem(self.variables(), tuple(rows))
        return sys.nonnegative() if nonneg else sys

    # -- serialization --------------------------------------------------------

    CSV_FIELDS = ("kind", "coeffs", "rhs_bits", "branch", "candidates")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_FIELDS)
        for c in self.constraints:
            w.writerow([
                str(c.kind),
                " ".join(str(v) for v in c.coeffs),
                repr(c.rhs),
                expr_str(c.branch_expr) if c.candidates else "",
                "|".join(expr_str(e) for e in c.candidates),
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str = "") -> "ConstraintSet":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("constraint CSV has no rows")
        cons = [_constraint_from_record(r) for r in rows]
        return cls(len(cons[0].coeffs), tuple(cons), {}, label)

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "label": self.label,
            "regime": self.regime,
            "notes": list(self.notes),
            "dyadic_resolution": f"2^-{DYADIC_BITS}",
            "params": {k: list(v) for k, v in self.params.items()},
            "constraints": [
                {
                    "kind": str(c.kind),
                    "coeffs": list(c.coeffs),
                    "rhs_bits": c.rhs,
                    "branch": expr_str(c.branch_expr) if c.candidates else "",
                    "candidates": [expr_str(e) for e in c.candidates],
                }
                for c in self.constraints
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ConstraintSet":
        cons = tuple(_constraint_from_record({
            "kind": c["kind"],
            "coeffs": " ".join(str(v) for v in c["coeffs"]),
            "rhs_bits": c["rhs_bits"],
            "branch": c.get("branch", ""),
            "candidates": "|".join(c.get("candidates", [])),
        }) for c in d["constraints"])
        params = {k: tuple(float(x) for x in v) for k, v in d.get("params", {}).items()}
        return cls(int(d["K"]), cons, params, d.get("label", ""), d.get("regime"),
                   tuple(d.get("notes", ())))

    @classmethod
    def from_json(cls, text: str) -> "ConstraintSet":
        return cls.from_dict(json.loads(text))


def _constraint_from_record(r: Mapping[str, object]) -> LinearConstraint:
    kind = Kind.parse(str(r["kind"]))
    coeffs = tuple(int(v) for v in str(r["coeffs"]).split())
    rhs = float(r["rhs_bits"])
    cand_text = str(r.get("candidates") or "")
    candidates = tuple(parse_expr(t) for t in cand_text.split("|")) if cand_text else ()
    branch = 0
    if candidates and r.get("branch"):
        branch = candidates.index(parse_expr(str(r["branch"])))
    return LinearConstraint(kind, coeffs, rhs, candidates, branch)


def box(K: int, bounds: Iterable[float], symbol: str = "lambda") -> ConstraintSet:
    """``{0 <= R_i <= bounds[i]}`` as a constraint set."""
    vals = tuple(float(v) for v in bounds)
    params = {symbol: vals}
    cons = tuple(make_constraint(Kind.individual(i), K, [((symbol, i),)], params)
                 for i in range(K))
    return ConstraintSet(K, cons, params, "box")
