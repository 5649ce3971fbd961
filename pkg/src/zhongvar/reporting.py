"""Result records: axiom validation reports and inequality certificates.

Every inequality is stored in the canonical orientation ``lhs <= rhs``
(``lhs < rhs`` when strict) so that ``slack = rhs - lhs`` is uniformly
"how much room the relation has".  Weak relations are accepted down to a
small negative slack (floating-point headroom); strict ones must have
strictly positive slack, with no tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


def encode_number(x: float):
    """JSON-portable encoding: infinities become the strings "inf"/"-inf"."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def decode_number(x) -> float:
    if isinstance(x, str):
        if x == "inf":
            return math.inf
        if x == "-inf":
            return -math.inf
        raise ValueError(f"not a number: {x!r}")
    return float(x)


@dataclass(frozen=True)
class Violation:
    """One failed axiom check: which axiom, at which witness, by how much."""

    axiom: str
    witness: tuple
    magnitude: float

    def __str__(self) -> str:
        return f"{self.axiom} at {self.witness}: off by {self.magnitude:.6g}"

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "witness": list(self.witness),
            "magnitude": encode_number(self.magnitude),
        }


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an axiom suite; passed exactly when no violations were found."""

    passed: bool
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = ()

    @classmethod
    def from_violations(cls, violations, notes=()) -> "ValidationReport":
        vs = tuple(violations)
        return cls(passed=not vs, violations=vs, notes=tuple(notes))

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(
            passed=self.passed and other.passed,
            violations=self.violations + other.violations,
            notes=self.notes + other.notes,
        )

    def summary(self) -> str:
        if self.passed:
            return "passed" + (f" ({'; '.join(self.notes)})" if self.notes else "")
        return "; ".join(str(v) for v in self.violations)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [v.to_dict() for v in self.violations],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class Inequality:
    """One checked relation lhs <= rhs (or lhs < rhs when strict)."""

    name: str
    lhs: float
    rhs: float
    strict: bool = False

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def satisfied(self, tol: float = 1e-9) -> bool:
        if self.strict:
            return self.slack > 0.0
        return self.slack >= -tol

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": encode_number(self.lhs),
            "rhs": encode_number(self.rhs),
            "slack": encode_number(self.slack),
            "strict": self.strict,
        }


@dataclass(frozen=True)
class Certificate:
    """Solver output: the points found, the descent chain that produced them,
    and every inequality that was checked along the way, with numeric slack.

    ``premise`` records the quantitative hypothesis (radius, bound values)
    when a local variant of a principle was invoked.
    """

    u: int
    v: int
    chain: tuple[int, ...]
    inequalities: tuple[Inequality, ...]
    premise: dict | None = None
    notes: tuple[str, ...] = ()

    def find(self, name: str) -> Inequality:
        for ineq in self.inequalities:
            if ineq.name == name:
                return ineq
        raise KeyError(name)

    def named(self, prefix: str) -> list[Inequality]:
        return [q for q in self.inequalities if q.name.startswith(prefix)]

    def passed(self, tol: float = 1e-9) -> bool:
        return all(q.satisfied(tol) for q in self.inequalities)

    def worst_slack(self) -> float:
        return min((q.slack for q in self.inequalities), default=math.inf)

    def to_dict(self) -> dict:
        out = {
            "u": self.u,
            "v": self.v,
            "chain": list(self.chain),
            "inequalities": [q.to_dict() for q in self.inequalities],
        }
        if self.premise is not None:
            out["premise"] = {k: encode_number(v) if isinstance(v, (int, float)) else v
                              for k, v in self.premise.items()}
        if self.notes:
            out["notes"] = list(self.notes)
        return out
