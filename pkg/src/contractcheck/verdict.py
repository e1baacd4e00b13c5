"""Shared verdict type for certifiers and metric validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive-at-tolerance"


@dataclass
class Witness:
    """The concrete pair (or triple) that settles a verdict."""

    i: int
    j: int
    lhs: float
    rhs: float
    k: Optional[int] = None

    def to_json(self):
        out = {"i": self.i, "j": self.j, "lhs": float(self.lhs), "rhs": float(self.rhs)}
        if self.k is not None:
            out["k"] = self.k
        return out


@dataclass
class Verdict:
    condition: str
    status: str  # PASS | FAIL | INCONCLUSIVE
    margin: Optional[object] = None  # float or exact rational
    witness: Optional[Witness] = None
    pairs_checked: int = 0
    mode: str = "float"
    seed: Optional[int] = None
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self):
        out = {
            "condition": self.condition,
            "pass": self.passed,
            "status": self.status,
            "margin": None if self.margin is None else float(self.margin),
            "pairs_checked": self.pairs_checked,
            "mode": self.mode,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.seed is not None:
            out["seed"] = self.seed
        if self.note:
            out["note"] = self.note
        if self.details:
            out["details"] = self.details
        return out


def classify(margin, mode: str, mu: float, strict: bool) -> str:
    """Turn a computed minimum margin into a verdict status.

    strict=True means the underlying inequality is strict (margin must be
    positive); strict=False accepts margin == 0 (non-strict inequality).
    In float mode a margin inside [-mu, mu] is evidence of a tie, which
    floating point cannot resolve: report it as such rather than guessing.
    """
    if mode == "exact":
        ok = margin > 0 if strict else margin >= 0
        return PASS if ok else FAIL
    m = float(margin)
    if m > mu:
        return PASS
    if m < -mu:
        return FAIL
    return INCONCLUSIVE
