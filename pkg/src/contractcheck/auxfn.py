"""Auxiliary functions on (0, inf) and certifiers for their functional hypotheses.

The tagged families cover everything the toolkit needs: the classical
log-type comparison functions, the step-with-jump function driving the
counterexample construction, the non-monotone rational function of the
(E, F) example, scalings, and piecewise tables loaded from JSON.

Checks on limits (F2, F3, limsup/liminf conditions) are sampling-based:
they produce evidence with explicit margins, and report "inconclusive"
when the samples do not settle, never a false proof.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import (
    FnParseError,
    GridTooSmall,
    InvalidExponent,
    NonPositiveArgument,
)
from .rational import is_rational, rat, rat_str

DEFAULT_MARGIN = 1e-12
HALF = rat(1, 2)
FIVE_HALVES = rat(5, 2)


@dataclass(frozen=True)
class Piece:
    """One closed-form piece of a table function, valid on (lo, hi]."""

    lo: object  # rational; exclusive
    hi: object  # rational or None for +inf; inclusive
    kind: str  # "affine" | "const" | "rational-1pt2"
    params: tuple = ()

    def value(self, t):
        if self.kind == "const":
            return self.params[0]
        if self.kind == "affine":
            a, b = self.params
            return a * t + b
        if self.kind == "rational-1pt2":
            return (1 + t * t) / t
        raise FnParseError(f"unknown piece kind {self.kind!r}")


@dataclass(frozen=True)
class AuxFn:
    """An evaluable real-valued function on (0, inf), tagged by family.

    kind is one of: "log", "log+t", "neginvroot", "step", "example42F",
    "scale", "table", "const". Parameters of exact-capable families are
    stored as exact rationals.
    """

    kind: str
    params: tuple = ()

    # -- constructors -------------------------------------------------
    @staticmethod
    def log():
        return AuxFn("log")

    @staticmethod
    def log_plus_t():
        return AuxFn("log+t")

    @staticmethod
    def neg_inv_root(n: int):
        if n < 1:
            raise FnParseError("neginvroot requires a positive integer root")
        return AuxFn("neginvroot", (int(n),))

    @staticmethod
    def step(t0, jump):
        t0, jump = rat(t0), rat(jump)
        if t0 <= 0 or jump <= 0:
            raise FnParseError("step requires t0 > 0 and jump > 0")
        return AuxFn("step", (t0, jump))

    @staticmethod
    def example42F():
        return AuxFn("example42F")

    @staticmethod
    def scaled(base: "AuxFn", lam):
        return AuxFn("scale", (rat(lam), base))

    @staticmethod
    def const(c):
        return AuxFn("const", (rat(c),))

    @staticmethod
    def table(pieces: Sequence[Piece]):
        return AuxFn("table", (tuple(pieces),))

    # -- evaluation ---------------------------------------------------
    @property
    def exact_capable(self) -> bool:
        """True when rational inputs evaluate to exact rationals."""
        if self.kind in ("step", "example42F", "const", "table"):
            return True
        if self.kind == "scale":
            return self.params[1].exact_capable
        return False

    def __call__(self, t):
        """Evaluate at t > 0. Rational t stays rational for exact families."""
        if t <= 0:
            raise NonPositiveArgument(f"auxiliary functions need t > 0, got {t}")
        if not (self.exact_capable and is_rational(t)):
            t = float(t)
        return self._eval(t)

    def _eval(self, t):
        kind = self.kind
        if kind == "log":
            return math.log(t)
        if kind == "log+t":
            return math.log(t) + t
        if kind == "neginvroot":
            return -t ** (-1.0 / self.params[0])
        if kind == "step":
            t0, jump = self.params
            return t if t <= t0 else t + jump
        if kind == "example42F":
            if t < HALF:
                return FIVE_HALVES if is_rational(t) else 2.5
            return (1 + t * t) / t
        if kind == "scale":
            lam, base = self.params
            v = base._eval(t)
            return lam * v if is_rational(v) else float(lam) * v
        if kind == "const":
            c = self.params[0]
            return c if is_rational(t) else float(c)
        if kind == "table":
            return self._table_eval(t)
        raise FnParseError(f"unknown function kind {kind!r}")

    def _table_eval(self, t):
        pieces = self.params[0]
        for p in pieces:
            if t > p.lo and (p.hi is None or t <= p.hi):
                return p.value(t)
        raise NonPositiveArgument(f"t={t} outside the table's covered range")

    def eval_array(self, ts: np.ndarray) -> np.ndarray:
        """Vectorized float evaluation; ts must be positive where used."""
        ts = np.asarray(ts, dtype=float)
        kind = self.kind
        if kind == "log":
            return np.log(ts)
        if kind == "log+t":
            return np.log(ts) + ts
        if kind == "neginvroot":
            return -(ts ** (-1.0 / self.params[0]))
        if kind == "step":
            t0, jump = float(self.params[0]), float(self.params[1])
            return np.where(ts <= t0, ts, ts + jump)
        if kind == "example42F":
            with np.errstate(divide="ignore"):
                return np.where(ts < 0.5, 2.5, (1.0 + ts * ts) / ts)
        if kind == "scale":
            lam, base = self.params
            return float(lam) * base.eval_array(ts)
        if kind == "const":
            return np.full_like(ts, float(self.params[0]))
        if kind == "table":
            out = np.full_like(ts, np.nan)
            for p in self.params[0]:
                lo = float(p.lo)
                mask = ts > lo
                if p.hi is not None:
                    mask &= ts <= float(p.hi)
                if p.kind == "const":
                    out[mask] = float(p.params[0])
                elif p.kind == "affine":
                    a, b = (float(x) for x in p.params)
                    out[mask] = a * ts[mask] + b
                else:
                    out[mask] = (1.0 + ts[mask] ** 2) / ts[mask]
            return out
        raise FnParseError(f"unknown function kind {kind!r}")

    # -- misc ---------------------------------------------------------
    def describe(self) -> str:
        kind = self.kind
        if kind == "neginvroot":
            return f"neginvroot:{self.params[0]}"
        if kind == "step":
            return f"step:{rat_str(self.params[0])},{rat_str(self.params[1])}"
        if kind == "scale":
            lam, base = self.params
            return f"scale:{rat_str(lam)},{base.describe()}"
        if kind == "const":
            return f"const:{rat_str(self.params[0])}"
        if kind == "table":
            return f"table[{len(self.params[0])} pieces]"
        return kind


# ---------------------------------------------------------------------------
# mini-language parser


def parse_fn(spec: str) -> AuxFn:
    """Parse the CLI function mini-language.

    Grammar: log | log+t | neginvroot:n | step:t0,jump | example42F |
    scale:lam,<fn> | const:c | table:@file.json. Decimal literals parse
    exactly (step:1,1 gives t0 == 1 exactly).
    """
    spec = spec.strip()
    if spec == "log":
        return AuxFn.log()
    if spec == "log+t":
        return AuxFn.log_plus_t()
    if spec == "example42F":
        return AuxFn.example42F()
    head, sep, rest = spec.partition(":")
    if not sep:
        raise FnParseError(f"unknown function {spec!r}")
    if head == "neginvroot":
        return AuxFn.neg_inv_root(_parse_int(rest))
    if head == "step":
        t0, jump = _split_args(rest, 2)
        return AuxFn.step(_parse_rat(t0), _parse_rat(jump))
    if head == "scale":
        lam, inner = rest.split(",", 1)
        return AuxFn.scaled(parse_fn(inner), _parse_rat(lam))
    if head == "const":
        return AuxFn.const(_parse_rat(rest))
    if head == "table":
        if not rest.startswith("@"):
            raise FnParseError("table takes @file.json")
        with open(rest[1:]) as fh:
            return table_from_json(json.load(fh))
    raise FnParseError(f"unknown function {spec!r}")


def table_from_json(data) -> AuxFn:
    """Build a table function from a JSON array of piece objects."""
    pieces = []
    for entry in data:
        lo = _parse_rat(str(entry["from"]))
        hi = entry.get("to")
        hi = None if hi is None else _parse_rat(str(hi))
        kind = entry["kind"]
        params = tuple(_parse_rat(str(p)) for p in entry.get("params", []))
        pieces.append(Piece(lo, hi, kind, params))
    pieces.sort(key=lambda p: Fraction(p.lo.numerator, p.lo.denominator))
    return AuxFn.table(pieces)


def _parse_rat(text: str):
    try:
        return rat(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise FnParseError(f"bad numeric literal {text!r}") from exc


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise FnParseError(f"bad integer {text!r}") from exc


def _split_args(text: str, n: int):
    parts = text.split(",")
    if len(parts) != n:
        raise FnParseError(f"expected {n} arguments in {text!r}")
    return parts


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckEntry:
    """Verdict for one functional hypothesis."""

    condition: str
    verdict: str  # "pass" | "fail" | "inconclusive"
    witness: Optional[tuple] = None
    margin: Optional[float] = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self):
        out = {"condition": self.condition, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = [float(w) for w in self.witness]
        if self.margin is not None:
            out["margin"] = float(self.margin)
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class JumpReport:
    """Right-limit estimate of f at t0 and the resulting jump size."""

    t0: float
    value_at: object
    right_limit: object
    tau: object
    h_schedule: list = field(default_factory=list)
    converged: bool = False
    exact: bool = False

    def to_json(self):
        return {
            "t0": float(self.t0),
            "value_at": float(self.value_at),
            "right_limit": float(self.right_limit),
            "tau": float(self.tau),
            "converged": self.converged,
            "exact": self.exact,
        }


def default_h_schedule():
    return [10.0 ** -k for k in range(1, 11)]


def default_probe(length: int = 40):
    return [2.0 ** -n for n in range(1, length + 1)]


# ---------------------------------------------------------------------------
# checks


def check_strictly_increasing(f: AuxFn, grid, strict: bool = True) -> CheckEntry:
    """Monotonicity on a grid; strict=False checks nondecreasing instead."""
    if len(grid) < 2:
        raise GridTooSmall("monotonicity check needs at least 2 grid points")
    cond = "F1" if strict else "nondecreasing"
    vals = [f(t) for t in grid]
    best = None
    for t1, t2, v1, v2 in zip(grid, grid[1:], vals, vals[1:]):
        diff = v2 - v1
        bad = diff <= 0 if strict else diff < 0
        if bad:
            return CheckEntry(cond, "fail", witness=(t1, t2), margin=float(diff))
        if best is None or diff < best:
            best = diff
    return CheckEntry(cond, "pass", margin=float(best))


def check_F2(f: AuxFn, probe=None, bound: float = 10.0) -> CheckEntry:
    """Evidence that f(t) -> -inf as t -> 0+ (condition F2).

    Pass: the probe tail drops below -bound and keeps decreasing.
    Fail: f stays above -bound over the whole probe with a flat trend.
    Anything else is inconclusive: a finite probe cannot prove a limit.
    """
    probe = default_probe() if probe is None else list(probe)
    if len(probe) < 8 or any(b >= a for a, b in zip(probe, probe[1:])):
        raise GridTooSmall("F2 probe must be strictly decreasing with >= 8 points")
    vals = [float(f(t)) for t in probe]
    tail = vals[-max(3, len(vals) // 4):]
    margin = vals[-1] + bound
    if vals[-1] < -bound and all(b <= a for a, b in zip(tail, tail[1:])):
        return CheckEntry("F2", "pass", margin=margin)
    flat = abs(vals[len(vals) // 2] - vals[-1]) < 1e-3 * (1.0 + abs(vals[-1]))
    if min(vals) > -bound and flat:
        return CheckEntry(
            "F2", "fail", witness=(probe[-1],), margin=margin,
            note=f"f bounded below by {min(vals):.6g} > {-bound} with flat tail",
        )
    return CheckEntry(
        "F2", "inconclusive", margin=margin,
        note="probe tail neither below the bound nor settled; extend the probe",
    )


def check_F3(f: AuxFn, k: float, probe=None, tol: float = 1e-2) -> CheckEntry:
    """Evidence that t^k * f(t) -> 0 as t -> 0+ (condition F3)."""
    if not 0.0 < k < 1.0:
        raise InvalidExponent(f"F3 exponent must lie in (0,1), got {k}")
    probe = default_probe() if probe is None else list(probe)
    if len(probe) < 8:
        raise GridTooSmall("F3 probe needs >= 8 points")
    g = [abs(t ** k * float(f(t))) for t in probe]
    tail = g[-max(3, len(g) // 4):]
    margin = tol - g[-1]
    if all(v < tol for v in tail) and all(b <= a * (1 + 1e-9) for a, b in zip(tail, tail[1:])):
        return CheckEntry("F3", "pass", margin=margin)
    if g[-1] > g[len(g) // 2] and g[-1] > tol:
        return CheckEntry(
            "F3", "fail", witness=(probe[-1],), margin=margin,
            note=f"|t^k f(t)| grows along the probe, reaching {g[-1]:.6g}",
        )
    return CheckEntry("F3", "inconclusive", margin=margin,
                      note="probe tail not settled below tol")


def estimate_right_limit(
    f: AuxFn, t0, h_schedule=None, tol: float = 1e-8
) -> JumpReport:
    """Estimate f(t0+0) and the jump f(t0+0) - f(t0).

    Step and table families get the exact analytic jump; for the rest,
    one-sided monotone limits make the last sample of a shrinking
    h-schedule the natural estimate.
    """
    h_schedule = default_h_schedule() if h_schedule is None else list(h_schedule)
    if any(b >= a for a, b in zip(h_schedule, h_schedule[1:])) or h_schedule[-1] <= 0:
        raise GridTooSmall("h-schedule must be strictly decreasing and positive")
    value_at = f(t0)
    analytic = _analytic_right_limit(f, t0)
    if analytic is not None:
        return JumpReport(
            t0=float(t0), value_at=value_at, right_limit=analytic,
            tau=analytic - value_at, h_schedule=h_schedule,
            converged=True, exact=True,
        )
    vals = [float(f(float(t0) + h)) for h in h_schedule]
    right = vals[-1]
    converged = abs(vals[-1] - vals[-2]) < tol
    return JumpReport(
        t0=float(t0), value_at=value_at, right_limit=right,
        tau=right - float(value_at), h_schedule=h_schedule, converged=converged,
    )


def _analytic_right_limit(f: AuxFn, t0):
    """Exact right limit for the piecewise-defined families, else None."""
    if f.kind == "step":
        s0, jump = f.params
        at_jump = t0 == s0 if is_rational(t0) else float(t0) == float(s0)
        if at_jump:
            return s0 + jump
        return f(t0)
    if f.kind == "const":
        return f(t0)
    if f.kind == "table":
        pieces = f.params[0]
        for prev, nxt in zip(pieces, pieces[1:]):
            if prev.hi is not None and is_rational(t0) and t0 == prev.hi:
                return nxt.value(t0)
        if is_rational(t0):
            return f(t0)
        return None
    if f.kind == "scale":
        lam, base = f.params
        inner = _analytic_right_limit(base, t0)
        if inner is None:
            return None
        return lam * inner if is_rational(inner) else float(lam) * inner
    return None


def check_C1(E: AuxFn, F: AuxFn, grid, mu: float = DEFAULT_MARGIN) -> CheckEntry:
    """Condition C1 on a grid: t <= s implies E(t) < F(s), with margin mu.

    Single ascending pass keeping the running max of E; equivalent to the
    quadratic all-pairs scan but O(n).
    """
    if len(grid) == 0:
        raise GridTooSmall("C1 needs a nonempty grid")
    emax = None
    emax_at = None
    best = None
    for s in grid:
        e, fv = E(s), F(s)
        if emax is None or e > emax:
            emax, emax_at = e, s
        slack = fv - emax
        if not slack > mu:
            return CheckEntry("C1", "fail", witness=(emax_at, s), margin=float(slack))
        if best is None or slack < best:
            best = slack
    return CheckEntry("C1", "pass", margin=float(best))


def check_C1_bruteforce(E: AuxFn, F: AuxFn, grid, mu: float = DEFAULT_MARGIN) -> CheckEntry:
    """Quadratic all-pairs C1 scan; oracle for check_C1."""
    if len(grid) == 0:
        raise GridTooSmall("C1 needs a nonempty grid")
    evals = [E(t) for t in grid]
    best = None
    for j, s in enumerate(grid):
        fv = F(s)
        for i in range(j + 1):
            slack = fv - evals[i]
            if not slack > mu:
                return CheckEntry("C1", "fail", witness=(grid[i], s), margin=float(slack))
            if best is None or slack < best:
                best = slack
    return CheckEntry("C1", "pass", margin=float(best))


def check_thm35_condition(
    phi: AuxFn,
    F: AuxFn,
    t_grid,
    schedule=None,
    mu: float = DEFAULT_MARGIN,
    window: int = 5,
    tol: float = 1e-8,
):
    """Per-t check that limsup of phi from the right exceeds F's jump at t.

    Returns one CheckEntry per grid point plus an aggregate entry. The
    limsup is estimated as the max over the tail window of the approach
    schedule; an unsettled tail yields "inconclusive" for that t.
    """
    schedule = default_h_schedule() if schedule is None else list(schedule)
    entries = []
    for t in t_grid:
        jump = estimate_right_limit(F, t, schedule, tol)
        tail = [float(phi(float(t) + h)) for h in schedule[-window:]]
        L = max(tail)
        J = float(jump.tau)
        settled = jump.exact or (max(tail) - min(tail) <= 10 * tol)
        margin = L - J
        if not settled and not jump.converged:
            entries.append(CheckEntry(
                "Thm3.5-at-t", "inconclusive", witness=(t,), margin=margin,
                note="approach-schedule tail not settled",
            ))
        elif margin > mu:
            entries.append(CheckEntry("Thm3.5-at-t", "pass", witness=(t,), margin=margin))
        else:
            entries.append(CheckEntry(
                "Thm3.5-at-t", "fail", witness=(t,), margin=margin,
                note=(
                    f"limsup phi = {L:.6g} does not exceed the jump {J:.6g} at t={float(t):.6g}; "
                    "a nondecreasing F with this right jump admits an "
                    "F-contraction that is not Meir-Keeler (see the "
                    "counterexample builder)"
                ),
            ))
    verdicts = {e.verdict for e in entries}
    if "fail" in verdicts:
        agg = "fail"
    elif "inconclusive" in verdicts:
        agg = "inconclusive"
    else:
        agg = "pass"
    worst = min(entries, key=lambda e: e.margin)
    aggregate = CheckEntry("Thm3.5", agg, witness=worst.witness, margin=worst.margin)
    return entries, aggregate


def check_thm45_conditions(
    E: AuxFn,
    F: AuxFn,
    t_grid,
    schedule=None,
    mu: float = DEFAULT_MARGIN,
    window: int = 5,
    rc_tol: float = 1e-6,
):
    """Hypotheses (i) and (ii) under which an (E,F)-contraction is Meir-Keeler.

    (i): F nondecreasing and liminf of E over strictly-right approaches
    stays below F(t) at every sampled t.
    (ii): F right-continuous and the liminf over approaches allowed to
    touch t (so E(t) itself joins the min) stays below F(t).
    """
    schedule = default_h_schedule() if schedule is None else list(schedule)
    grid = sorted(float(t) for t in t_grid)
    mono = check_strictly_increasing(F, grid, strict=False)

    i_verdict, i_witness, i_margin = "pass", None, None
    ii_verdict, ii_witness, ii_margin = "pass", None, None
    ii_note = ""
    for t in t_grid:
        tails = [float(E(float(t) + h)) for h in schedule[-window:]]
        liminf_strict = min(tails)
        liminf_touch = min(liminf_strict, float(E(t)))
        Ft = float(F(t))
        m_i = Ft - liminf_strict
        if not m_i > mu:
            if i_verdict == "pass":
                i_verdict, i_witness, i_margin = "fail", (t,), m_i
        elif i_verdict == "pass" and (i_margin is None or m_i < i_margin):
            i_margin = m_i
        jump = estimate_right_limit(F, t, schedule)
        m_ii = Ft - liminf_touch
        rc_ok = abs(float(jump.tau)) <= rc_tol
        if not rc_ok or not m_ii > mu:
            if ii_verdict == "pass":
                ii_verdict, ii_witness, ii_margin = "fail", (t,), m_ii
                if not rc_ok:
                    ii_note = (
                        f"F right-discontinuous at t={float(t):.6g} "
                        f"(jump {float(jump.tau):.6g})"
                    )
        elif ii_verdict == "pass" and (ii_margin is None or m_ii < ii_margin):
            ii_margin = m_ii
    if mono.verdict != "pass":
        i_verdict, i_witness, i_margin = "fail", mono.witness, mono.margin
    entry_i = CheckEntry("Thm4.5-i", i_verdict, witness=i_witness, margin=i_margin)
    entry_ii = CheckEntry("Thm4.5-ii", ii_verdict, witness=ii_witness,
                          margin=ii_margin, note=ii_note)
    return entry_i, entry_ii
