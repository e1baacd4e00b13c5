"""Contraction-condition certifiers on finite metric spaces.

Each certifier scans unordered pairs once (the conditions are symmetric),
reports the minimum slack as its margin, and carries a concrete witness
pair whenever the verdict is not a pass. Float mode uses the compiled /
numpy kernels; exact mode loops in rational arithmetic and turns the
verification into a proof on the given space.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from . import kernels
from .auxfn import AuxFn, check_C1
from .errors import (
    C1Violated,
    FnParseError,
    InternalInconsistency,
    InvalidTau,
    NoEligiblePairs,
    ShapeMismatch,
)
from .metric import DEFAULT_MARGIN, FiniteMetricSpace, SelfMap, is_contractive
from .verdict import FAIL, INCONCLUSIVE, PASS, Verdict, Witness, classify


def exact_evaluator(f: AuxFn):
    """A plain closure computing f on exact rationals, for hot loops."""
    if not f.exact_capable:
        raise FnParseError(f"{f.describe()} cannot be evaluated exactly")
    kind = f.kind
    if kind == "step":
        t0, jump = f.params

        def ev(t, _t0=t0, _j=jump):
            return t if t <= _t0 else t + _j

        return ev
    if kind == "const":
        c = f.params[0]
        return lambda t: c
    if kind == "example42F":
        from .auxfn import FIVE_HALVES, HALF

        def ev42(t):
            return FIVE_HALVES if t < HALF else (1 + t * t) / t

        return ev42
    if kind == "scale":
        lam, base = f.params
        inner = exact_evaluator(base)
        return lambda t: lam * inner(t)
    if kind == "table":
        return f._table_eval
    raise FnParseError(f"{f.describe()} cannot be evaluated exactly")


def _float_pair_setup(space: FiniteMetricSpace, T: SelfMap):
    d = space.dist
    img = np.asarray(T.image)
    dT = d[np.ix_(img, img)]
    eligible = (dT > 0).astype(np.uint8)
    return d, dT, eligible


def _safe_eval_array(f: AuxFn, mat: np.ndarray) -> np.ndarray:
    """Evaluate f entrywise, tolerating nonpositive entries (masked later)."""
    return f.eval_array(np.where(mat > 0, mat, 1.0))


def certify_F_contraction(
    space: FiniteMetricSpace,
    T: SelfMap,
    F: AuxFn,
    tau,
    mode: str = "float",
    mu: float = DEFAULT_MARGIN,
) -> Verdict:
    """tau + F(d(Tx,Ty)) <= F(d(x,y)) over all pairs with d(Tx,Ty) > 0."""
    if tau <= 0:
        raise InvalidTau(f"tau must be positive, got {tau}")
    T.validate(space.n)
    if mode == "exact":
        margin, wit, count = _exact_margin_scan(
            space, T, lambda d, dT, FdT, Fv: Fv(d) - FdT - tau, F
        )
    else:
        d, dT, eligible = _float_pair_setup(space, T)
        lhs = _safe_eval_array(F, d)
        rhs = _safe_eval_array(F, dT) + float(tau)
        margin, i, j, count = kernels.min_margin_scan(lhs, rhs, eligible)
        wit = (i, j, lhs[i, j], rhs[i, j]) if count else None
    return _margin_verdict("FContraction", margin, wit, count, mode, mu, strict=False)


def max_admissible_tau(
    space: FiniteMetricSpace, T: SelfMap, F: AuxFn, mode: str = "float"
):
    """inf over eligible pairs of F(d(x,y)) - F(d(Tx,Ty)).

    T is an F-contraction for this F iff the value is positive, and
    certify_F_contraction passes exactly for tau up to this value.
    """
    T.validate(space.n)
    if mode == "exact":
        margin, _, count = _exact_margin_scan(
            space, T, lambda d, dT, FdT, Fv: Fv(d) - FdT, F
        )
    else:
        d, dT, eligible = _float_pair_setup(space, T)
        lhs = _safe_eval_array(F, d)
        rhs = _safe_eval_array(F, dT)
        margin, _, _, count = kernels.min_margin_scan(lhs, rhs, eligible)
    if count == 0:
        raise NoEligiblePairs("T identifies every pair; any tau is admissible")
    return margin


def certify_phi_F(
    space: FiniteMetricSpace,
    T: SelfMap,
    phi: AuxFn,
    F: AuxFn,
    mode: str = "float",
    mu: float = DEFAULT_MARGIN,
) -> Verdict:
    """phi(d(x,y)) + F(d(Tx,Ty)) <= F(d(x,y)) over eligible pairs."""
    T.validate(space.n)
    if mode == "exact":
        phi_ev = exact_evaluator(phi)
        margin, wit, count = _exact_margin_scan(
            space, T, lambda d, dT, FdT, Fv: Fv(d) - FdT - phi_ev(d), F
        )
    else:
        d, dT, eligible = _float_pair_setup(space, T)
        lhs = _safe_eval_array(F, d)
        rhs = _safe_eval_array(F, dT) + _safe_eval_array(phi, d)
        margin, i, j, count = kernels.min_margin_scan(lhs, rhs, eligible)
        wit = (i, j, lhs[i, j], rhs[i, j]) if count else None
    return _margin_verdict("PhiF", margin, wit, count, mode, mu, strict=False)


def certify_EF(
    space: FiniteMetricSpace,
    T: SelfMap,
    E: AuxFn,
    F: AuxFn,
    mode: str = "float",
    mu: float = DEFAULT_MARGIN,
) -> Verdict:
    """F(d(Tx,Ty)) <= E(d(x,y)) over eligible pairs, under condition C1.

    C1 is enforced on the realized distance range before the pair scan,
    since the (E,F)-contraction definition assumes it.
    """
    T.validate(space.n)
    grid = _realized_distances(space, mode)
    c1 = check_C1(E, F, grid, mu=0.0 if mode == "exact" else mu)
    if c1.verdict != "pass":
        raise C1Violated(
            f"(E,F) fails C1 on the realized distances at {c1.witness}", witness=c1.witness
        )
    if mode == "exact":
        E_ev = exact_evaluator(E)
        margin, wit, count = _exact_margin_scan(
            space, T, lambda d, dT, FdT, Fv: E_ev(d) - FdT, F
        )
    else:
        d, dT, eligible = _float_pair_setup(space, T)
        lhs = _safe_eval_array(E, d)
        rhs = _safe_eval_array(F, dT)
        margin, i, j, count = kernels.min_margin_scan(lhs, rhs, eligible)
        wit = (i, j, lhs[i, j], rhs[i, j]) if count else None
    return _margin_verdict("EF", margin, wit, count, mode, mu, strict=False)


def meir_keeler_finite(
    space: FiniteMetricSpace,
    T: SelfMap,
    mode: str = "float",
    mu: float = DEFAULT_MARGIN,
) -> Verdict:
    """Audit the Meir-Keeler epsilon-delta condition on a finite space.

    Two independent computations, both reported and required to agree:
    (a) the direct audit groups pairs by realized distance s, assigns
    delta(s) = half the gap to the next larger realized distance (1 for
    the largest), and demands d(Tx,Ty) < s for every pair at distance s;
    (b) plain contractivity. On a finite space the two are equivalent;
    disagreement raises InternalInconsistency, in which case the direct
    audit would be the authoritative reading of the definition.
    """
    T.validate(space.n)
    contractive = is_contractive(space, T, mode=mode, mu=mu)
    audit_margin, audit_wit, count, min_delta = _direct_mk_audit(space, T, mode)
    status = classify(audit_margin, mode, mu, strict=True)
    if status != contractive.status:
        raise InternalInconsistency(
            f"direct audit says {status}, contractivity says {contractive.status}"
        )
    wit = None
    if status != PASS and audit_wit is not None:
        wit = Witness(audit_wit[0], audit_wit[1], float(audit_wit[2]), float(audit_wit[3]))
    return Verdict(
        "MeirKeelerFinite", status, margin=audit_margin, witness=wit,
        pairs_checked=count, mode=mode,
        details={
            "contractive_margin": None if contractive.margin is None else float(contractive.margin),
            "min_delta": float(min_delta) if min_delta is not None else None,
        },
    )


def _direct_mk_audit(space: FiniteMetricSpace, T: SelfMap, mode: str):
    """Distance-class audit; returns (margin, witness, pairs, min_delta)."""
    n = space.n
    if mode == "exact":
        if not space.exact:
            raise ShapeMismatch("exact mode needs rational coordinates")
        classes = {}
        for i in range(n):
            for j in range(i + 1, n):
                s = space.distance_exact(i, j)
                dT = space.distance_exact(T(i), T(j))
                cur = classes.get(s)
                if cur is None or dT > cur[2]:
                    classes[s] = (i, j, dT)
        svals = sorted(classes)
        deltas = [
            (b - a) / 2 for a, b in zip(svals, svals[1:])
        ] + [1]
        margin, wit = None, None
        for s in svals:
            i, j, dT = classes[s]
            m = s - dT
            if margin is None or m < margin:
                margin, wit = m, (i, j, s, dT)
        total = n * (n - 1) // 2
        return margin, wit, total, min(deltas) if deltas else None
    d = space.dist
    img = np.asarray(T.image)
    dT = d[np.ix_(img, img)]
    iu, ju = np.triu_indices(n, k=1)
    s_pairs = d[iu, ju]
    t_pairs = dT[iu, ju]
    order = np.argsort(s_pairs, kind="stable")
    s_sorted = s_pairs[order]
    t_sorted = t_pairs[order]
    uniq, starts = np.unique(s_sorted, return_index=True)
    max_t = np.maximum.reduceat(t_sorted, starts)
    margins = uniq - max_t
    cls = int(np.argmin(margins))
    # find the worst pair inside the worst class
    lo = starts[cls]
    hi = starts[cls + 1] if cls + 1 < len(starts) else len(s_sorted)
    local = lo + int(np.argmax(t_sorted[lo:hi]))
    pair_idx = order[local]
    wit = (int(iu[pair_idx]), int(ju[pair_idx]), float(s_sorted[local]), float(t_sorted[local]))
    gaps = np.diff(uniq) / 2.0
    min_delta = float(gaps.min()) if len(gaps) else 1.0
    return float(margins[cls]), wit, len(s_pairs), min_delta


# ---------------------------------------------------------------------------
# helpers


def _exact_margin_scan(space: FiniteMetricSpace, T: SelfMap, expr, F: AuxFn):
    """Min of expr(d, dT, F) over eligible pairs, in rational arithmetic.

    Pairs with T(i) == T(j) are skipped before any rational work, which is
    what keeps the large counterexample truncations fast.
    """
    if not space.exact:
        raise ShapeMismatch("exact mode needs rational coordinates")
    Fv = exact_evaluator(F)
    img = T.image
    n = space.n
    coords = space.coords
    img_dist = {}
    best = None
    wit = None
    count = 0
    for i in range(n):
        ti = img[i]
        ci = coords[i]
        for j in range(i + 1, n):
            tj = img[j]
            if ti == tj:
                continue
            count += 1
            key = (ti, tj) if ti < tj else (tj, ti)
            cached = img_dist.get(key)
            if cached is None:
                dT = coords[key[0]] - coords[key[1]]
                if dT < 0:
                    dT = -dT
                cached = (dT, Fv(dT))
                img_dist[key] = cached
            dT, FdT = cached
            d = ci - coords[j]
            if d < 0:
                d = -d
            m = expr(d, dT, FdT, Fv)
            if best is None or m < best:
                best = m
                wit = (i, j, d, dT)
    return best, wit, count


def _margin_verdict(condition, margin, wit, count, mode, mu, strict) -> Verdict:
    if count == 0:
        return Verdict(condition, PASS, margin=None, pairs_checked=0, mode=mode,
                       note="no eligible pairs (T identifies all points)")
    status = classify(margin, mode, mu, strict=strict)
    witness = None
    if status != PASS and wit is not None:
        witness = Witness(wit[0], wit[1], float(wit[2]), float(wit[3]))
    return Verdict(condition, status, margin=margin, witness=witness,
                   pairs_checked=count, mode=mode)


def _realized_distances(space: FiniteMetricSpace, mode: str):
    if mode == "exact":
        vals = set()
        for i in range(space.n):
            for j in range(i + 1, space.n):
                vals.add(space.distance_exact(i, j))
        return sorted(vals)
    d = space.dist
    iu, ju = np.triu_indices(space.n, k=1)
    return sorted(set(d[iu, ju].tolist()))
