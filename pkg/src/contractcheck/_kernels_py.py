"""Pure-numpy implementations of the hot pair/triple scans.

Same contracts as the compiled extension in _kernels_cy.pyx; the dispatch
module picks whichever is available. Witness indices are deterministic:
first occurrence of the extremal value in row-major pair order.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def min_margin_scan(lhs, rhs, eligible):
    """Min of lhs-rhs over eligible unordered pairs i<j.

    Returns (margin, i, j, count); (inf, -1, -1, 0) when no pair is eligible.
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = lhs.shape[0]
    mask = np.asarray(eligible, dtype=bool) & np.triu(np.ones((n, n), dtype=bool), k=1)
    count = int(mask.sum())
    if count == 0:
        return math.inf, -1, -1, 0
    margins = np.where(mask, lhs - rhs, np.inf)
    flat = int(np.argmin(margins))
    i, j = divmod(flat, n)
    return float(margins[i, j]), i, j, count


def max_ratio_scan(dist, image):
    """Max of dist[T i, T j] / dist[i, j] over pairs i<j.

    Returns (ratio, i, j); (-inf, -1, -1) for n < 2.
    """
    dist = np.asarray(dist, dtype=float)
    image = np.asarray(image, dtype=np.int64)
    n = dist.shape[0]
    if n < 2:
        return -math.inf, -1, -1
    mask = np.triu(np.ones((n, n), dtype=bool), k=1)
    num = dist[np.ix_(image, image)]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(mask, num / dist, -np.inf)
    flat = int(np.argmax(ratios))
    i, j = divmod(flat, n)
    return float(ratios[i, j]), i, j


def triangle_scan(dist, tol):
    """Worst triangle-inequality slack over ordered triples (i, k, j).

    Slack of a triple is dist[i,j] + dist[j,k] - dist[i,k]; the metric is
    valid iff the minimum slack >= -tol. Returns (ok, i, j, k, worst).
    """
    dist = np.asarray(dist, dtype=float)
    n = dist.shape[0]
    worst = math.inf
    wi = wj = wk = -1
    for i in range(n):
        # slack[j, k] = d(i,j) + d(j,k) - d(i,k)
        slack = dist[i][:, None] + dist - dist[i][None, :]
        flat = int(np.argmin(slack))
        j, k = divmod(flat, n)
        if slack[j, k] < worst:
            worst = float(slack[j, k])
            wi, wj, wk = i, j, k
    ok = 1 if worst >= -tol else 0
    return ok, wi, wj, wk, worst
