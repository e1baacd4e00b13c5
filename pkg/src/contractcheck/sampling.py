"""Seeded generators of random finite spaces and self-maps.

Points are sampled on the real line so the metric axioms hold by
construction; every generator takes a numpy Generator so reports can
record the seed and reproduce the run byte for byte.
"""

from __future__ import annotations

import numpy as np

from .metric import FiniteMetricSpace, SelfMap


def random_line_space(rng: np.random.Generator, n: int,
                      low: float = -10.0, high: float = 10.0) -> FiniteMetricSpace:
    """n distinct uniform points on [low, high]."""
    while True:
        pts = rng.uniform(low, high, size=n)
        if len(np.unique(pts)) == n:
            return FiniteMetricSpace.induced_from_reals(pts.tolist())


def random_self_map(rng: np.random.Generator, n: int) -> SelfMap:
    return SelfMap(rng.integers(0, n, size=n).tolist())


def random_banach_map(rng: np.random.Generator, n_orbit: int = None):
    """A space and map with a known Lipschitz constant below 1.

    The points are an orbit of the affine contraction x -> lam*x + c plus
    its fixed point, and T shifts along the orbit. Pairs of orbit points
    contract by exactly lam; pairs with the tail point reach the ratio
    lam / (1 - lam), which is the returned Lipschitz constant. lam is
    capped below 0.45 so that constant stays below 1.
    """
    if n_orbit is None:
        n_orbit = int(rng.integers(3, 9))
    lam = float(rng.uniform(0.3, 0.45))
    c = float(rng.uniform(-5.0, 5.0))
    fix = c / (1.0 - lam)
    x0 = fix + float(rng.uniform(0.5, 5.0)) * (1 if rng.random() < 0.5 else -1)
    pts = [x0]
    for _ in range(n_orbit - 1):
        pts.append(lam * pts[-1] + c)
    pts.append(fix)
    space = FiniteMetricSpace.induced_from_reals(pts)
    last = len(pts) - 1
    image = list(range(1, len(pts))) + [last]
    return space, SelfMap(image), lam / (1.0 - lam)


def random_ef_instance(rng: np.random.Generator):
    """A space and map designed to satisfy the (0.7*F, F) contraction with
    F the non-monotone rational example function.

    Spread points (pairwise distance >= 3) map bijectively into a tight
    cluster (gaps in [0.7, 1.6], where F stays near its minimum), and the
    cluster collapses to its first point, which is fixed.
    """
    u, v = rng.uniform(0.0, 1.0, size=2)
    spread = [0.0, 3.0 + u, 6.0 + u + v + 3.0 * rng.uniform(0, 0.3)]
    base = 13.0 + rng.uniform(0.0, 1.0)
    a = rng.uniform(0.75, 0.8)
    cluster = [base, base + a, base + a + rng.uniform(0.75, 0.8)]
    pts = spread + cluster
    space = FiniteMetricSpace.induced_from_reals(pts)
    n_s = len(spread)
    image = []
    for i in range(len(pts)):
        if i < n_s:
            image.append(n_s + i)  # spread -> cluster, bijectively
        else:
            image.append(n_s)  # cluster -> its first point
    return space, SelfMap(image)
