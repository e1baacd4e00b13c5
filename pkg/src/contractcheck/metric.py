"""Finite metric spaces, self-maps, and the Picard iteration engine."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DuplicatePoint, ShapeMismatch, TooFewPoints
from .rational import as_fraction, is_rational, rat, rat_str
from .verdict import FAIL, PASS, Verdict, Witness, classify

DEFAULT_MARGIN = 1e-12
TRIANGLE_GATE = 2000  # O(n^3) scan needs an explicit opt-in above this size


class FiniteMetricSpace:
    """Labeled points with a distance matrix.

    Spaces induced from real coordinates keep the coordinates (possibly
    exact rationals); the float distance matrix is materialized lazily.
    """

    def __init__(self, labels: Sequence[str], dist=None, coords=None):
        self.labels = list(labels)
        self.coords = None if coords is None else list(coords)
        if dist is None and coords is None:
            raise ShapeMismatch("need a distance matrix or coordinates")
        if dist is not None:
            dist = np.asarray(dist, dtype=float)
            if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
                raise ShapeMismatch("distance matrix must be square")
            if dist.shape[0] != len(self.labels):
                raise ShapeMismatch("distance matrix does not match label count")
        if coords is not None and len(self.coords) != len(self.labels):
            raise ShapeMismatch("coordinates do not match label count")
        self._dist = dist

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def exact(self) -> bool:
        """True when exact-rational pair distances are available."""
        return self.coords is not None and all(is_rational(c) for c in self.coords)

    @property
    def dist(self) -> np.ndarray:
        if self._dist is None:
            c = np.asarray([float(x) for x in self.coords], dtype=float)
            self._dist = np.abs(c[:, None] - c[None, :])
        return self._dist

    def distance(self, i: int, j: int) -> float:
        if self._dist is not None:
            return float(self._dist[i, j])
        return abs(float(self.coords[i]) - float(self.coords[j]))

    def distance_exact(self, i: int, j: int):
        d = self.coords[i] - self.coords[j]
        return -d if d < 0 else d

    @classmethod
    def induced_from_reals(cls, points, labels=None) -> "FiniteMetricSpace":
        """Subspace of the real line; points may be floats or rationals."""
        points = list(points)
        seen = {}
        for idx, p in enumerate(points):
            key = float(p)
            if key in seen:
                raise DuplicatePoint(f"points {seen[key]} and {idx} coincide at {p}")
            seen[key] = idx
        if labels is None:
            labels = [str(p) for p in points]
        return cls(labels, coords=points)

    def to_json(self):
        out = {"labels": self.labels, "dist": self.dist.tolist()}
        if self.coords is not None:
            out["coords"] = [float(c) for c in self.coords]
            if self.exact:
                out["coords_exact"] = [rat_str(c) for c in self.coords]
        return out

    @classmethod
    def from_json(cls, data) -> "FiniteMetricSpace":
        coords = None
        if "coords_exact" in data:
            coords = [rat(s) for s in data["coords_exact"]]
        elif "coords" in data:
            coords = list(data["coords"])
        return cls(data["labels"], dist=data.get("dist"), coords=coords)


@dataclass
class SelfMap:
    """T: X -> X given by image indices (image[i] = index of T(point i))."""

    image: list

    def __post_init__(self):
        self.image = [int(i) for i in self.image]

    def validate(self, n: int) -> None:
        for i, t in enumerate(self.image):
            if not 0 <= t < n:
                raise ShapeMismatch(f"image of point {i} is {t}, outside [0, {n})")

    def __call__(self, i: int) -> int:
        return self.image[i]

    def to_json(self):
        return {"image": self.image}

    @classmethod
    def from_json(cls, data) -> "SelfMap":
        return cls(list(data["image"]))


@dataclass
class PicardTrace:
    """An orbit x, Tx, T^2 x, ... with consecutive-step distances."""

    iterates: list
    step_distances: list
    termination: str  # "fixed-point" | "tolerance" | "max-iterations"
    cycle: bool = False
    fixed_points: Optional[list] = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["iteration", "point", "step_distance"])
        for idx, x in enumerate(self.iterates):
            step = "" if idx == 0 else repr(float(self.step_distances[idx - 1]))
            writer.writerow([idx, x, step])
        return buf.getvalue()

    def to_json(self):
        return {
            "iterates": [x if isinstance(x, (int, str)) else float(x) for x in self.iterates],
            "step_distances": [float(s) for s in self.step_distances],
            "termination": self.termination,
            "cycle": self.cycle,
            "fixed_points": self.fixed_points,
        }


# ---------------------------------------------------------------------------


def validate_metric(
    space: FiniteMetricSpace,
    tol: float = 0.0,
    force_triangle: bool = False,
) -> Verdict:
    """Check the four metric axioms, with slack tol on the triangle inequality.

    Spaces induced from real coordinates satisfy the axioms by construction,
    so the O(n^3) triangle scan is skipped for them and for n > 2000 unless
    forced.
    """
    d = space.dist
    n = space.n
    diag = np.abs(np.diag(d))
    if diag.max(initial=0.0) > tol:
        i = int(np.argmax(diag))
        return Verdict("MetricAxioms", FAIL, margin=-float(diag[i]),
                       witness=Witness(i, i, float(d[i, i]), 0.0),
                       note="nonzero self-distance")
    asym = np.abs(d - d.T)
    if asym.max(initial=0.0) > tol:
        flat = int(np.argmax(asym))
        i, j = divmod(flat, n)
        return Verdict("MetricAxioms", FAIL, margin=-float(asym[i, j]),
                       witness=Witness(i, j, float(d[i, j]), float(d[j, i])),
                       note="symmetry violated")
    off = d + np.eye(n)
    if off.min(initial=math.inf) <= 0.0:
        flat = int(np.argmin(off))
        i, j = divmod(flat, n)
        return Verdict("MetricAxioms", FAIL, margin=float(d[i, j]),
                       witness=Witness(i, j, float(d[i, j]), 0.0),
                       note="distinct points at distance <= 0")
    note = ""
    worst = math.inf
    if space.coords is not None and not force_triangle:
        note = "triangle inequality holds by construction (real-line subspace)"
    elif n > TRIANGLE_GATE and not force_triangle:
        note = f"triangle scan skipped for n={n} > {TRIANGLE_GATE}; pass force_triangle=True"
    else:
        ok, i, j, k, worst = kernels.triangle_scan(d, tol)
        if not ok:
            return Verdict("MetricAxioms", FAIL, margin=worst,
                           witness=Witness(i, k, float(d[i, k]),
                                           float(d[i, j] + d[j, k]), k=j),
                           note="triangle inequality violated via intermediate k")
    return Verdict("MetricAxioms", PASS, margin=None if worst is math.inf else worst,
                   note=note)


def lipschitz_constant(space: FiniteMetricSpace, T: SelfMap) -> float:
    """Smallest Lipschitz constant of T: max d(Tx,Ty)/d(x,y) over pairs."""
    if space.n < 2:
        raise TooFewPoints("Lipschitz constant needs at least 2 points")
    T.validate(space.n)
    ratio, _, _ = kernels.max_ratio_scan(space.dist, np.asarray(T.image))
    return ratio


def is_contractive(
    space: FiniteMetricSpace,
    T: SelfMap,
    mode: str = "float",
    mu: float = DEFAULT_MARGIN,
) -> Verdict:
    """d(Tx,Ty) < d(x,y) for every pair of distinct points."""
    if space.n < 2:
        raise TooFewPoints("contractivity needs at least 2 points")
    T.validate(space.n)
    if mode == "exact":
        return _exact_contractive(space, T)
    d = space.dist
    img = np.asarray(T.image)
    lhs = d
    rhs = d[np.ix_(img, img)]
    eligible = ~np.eye(space.n, dtype=bool)
    margin, i, j, count = kernels.min_margin_scan(lhs, rhs, eligible.astype(np.uint8))
    status = classify(margin, "float", mu, strict=True)
    wit = None if status == PASS else Witness(i, j, float(d[i, j]), float(rhs[i, j]))
    return Verdict("Contractive", status, margin=margin, witness=wit,
                   pairs_checked=count, mode="float")


def _exact_contractive(space: FiniteMetricSpace, T: SelfMap) -> Verdict:
    if not space.exact:
        raise ShapeMismatch("exact mode needs rational coordinates")
    n = space.n
    best = None
    wit = None
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            count += 1
            d = space.distance_exact(i, j)
            dT = space.distance_exact(T(i), T(j))
            m = d - dT
            if best is None or m < best:
                best = m
                wit = (i, j, d, dT)
    status = classify(best, "exact", 0.0, strict=True)
    witness = None if status == PASS else Witness(wit[0], wit[1], float(wit[2]), float(wit[3]))
    return Verdict("Contractive", status, margin=best, witness=witness,
                   pairs_checked=count, mode="exact")


def brute_force_fixed_points(space: FiniteMetricSpace, T: SelfMap) -> list:
    """Exhaustive scan for T(i) == i."""
    T.validate(space.n)
    return [i for i in range(space.n) if T(i) == i]


def picard_iterate(
    space: FiniteMetricSpace,
    T: SelfMap,
    start: int,
    max_iter: Optional[int] = None,
) -> PicardTrace:
    """Orbit of a point under T on a finite space.

    Always terminates: either an exact fixed point is hit or a cycle is
    detected within n steps. The full fixed-point set (by exhaustive scan)
    rides along for cross-validation.
    """
    T.validate(space.n)
    limit = space.n + 1 if max_iter is None else max_iter
    iterates = [start]
    steps = []
    seen = {start}
    termination = "max-iterations"
    cycle = False
    x = start
    for _ in range(limit):
        nxt = T(x)
        iterates.append(nxt)
        steps.append(space.distance(x, nxt))
        if nxt == x:
            termination = "fixed-point"
            break
        if nxt in seen:
            cycle = True
            termination = "max-iterations"
            break
        seen.add(nxt)
        x = nxt
    return PicardTrace(iterates, steps, termination, cycle=cycle,
                       fixed_points=brute_force_fixed_points(space, T))


def picard_iterate_real(
    f,
    x0: float,
    atol: float = 1e-9,
    max_iter: int = 10_000,
) -> PicardTrace:
    """Picard iteration of a real self-map with the absolute-value metric."""
    iterates = [float(x0)]
    steps = []
    termination = "max-iterations"
    x = float(x0)
    for _ in range(max_iter):
        nxt = float(f(x))
        step = abs(nxt - x)
        iterates.append(nxt)
        steps.append(step)
        x = nxt
        if step == 0.0:
            termination = "fixed-point"
            break
        if step < atol:
            termination = "tolerance"
            break
    return PicardTrace(iterates, steps, termination)
