"""The F-contraction-but-not-Meir-Keeler counterexample family.

Given a nondecreasing F with a right jump at t0, builds the countable
real-line space A u B with A = {0, t0, k, 2k, ...}, B = {km + t0 + g_m},
k = floor(2 t0) + 1, and the map sending A to 0 and B to t0. Truncations
are verified exhaustively; the Meir-Keeler failure at epsilon = t0 is
produced as an explicit witness pair for any challenged delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .auxfn import AuxFn, CheckEntry, check_strictly_increasing, estimate_right_limit
from .certify import certify_F_contraction
from .errors import NoRightJump, NotNondecreasing, PointCollision, ShapeMismatch
from .metric import FiniteMetricSpace, SelfMap
from .rational import as_fraction, is_rational, rat, rat_str
from .verdict import Verdict


@dataclass(frozen=True)
class CounterexampleFamily:
    """Parameters of the construction; gamma is a pluggable schedule."""

    F: AuxFn
    t0: object  # rational (exact) or float
    tau: object
    k: int
    gamma: Callable[[int], object]
    exact: bool

    def gamma_at(self, m: int):
        g = self.gamma(m)
        cap = self.k - 2 * self.t0
        if not 0 < g < cap:
            raise ShapeMismatch(f"gamma_{m} = {g} outside (0, {cap})")
        return g

    def describe(self):
        return {
            "F": self.F.describe(),
            "t0": float(self.t0),
            "tau": float(self.tau),
            "k": self.k,
            "exact": self.exact,
        }


@dataclass
class MKWitness:
    """A pair falsifying the Meir-Keeler condition at epsilon = t0."""

    delta: object
    n: int
    x: object  # = k n
    y: object  # = k n + t0 + gamma_n
    d_xy: object
    d_Txy: object
    epsilon: object

    def to_json(self):
        out = {
            "delta": float(self.delta),
            "n": self.n,
            "x": float(self.x),
            "y": float(self.y),
            "d_xy": float(self.d_xy),
            "d_Txy": float(self.d_Txy),
            "epsilon": float(self.epsilon),
        }
        if is_rational(self.y):
            out["y_exact"] = rat_str(self.y)
            out["d_xy_exact"] = rat_str(self.d_xy)
        return out


def default_gamma(k: int, t0):
    """gamma_m = (k - 2 t0) / (2 m): strictly decreasing to 0, below k - 2 t0."""
    cap = k - 2 * t0

    def gamma(m: int):
        return cap / (2 * m)

    return gamma


def build_family(
    F: AuxFn,
    t0,
    gamma: Optional[Callable[[int], object]] = None,
    mu: float = 1e-12,
) -> CounterexampleFamily:
    """Validate the hypotheses and assemble the family parameters.

    F must be nondecreasing (checked on a grid around t0) with a right
    jump at t0. The jump is computed exactly for step/table families.
    """
    exact = F.exact_capable and is_rational(t0)
    grid = [float(t0) * (0.25 + 0.025 * i) for i in range(101)]  # 0.25 t0 .. 2.75 t0
    mono = check_strictly_increasing(F, grid, strict=False)
    if mono.verdict != "pass":
        raise NotNondecreasing(
            f"F is not nondecreasing near t0: {mono.witness}", witness=mono.witness
        )
    jump = estimate_right_limit(F, t0)
    tau = jump.tau
    if not jump.exact:
        # numeric estimates bottom out at the smallest probe offset, so a
        # continuous F can report tau ~ 1e-10; gate well above that
        mu = max(mu, 1e-6)
    if not tau > mu:
        raise NoRightJump(f"F has no right jump at {t0} (tau estimate {float(tau):.3g})")
    k = int(math.floor(2 * as_fraction(t0))) + 1 if exact else math.floor(2 * float(t0)) + 1
    if gamma is None:
        gamma = default_gamma(k, t0 if exact else float(t0))
    fam = CounterexampleFamily(F=F, t0=t0, tau=tau, k=k, gamma=gamma, exact=exact)
    fam.gamma_at(1)  # schedule sanity
    if not fam.gamma_at(2) < fam.gamma_at(1):
        raise ShapeMismatch("gamma schedule must be strictly decreasing")
    return fam


def enumerate_points(fam: CounterexampleFamily, N: int):
    """Truncation X_N with its self-map; labels record A/B provenance."""
    if N < 1:
        raise ShapeMismatch("N must be >= 1")
    zero = rat(0) if fam.exact else 0.0
    a_pts = [zero, fam.t0] + [fam.k * n for n in range(1, N + 1)]
    a_labels = ["A:0", "A:t0"] + [f"A:x{n}" for n in range(1, N + 1)]
    b_pts = [fam.k * m + fam.t0 + fam.gamma_at(m) for m in range(1, N + 1)]
    b_labels = [f"B:y{m}" for m in range(1, N + 1)]
    a_set = {float(p) for p in a_pts}
    for p in b_pts:
        if float(p) in a_set:
            raise PointCollision(f"B point {p} collides with A")
    space = FiniteMetricSpace.induced_from_reals(a_pts + b_pts, a_labels + b_labels)
    n_a = len(a_pts)
    image = [0] * n_a + [1] * len(b_pts)  # A -> 0, B -> t0
    return space, SelfMap(image)


def audit_distance_claims(fam: CounterexampleFamily, N: int):
    """Check the construction's five distance inequalities on X_N.

    Claims (all with x_n = kn, y_m = km + t0 + gamma_m):
      1. d(y_n, x_n) = t0 + gamma_n > t0
      2. d(y_m, 0)  = km + t0 + gamma_m > t0
      3. d(y_m, t0) = km + gamma_m > k > 2 t0
      4. d(x_n, y_m) >= k - t0 - gamma_m > t0   for m <= n-1
      5. d(y_m, x_n) >= k + t0 + gamma_m > t0   for m >= n+1
    Each entry records the tightest instance; for claim 4 the stated lower
    bound is attained with equality at m = n-1, which is recorded too.
    """
    if N < 1:
        raise ShapeMismatch("N must be >= 1")
    t0, k = fam.t0, fam.k
    g = [None] + [fam.gamma_at(m) for m in range(1, N + 1)]
    entries = []

    worst = min(range(1, N + 1), key=lambda n: g[n])
    entries.append(CheckEntry(
        "claim1", "pass" if all(g[n] > 0 for n in range(1, N + 1)) else "fail",
        witness=(worst,), margin=float(g[worst]),
        note="d(y_n, x_n) - t0 = gamma_n",
    ))
    m2 = min(range(1, N + 1), key=lambda m: k * m + t0 + g[m] - t0)
    entries.append(CheckEntry(
        "claim2", "pass", witness=(m2,), margin=float(k * m2 + g[m2]),
        note="d(y_m, 0) - t0",
    ))
    ok3 = all(k * m + g[m] > k and k > 2 * t0 for m in range(1, N + 1))
    m3 = min(range(1, N + 1), key=lambda m: k * m + g[m] - k)
    entries.append(CheckEntry(
        "claim3", "pass" if ok3 else "fail", witness=(m3,),
        margin=float(min(k * m3 + g[m3] - k, k - 2 * t0)),
        note="min(d(y_m, t0) - k, k - 2 t0)",
    ))
    if N < 2:
        entries.append(CheckEntry("claim4", "pass", note="vacuous at N=1"))
        entries.append(CheckEntry("claim5", "pass", note="vacuous at N=1"))
        return entries
    tight4 = None
    equality_seen = False
    ok4 = True
    for n in range(2, N + 1):
        for m in range(1, n):
            d = k * n - (k * m + t0 + g[m])
            bound = k - t0 - g[m]
            if d < bound or not bound > t0:
                ok4 = False
            if d == bound:
                equality_seen = True
            slack = d - t0
            if tight4 is None or slack < tight4[0]:
                tight4 = (slack, n, m)
    entries.append(CheckEntry(
        "claim4", "pass" if ok4 else "fail", witness=tight4[1:],
        margin=float(tight4[0]),
        note="tightest d(x_n, y_m) - t0; bound attained with equality at m = n-1"
        if equality_seen else "tightest d(x_n, y_m) - t0",
    ))
    tight5 = None
    ok5 = True
    for n in range(1, N):
        for m in range(n + 1, N + 1):
            d = k * m + t0 + g[m] - k * n
            bound = k + t0 + g[m]
            if d < bound or not bound > t0:
                ok5 = False
            slack = d - t0
            if tight5 is None or slack < tight5[0]:
                tight5 = (slack, n, m)
    entries.append(CheckEntry(
        "claim5", "pass" if ok5 else "fail", witness=tight5[1:],
        margin=float(tight5[0]), note="tightest d(y_m, x_n) - t0",
    ))
    return entries


def verify_family_F_contraction(
    fam: CounterexampleFamily, N: int, mu: float = 1e-12
) -> Verdict:
    """Certify the contraction inequality on X_N with the family's tau.

    Also verifies the structural fact that every eligible pair is a cross
    pair (one point in A, one in B) at distance > t0, which is what makes
    the jump inequality applicable.
    """
    space, T = enumerate_points(fam, N)
    mode = "exact" if fam.exact else "float"
    n_a = N + 2
    for i in range(space.n):
        for j in range(i + 1, space.n):
            cross = (i < n_a) != (j < n_a)
            eligible = T(i) != T(j)
            if cross != eligible:
                raise ShapeMismatch(
                    f"pair ({i},{j}): cross={cross} but eligible={eligible}"
                )
    if fam.exact:
        dmin = None
        for i in range(n_a):
            for j in range(n_a, space.n):
                d = space.distance_exact(i, j)
                if dmin is None or d < dmin:
                    dmin = d
        if not dmin > fam.t0:
            raise ShapeMismatch(f"cross pair at distance {dmin} <= t0")
    verdict = certify_F_contraction(space, T, fam.F, fam.tau, mode=mode, mu=mu)
    verdict.details["N"] = N
    verdict.details["points"] = space.n
    return verdict


def mk_falsification_witness(fam: CounterexampleFamily, delta) -> MKWitness:
    """Smallest n with gamma_n < delta, and the pair (x_n, y_n) at
    distance t0 + gamma_n inside (t0, t0 + delta) whose image pair sits
    at distance exactly t0 = epsilon."""
    if not delta > 0:
        raise ShapeMismatch("delta must be positive")
    if fam.exact and not is_rational(delta):
        raise ShapeMismatch("exact family needs a rational delta")
    n = 1
    while not fam.gamma_at(n) < delta:
        n += 1
    g = fam.gamma_at(n)
    x = fam.k * n
    y = fam.k * n + fam.t0 + g
    d_xy = fam.t0 + g
    d_Txy = fam.t0  # images are 0 and t0
    if not (fam.t0 < d_xy < fam.t0 + delta):
        raise ShapeMismatch("witness distance escaped (t0, t0 + delta)")
    if not d_Txy >= fam.t0:
        raise ShapeMismatch("witness image distance fell below epsilon")
    return MKWitness(delta=delta, n=n, x=x, y=y, d_xy=d_xy, d_Txy=d_Txy, epsilon=fam.t0)
