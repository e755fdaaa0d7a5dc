"""Monotone maps, periodic orbits, order-interval traps, boundary probes.

Maps are affine homeomorphisms (linear, affine, or compositions) tied to a
cone and an open domain.  On top of them: monotonicity certificates, orbit
iteration with domain tracking, minimal-period detection, the periodic
sandwich y << x << z, the invariant order-interval trap around a periodic
point, and the boundary-density probe that pins a periodic point onto the
cone boundary near a given one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cones import (
    GEOM_TOL,
    POLYHEDRAL,
    ConeRep,
    Location,
    Order,
    StateSpace,
    as_vector,
    interval_radius,
    locate,
    lorentz,
    order_relation,
    orthant,
    sample_cone,
    support_margin,
    _freeze,
)
from .errors import (
    BadParams,
    LeftDomain,
    LocatorFailed,
    NotMonotone,
    NotSandwiched,
    PeriodOverflow,
    SearchExhausted,
    SqueezeFailed,
)

LCM_CAP = 2 ** 62

WHOLE = "whole"
BOX = "box"
BALL = "ball"


def lcm_capped(values) -> int:
    """Least common multiple, erroring out instead of growing past 2^62."""
    r = 1
    for v in values:
        v = int(v)
        if v < 1:
            raise BadParams("periods must be positive integers")
        r = math.lcm(r, v)
        if r > LCM_CAP:
            raise PeriodOverflow(f"lcm exceeds {LCM_CAP}")
    return r


# ------------------------------------------------------------------- domains

@dataclass(frozen=True)
class DomainSpec:
    """An open connected domain: the whole space, an open box, or a ball."""

    kind: str
    dim: int
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    center: np.ndarray | None = None
    radius: float | None = None

    def contains(self, x) -> bool:
        x = as_vector(x, self.dim)
        if self.kind == WHOLE:
            return True
        if self.kind == BOX:
            return bool(np.all(x > self.lo) and np.all(x < self.hi))
        return float(np.linalg.norm(x - self.center)) < self.radius

    def max_step(self, x, direction) -> float:
        """sup of t with x + s*direction inside for all s in [0, t]."""
        x = as_vector(x, self.dim)
        v = as_vector(direction, self.dim)
        if self.kind == WHOLE:
            return np.inf
        if self.kind == BOX:
            t = np.inf
            for i in range(self.dim):
                if v[i] > 0:
                    t = min(t, (self.hi[i] - x[i]) / v[i])
                elif v[i] < 0:
                    t = min(t, (self.lo[i] - x[i]) / v[i])
            return max(t, 0.0)
        # ball: quadratic ||x + t v - c||^2 = r^2
        w = x - self.center
        a = float(v @ v)
        b = float(w @ v)
        c = float(w @ w) - self.radius ** 2
        disc = b * b - a * c
        if disc <= 0 or a == 0:
            return 0.0
        return max((-b + np.sqrt(disc)) / a, 0.0)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == WHOLE:
            return rng.standard_normal((n, self.dim))
        if self.kind == BOX:
            return self.lo + rng.random((n, self.dim)) * (self.hi - self.lo)
        raw = rng.standard_normal((n, self.dim))
        raw /= np.linalg.norm(raw, axis=1)[:, None]
        r = self.radius * rng.random(n) ** (1.0 / self.dim)
        return self.center + raw * r[:, None]

    def shifted(self, dx) -> "DomainSpec":
        dx = as_vector(dx, self.dim)
        if self.kind == WHOLE:
            return self
        if self.kind == BOX:
            return DomainSpec(BOX, self.dim, lo=_freeze(self.lo + dx),
                              hi=_freeze(self.hi + dx))
        return DomainSpec(BALL, self.dim, center=_freeze(self.center + dx),
                          radius=self.radius)


def whole_space(dim: int) -> DomainSpec:
    return DomainSpec(WHOLE, dim)


def open_box(lo, hi) -> DomainSpec:
    lo = as_vector(lo)
    hi = as_vector(hi, lo.shape[0])
    if np.any(hi <= lo):
        raise BadParams("box needs lo < hi componentwise")
    return DomainSpec(BOX, lo.shape[0], lo=_freeze(lo), hi=_freeze(hi))


def open_ball(center, radius: float) -> DomainSpec:
    center = as_vector(center)
    if radius <= 0:
        raise BadParams("ball needs a positive radius")
    return DomainSpec(BALL, center.shape[0], center=_freeze(center),
                      radius=float(radius))


# ---------------------------------------------------------------------- maps

LINEAR = "linear"
AFFINE = "affine"
COMPOSITION = "composition"


@dataclass(frozen=True)
class MapSpec:
    """An invertible affine map of a domain, monotone w.r.t. a cone.

    Compositions apply their parts in list order.  The inverse matrix is
    precomputed; all fields are immutable so values are freely shareable.
    """

    kind: str
    cone: ConeRep
    domain: DomainSpec
    matrix: np.ndarray | None = None
    offset: np.ndarray | None = None
    parts: tuple["MapSpec", ...] = ()
    inv_matrix: np.ndarray | None = None

    def effective_affine(self) -> tuple[np.ndarray, np.ndarray]:
        """The combined (A, b) with map(x) = A x + b."""
        if self.kind != COMPOSITION:
            b = self.offset if self.offset is not None else np.zeros(self.cone.dim)
            return self.matrix, b
        a = np.eye(self.cone.dim)
        b = np.zeros(self.cone.dim)
        for part in self.parts:
            pa, pb = part.effective_affine()
            a = pa @ a
            b = pa @ b + pb
        return a, b

    def apply(self, x) -> np.ndarray:
        x = as_vector(x, self.cone.dim)
        if self.kind == COMPOSITION:
            for part in self.parts:
                x = part.apply(x)
            return x
        y = self.matrix @ x
        if self.offset is not None:
            y = y + self.offset
        return y

    def apply_inverse(self, x) -> np.ndarray:
        x = as_vector(x, self.cone.dim)
        if self.kind == COMPOSITION:
            for part in reversed(self.parts):
                x = part.apply_inverse(x)
            return x
        if self.offset is not None:
            x = x - self.offset
        return self.inv_matrix @ x


def _check_invertible(a: np.ndarray) -> np.ndarray:
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise BadParams("map matrix is numerically singular")
    return np.linalg.inv(a)


def linear_map(a, cone: ConeRep, domain: DomainSpec | None = None) -> MapSpec:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.shape != (cone.dim, cone.dim):
        raise BadParams(f"matrix must be {cone.dim}x{cone.dim}")
    domain = domain if domain is not None else whole_space(cone.dim)
    return MapSpec(LINEAR, cone, domain, matrix=_freeze(a),
                   inv_matrix=_freeze(_check_invertible(a)))


def affine_map(a, b, cone: ConeRep, domain: DomainSpec | None = None) -> MapSpec:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = as_vector(b, cone.dim)
    if a.shape != (cone.dim, cone.dim):
        raise BadParams(f"matrix must be {cone.dim}x{cone.dim}")
    domain = domain if domain is not None else whole_space(cone.dim)
    return MapSpec(AFFINE, cone, domain, matrix=_freeze(a), offset=_freeze(b),
                   inv_matrix=_freeze(_check_invertible(a)))


def compose_maps(parts) -> MapSpec:
    parts = tuple(parts)
    if not parts:
        raise BadParams("composition needs at least one map")
    cone = parts[0].cone
    for p in parts:
        if p.cone.dim != cone.dim:
            raise BadParams("composition parts disagree on dimension")
    return MapSpec(COMPOSITION, cone, parts[0].domain, parts=parts)


def conjugate_by_translation(f: MapSpec, x) -> MapSpec:
    """The map g(v) = f(v + x) - x on the shifted domain.

    Certifying x for f is the same as certifying the origin for g; the
    conjugation is applied part by part so compositions keep their shape.
    """
    x = as_vector(x, f.cone.dim)
    if f.kind == COMPOSITION:
        return MapSpec(COMPOSITION, f.cone, f.domain.shifted(-x),
                       parts=tuple(conjugate_by_translation(p, x) for p in f.parts))
    b = f.offset if f.offset is not None else np.zeros(f.cone.dim)
    nb = f.matrix @ x + b - x
    return MapSpec(AFFINE, f.cone, f.domain.shifted(-x), matrix=f.matrix,
                   offset=_freeze(nb), inv_matrix=f.inv_matrix)


# ------------------------------------------------------------- monotonicity

@dataclass(frozen=True)
class MonotoneCertificate:
    mode: str                       # "exact" or "sampled"
    checked: int
    detail: str = ""


def verify_monotone(f: MapSpec, n: int = 256, seed: int = 0,
                    tol: float = GEOM_TOL) -> MonotoneCertificate:
    """Certify that the map preserves the cone order.

    An affine map is monotone iff its linear part maps the cone into
    itself.  Polyhedral cones admit the exact generator check; otherwise
    n sampled cone directions are pushed through the linear part.
    """
    a, _ = f.effective_affine()
    if f.cone.kind == POLYHEDRAL:
        for g in f.cone.generators:
            if locate(f.cone, a @ g, tol) is Location.OUTSIDE:
                raise NotMonotone("linear part maps a generator out of the cone",
                                  witness=g.copy())
        return MonotoneCertificate("exact", len(f.cone.generators))
    rng = np.random.default_rng(seed)
    dirs = sample_cone(f.cone, rng, n)
    for c in dirs:
        if locate(f.cone, a @ c, tol) is Location.OUTSIDE:
            raise NotMonotone("linear part maps a cone direction outside",
                              witness=c.copy())
    return MonotoneCertificate("sampled", n)


def check_domain_self_map(f: MapSpec, n: int = 64, seed: int = 0) -> None:
    """Sampled check that the map sends its domain into itself."""
    rng = np.random.default_rng(seed)
    for x in f.domain.sample(rng, n):
        if not f.domain.contains(f.apply(x)):
            raise BadParams("map does not send its domain into itself")


# ------------------------------------------------------------------- orbits

@dataclass(frozen=True)
class OrbitRecord:
    """An orbit probe: base point, detected minimal period (if any), the
    residual at that period, and the stored iterates."""

    base: np.ndarray
    period: int | None
    residual: float
    iterates: np.ndarray            # rows f^k(base), k = 0..len-1

    @property
    def is_periodic(self) -> bool:
        return self.period is not None


def iterate(f: MapSpec, x, n: int) -> np.ndarray:
    """f^n(x) for any integer n; negative n runs the inverse."""
    x = as_vector(x, f.cone.dim)
    if not f.domain.contains(x):
        raise LeftDomain(0, point=x.copy())
    step = f.apply if n >= 0 else f.apply_inverse
    for k in range(abs(int(n))):
        x = step(x)
        if not f.domain.contains(x):
            raise LeftDomain(k + 1, point=x.copy())
    return x


def detect_period(f: MapSpec, x, max_p: int = 64,
                  tol: float = 1e-9) -> OrbitRecord:
    """Scan p = 1..max_p for the least p with ||f^p(x) - x|| <= tol."""
    if max_p < 1:
        raise BadParams("max_p must be at least 1")
    x = as_vector(x, f.cone.dim)
    if not f.domain.contains(x):
        raise LeftDomain(0, point=x.copy())
    pts = [x]
    best = np.inf
    cur = x
    for p in range(1, max_p + 1):
        cur = f.apply(cur)
        if not f.domain.contains(cur):
            raise LeftDomain(p, point=cur.copy())
        pts.append(cur)
        res = float(np.linalg.norm(cur - x))
        best = min(best, res)
        if res <= tol:
            return OrbitRecord(base=_freeze(x), period=p, residual=res,
                               iterates=_freeze(np.array(pts)))
    return OrbitRecord(base=_freeze(x), period=None, residual=best,
                       iterates=_freeze(np.array(pts)))


# ------------------------------------------------------------------ searches

@dataclass(frozen=True)
class SearchBudget:
    """Deterministic search effort: every random draw derives from seed."""

    seed: int = 0
    n_scales: int = 12
    n_jitter: int = 4
    max_p: int = 64
    tol: float = 1e-9


def find_sandwich(f: MapSpec, x, budget: SearchBudget = SearchBudget()
                  ) -> tuple[OrbitRecord, OrbitRecord]:
    """Periodic points y << x << z found by probing along the cone axis.

    Candidates are x -/+ t*(u + jitter) on a geometric t-grid, with u the
    canonical interior direction; each candidate is period-scanned.
    """
    x = as_vector(x, f.cone.dim)
    if not f.domain.contains(x):
        raise LeftDomain(0, point=x.copy())
    u = f.cone.interior_point()
    rng = np.random.default_rng(budget.seed)
    found: dict[int, OrbitRecord] = {}
    for sign in (-1, 1):
        t0 = min(f.domain.max_step(x, sign * u), 2.0)
        if t0 <= 0:
            raise SearchExhausted("no room to step inside the domain")
        hit = None
        for k in range(budget.n_scales):
            t = 0.9 * t0 * (0.55 ** k)
            for j in range(budget.n_jitter):
                jit = np.zeros_like(u) if j == 0 else \
                    rng.standard_normal(u.shape[0]) * (0.1 * t * np.linalg.norm(u))
                cand = x + sign * t * u + sign * jit
                if not f.domain.contains(cand):
                    continue
                rel = order_relation(f.cone, cand, x, budget.tol)
                want = Order.LL if sign < 0 else Order.GG
                if rel is not want:
                    continue
                try:
                    rec = detect_period(f, cand, budget.max_p, budget.tol)
                except LeftDomain:
                    continue
                if rec.is_periodic:
                    hit = rec
                    break
            if hit is not None:
                break
        if hit is None:
            side = "below" if sign < 0 else "above"
            raise SearchExhausted(f"no periodic point found {side} the base point")
        found[sign] = hit
    return found[-1], found[1]


# -------------------------------------------------------------------- traps

@dataclass(frozen=True)
class TrapNeighborhood:
    """U = intersection over k of the open order intervals
    (f^{kp}(y), f^{kp}(z)), an f^p-invariant neighborhood of the center."""

    cone: ConeRep
    center: np.ndarray
    p: int
    s: int
    lows: np.ndarray               # rows f^{kp}(y), k = 0..s-1
    ups: np.ndarray                # rows f^{kp}(z)

    def contains(self, w, tol: float = GEOM_TOL) -> bool:
        w = as_vector(w, self.cone.dim)
        return bool(_strictly_inside(self.cone, self.lows, self.ups,
                                     w[None, :], tol)[0])


def _interior_gap(cone: ConeRep, diffs: np.ndarray) -> np.ndarray:
    """Distance-to-boundary proxy for each row: positive iff interior."""
    if cone.kind == POLYHEDRAL:
        return np.min(diffs @ cone.facets.T, axis=-1)
    t = diffs @ cone.axis
    radial = np.linalg.norm(diffs - t[..., None] * cone.axis, axis=-1)
    return t - radial


def _strictly_inside(cone: ConeRep, lows: np.ndarray, ups: np.ndarray,
                     w: np.ndarray, tol: float) -> np.ndarray:
    """Rows of w strictly inside every interval (lows[k], ups[k]); vectorized."""
    ok = np.ones(w.shape[0], dtype=bool)
    for k in range(lows.shape[0]):
        ok &= _interior_gap(cone, w - lows[k][None, :]) > tol
        ok &= _interior_gap(cone, ups[k][None, :] - w) > tol
    return ok


def build_trap(f: MapSpec, center: OrbitRecord, y: OrbitRecord,
               z: OrbitRecord, tol: float = GEOM_TOL) -> TrapNeighborhood:
    """Assemble the invariant trap around a periodic center.

    s is the lcm of the sandwich periods; the k-th interval has endpoints
    f^{kp}(y) and f^{kp}(z).  The center must sit strictly inside every
    interval, which also certifies the sandwich ordering.
    """
    if not center.is_periodic:
        raise BadParams("trap center must be a detected periodic point")
    if not (y.is_periodic and z.is_periodic):
        raise BadParams("sandwich points must be periodic")
    p = center.period
    s = lcm_capped([y.period, z.period])
    lows = [y.base]
    ups = [z.base]
    for k in range(1, s):
        lows.append(iterate(f, lows[-1], p))
        ups.append(iterate(f, ups[-1], p))
    lows = np.array(lows)
    ups = np.array(ups)
    x = center.base
    if not _strictly_inside(f.cone, lows, ups, x[None, :], tol)[0]:
        raise NotSandwiched("center is not strictly inside every trap interval")
    return TrapNeighborhood(cone=f.cone, center=_freeze(x.copy()), p=p, s=s,
                            lows=_freeze(lows), ups=_freeze(ups))


@dataclass(frozen=True)
class TrapCheck:
    passed: bool
    samples: int
    witness: np.ndarray | None = None


def trap_invariance_check(f: MapSpec, p: int, trap: TrapNeighborhood,
                          n_samples: int = 1000, seed: int = 0,
                          tol: float = GEOM_TOL) -> TrapCheck:
    """Sampled check that f^p maps the trap into itself.

    Points are drawn by rejection from the ball that provably contains the
    first interval; membership slack for the image uses a 10x looser
    tolerance so boundary-grazing samples do not flag false failures.
    """
    rng = np.random.default_rng(seed)
    lo0, up0 = trap.lows[0], trap.ups[0]
    radius = interval_radius(f.cone, lo0, up0)
    kept: list[np.ndarray] = []
    got = 0
    for _ in range(400):
        batch = lo0 + _ball_points(rng, 4096, f.cone.dim) * radius
        inside = _strictly_inside(f.cone, trap.lows, trap.ups, batch, tol)
        take = batch[inside][: n_samples - got]
        if take.shape[0]:
            kept.append(take)
            got += take.shape[0]
        if got >= n_samples:
            break
    if got < n_samples:
        raise BadParams("trap sampling stalled; interval too thin")
    pts = np.concatenate(kept, axis=0)
    imgs = pts
    for _ in range(p):
        imgs = _apply_many(f, imgs)
    ok = _strictly_inside(f.cone, trap.lows, trap.ups, imgs, -10 * tol)
    if not np.all(ok):
        i = int(np.nonzero(~ok)[0][0])
        return TrapCheck(passed=False, samples=got, witness=pts[i].copy())
    return TrapCheck(passed=True, samples=got)


def _apply_many(f: MapSpec, pts: np.ndarray) -> np.ndarray:
    """One application of the map to every row."""
    if f.kind == COMPOSITION:
        for part in f.parts:
            pts = _apply_many(part, pts)
        return pts
    out = pts @ f.matrix.T
    if f.offset is not None:
        out = out + f.offset[None, :]
    return out


def _ball_points(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    raw = rng.standard_normal((n, d))
    raw /= np.linalg.norm(raw, axis=1)[:, None]
    return raw * (rng.random(n) ** (1.0 / d))[:, None]


# --------------------------------------------------------- boundary density

@dataclass(frozen=True)
class ProbeResult:
    """Outcome of pinning a periodic point onto the cone boundary."""

    zeta: np.ndarray
    exponent: int                   # the g = f^exponent used by the locator
    residual: float                 # ||f^exponent(zeta) - zeta||
    h_value: float                  # support margin at zeta
    distance: float                 # ||zeta - v||
    lower: OrbitRecord
    upper: OrbitRecord


def _orbit_average(f: MapSpec, w: np.ndarray, r: int, m: int) -> np.ndarray:
    """Mean of w, g(w), ..., g^{m-1}(w) for g = f^r; g-fixed when g^m(w)=w."""
    acc = w.copy()
    cur = w
    for _ in range(m - 1):
        cur = iterate(f, cur, r)
        acc += cur
    return acc / m


def locate_boundary_fixed_point(f: MapSpec, space: StateSpace,
                                y: OrbitRecord, z: OrbitRecord,
                                tol: float = 1e-9, max_m: int = 64,
                                max_bisect: int = 200) -> tuple[np.ndarray, int, float, float]:
    """Find zeta on the cone boundary with f^r(zeta) = zeta, r = lcm of the
    sandwich periods.

    The segment from y to z is pushed through the orbit-average projector
    (averaging m iterates of g = f^r is g-fixed wherever g^m is the
    identity), and the support margin h is bisected along the projected
    path: h < 0 at y, h > 0 at z, so a zero crossing exists.
    Returns (zeta, r, g-residual, h value).
    """
    if not (y.is_periodic and z.is_periodic):
        raise LocatorFailed("sandwich records must be periodic")
    r = lcm_capped([y.period, z.period])
    mid = 0.5 * (y.base + z.base)
    m = None
    cur = mid
    for k in range(1, max_m + 1):
        cur = iterate(f, cur, r)
        if float(np.linalg.norm(cur - mid)) <= max(tol, 1e-7):
            m = k
            break
    if m is None:
        raise LocatorFailed("orbit average length not found: g-orbit of the "
                            "midpoint does not close within budget")

    def projected(t: float) -> np.ndarray:
        w = (1.0 - t) * y.base + t * z.base
        return _orbit_average(f, w, r, m)

    h_lo = support_margin(space, y.base)
    h_hi = support_margin(space, z.base)
    if not (h_lo < 0.0 < h_hi):
        raise LocatorFailed("sandwich does not bracket the boundary in h")
    lo_t, hi_t = 0.0, 1.0
    zeta, h_val = y.base, h_lo
    for _ in range(max_bisect):
        t = 0.5 * (lo_t + hi_t)
        zeta = projected(t)
        h_val = support_margin(space, zeta)
        if abs(h_val) <= 0.1 * tol:
            break
        if h_val < 0:
            lo_t = t
        else:
            hi_t = t
    if abs(h_val) > tol:
        raise LocatorFailed(f"bisection stalled at |h| = {abs(h_val):.3e}")
    res = float(np.linalg.norm(iterate(f, zeta, r) - zeta))
    if res > tol:
        raise LocatorFailed(f"projected point is not f^{r}-fixed: "
                            f"residual {res:.3e}")
    return zeta, r, res, float(h_val)


def probe_boundary_density(f: MapSpec, space: StateSpace, v, eps: float,
                           budget: SearchBudget = SearchBudget()
                           ) -> ProbeResult:
    """Pin a periodic point onto the cone boundary near boundary point v.

    First squeezes periodic points y in (v - C°) and z in (v + C°), both
    strictly inside the order interval [v - eps*u, v + eps*u]; then locates
    a boundary fixed point of f^r between them.
    """
    v = as_vector(v, space.dim)
    if locate(space.cone, v) is not Location.BOUNDARY:
        raise BadParams("probe point must lie on the cone boundary")
    if eps <= 0:
        raise BadParams("eps must be positive")
    u = space.anchor
    lo_end = v - eps * u
    hi_end = v + eps * u
    for corner in (lo_end, hi_end):
        if not f.domain.contains(corner):
            raise BadParams("eps-interval around the probe point leaves the domain")
    rng = np.random.default_rng(budget.seed)
    found: dict[int, OrbitRecord] = {}
    for sign in (-1, 1):
        hit = None
        for k in range(budget.n_scales):
            t = eps * 0.5 * (0.55 ** k)
            for j in range(budget.n_jitter):
                jit = np.zeros_like(u) if j == 0 else \
                    rng.standard_normal(u.shape[0]) * (0.05 * t * np.linalg.norm(u))
                cand = v + sign * t * u + jit
                if not f.domain.contains(cand):
                    continue
                rel = order_relation(space.cone, cand, v, budget.tol)
                want = Order.LL if sign < 0 else Order.GG
                if rel is not want:
                    continue
                if not (order_relation(space.cone, lo_end, cand, budget.tol)
                        is Order.LL
                        and order_relation(space.cone, cand, hi_end, budget.tol)
                        is Order.LL):
                    continue
                try:
                    rec = detect_period(f, cand, budget.max_p, budget.tol)
                except LeftDomain:
                    continue
                if rec.is_periodic:
                    hit = rec
                    break
            if hit is not None:
                break
        if hit is None:
            side = "below" if sign < 0 else "above"
            raise SqueezeFailed(f"no periodic point {side} the boundary point "
                                f"within the eps-interval")
        found[sign] = hit
    y, z = found[-1], found[1]
    zeta, r, res, h_val = locate_boundary_fixed_point(
        f, space, y, z, tol=budget.tol, max_m=budget.max_p)
    return ProbeResult(zeta=_freeze(zeta), exponent=r, residual=res,
                       h_value=h_val,
                       distance=float(np.linalg.norm(zeta - v)),
                       lower=y, upper=z)


# ----------------------------------------------------------------- examples

@dataclass(frozen=True)
class ExampleSystem:
    """A named map with its natural cone and known periodicity verdict."""

    name: str
    params: dict
    map: MapSpec
    expected_periodic: bool
    global_period: int | None = None


def _rotation_block(angle: float, d: int) -> np.ndarray:
    a = np.eye(d)
    c, s = np.cos(angle), np.sin(angle)
    a[1, 1], a[1, 2] = c, -s
    a[2, 1], a[2, 2] = s, c
    return a


def make_example_system(name: str, params: dict | None = None,
                        domain: DomainSpec | None = None) -> ExampleSystem:
    """Build one of the bundled example systems.

    Names: orthant_permutation (sigma), lorentz_rotation (p, q; angle
    2 pi p / q about the axis), diagonal_scaling (lams), contraction (c),
    irrational_rotation (angle, default sqrt(2) radians).
    """
    params = dict(params or {})
    if name == "orthant_permutation":
        sigma = tuple(int(s) for s in params.get("sigma", ()))
        d = len(sigma)
        if d < 1 or sorted(sigma) != list(range(1, d + 1)):
            raise BadParams("sigma must be a permutation of 1..d")
        a = np.zeros((d, d))
        for i in range(d):
            a[i, sigma[i] - 1] = 1.0
        period = _permutation_order(sigma)
        m = linear_map(a, orthant(d), domain)
        return ExampleSystem(name, {"sigma": list(sigma)}, m, True, period)
    if name == "lorentz_rotation":
        p = int(params.get("p", 1))
        q = int(params.get("q", 0))
        if q < 1:
            raise BadParams("q must be a positive integer")
        a = _rotation_block(2.0 * np.pi * p / q, 3)
        m = linear_map(a, lorentz(3), domain)
        period = q // math.gcd(abs(p) if p else q, q) if p % q != 0 else 1
        return ExampleSystem(name, {"p": p, "q": q}, m, True, period)
    if name == "diagonal_scaling":
        lams = np.asarray(params.get("lams", ()), dtype=float)
        if lams.ndim != 1 or lams.size < 1 or np.any(lams <= 0):
            raise BadParams("lams must be positive reals")
        m = linear_map(np.diag(lams), orthant(lams.size), domain)
        periodic = bool(np.all(lams == 1.0))
        return ExampleSystem(name, {"lams": lams.tolist()}, m, periodic,
                             1 if periodic else None)
    if name == "contraction":
        c = float(params.get("c", 0.5))
        d = int(params.get("dim", 2))
        if not 0.0 < c < 1.0:
            raise BadParams("contraction factor must be in (0, 1)")
        m = linear_map(c * np.eye(d), orthant(d), domain)
        return ExampleSystem(name, {"c": c, "dim": d}, m, False, None)
    if name == "irrational_rotation":
        angle = float(params.get("angle", np.sqrt(2.0)))
        if angle <= 0:
            raise BadParams("angle must be positive")
        a = _rotation_block(angle, 3)
        m = linear_map(a, lorentz(3), domain)
        return ExampleSystem(name, {"angle": angle}, m, False, None)
    raise BadParams(f"unknown example system: {name}")


def _permutation_order(sigma: tuple[int, ...]) -> int:
    d = len(sigma)
    seen = [False] * d
    lengths = []
    for i in range(d):
        if seen[i]:
            continue
        n, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = sigma[j] - 1
            n += 1
        lengths.append(n)
    return lcm_capped(lengths)
