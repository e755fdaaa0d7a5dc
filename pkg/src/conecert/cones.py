"""Solid closed cones in R^d and their order geometry.

Two representations are supported: polyhedral cones carrying both a facet
(H-) form and a generator (V-) form, and second-order cones given by a unit
axis.  On top of them: membership classification, the induced partial order,
duality, state spaces (compact bases of the dual cone), supporting faces,
exposed points, and order intervals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    AnchorNotAxial,
    AnchorNotInterior,
    ApexDegenerate,
    DimensionMismatch,
    EmptyInterval,
    InvalidCone,
    NotOnBoundary,
)

GEOM_TOL = 1e-9

# Ray/facet enumeration is exponential in d; anything larger is out of scope.
_ENUM_DIM_MAX = 6

POLYHEDRAL = "polyhedral"
SECOND_ORDER = "second_order"


class Location(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class Order(Enum):
    EQ = "eq"
    LEQ = "leq"
    LL = "ll"
    GEQ = "geq"
    GG = "gg"
    NONE = "none"


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Validate and convert to a finite 1-D float64 array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise DimensionMismatch("vector has non-finite entries")
    return v


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


def _unit_rows(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms <= 0):
        raise InvalidCone("zero row in cone data")
    return rows / norms[:, None]


def _null_space(a: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the null space, columns of the result."""
    if a.shape[0] == 0:
        return np.eye(a.shape[1])
    u, s, vh = np.linalg.svd(a)
    cutoff = max(a.shape) * np.finfo(float).eps * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].T


def _canonical_rows(rows: list[np.ndarray]) -> np.ndarray:
    """Deduplicate unit rows (same direction) and sort lexicographically."""
    kept: list[np.ndarray] = []
    for r in rows:
        if any(np.dot(r, k) > 1.0 - 1e-9 for k in kept):
            continue
        kept.append(r)
    if not kept:
        return np.zeros((0, rows[0].shape[0] if rows else 0))
    arr = np.array(kept)
    arr[np.abs(arr) < 1e-14] = 0.0   # clear -0.0 and SVD dust
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def extreme_rays(halfspaces: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
    """Extreme rays of {x : H x >= 0} by (d-1)-subset enumeration.

    Requires a pointed, solid cone of dimension <= 6.  Rays are returned
    unit-norm, deduplicated, in lexicographic order.
    """
    halfspaces = np.atleast_2d(np.asarray(halfspaces, dtype=float))
    m, d = halfspaces.shape
    if d > _ENUM_DIM_MAX:
        raise InvalidCone(f"ray enumeration limited to dimension {_ENUM_DIM_MAX}")
    rays: list[np.ndarray] = []
    for idx in itertools.combinations(range(m), d - 1):
        sub = halfspaces[list(idx)]
        ns = _null_space(sub)
        if ns.shape[1] != 1:
            continue
        r = ns[:, 0]
        vals = halfspaces @ r
        if np.all(vals >= -tol):
            pass
        elif np.all(vals <= tol):
            r, vals = -r, -vals
        else:
            continue
        rays.append(r / np.linalg.norm(r))
    if not rays:
        raise InvalidCone("halfspace system has no extreme rays (cone not solid?)")
    return _canonical_rows(rays)


@dataclass(frozen=True)
class ConeRep:
    """A solid closed pointed cone in R^d.

    Polyhedral cones store both forms: ``facets`` are inward unit normals
    (H-form) and ``generators`` are unit extreme rays (V-form).  Second-order
    cones store the unit ``axis`` a, giving {x : <a,x> >= ||x - <a,x> a||}.
    """

    dim: int
    kind: str
    facets: np.ndarray | None = None
    generators: np.ndarray | None = None
    axis: np.ndarray | None = None

    def interior_point(self) -> np.ndarray:
        """A canonical interior point: generator mean, or the axis."""
        if self.kind == POLYHEDRAL:
            return self.generators.mean(axis=0)
        return self.axis.copy()

    def describe(self) -> str:
        if self.kind == POLYHEDRAL:
            return (f"polyhedral cone in R^{self.dim} with "
                    f"{len(self.generators)} generators / {len(self.facets)} facets")
        return f"second-order cone in R^{self.dim}"


def _validate_polyhedral(facets: np.ndarray, generators: np.ndarray, tol: float) -> None:
    d = facets.shape[1]
    if np.linalg.matrix_rank(generators, tol=1e-9) < d:
        raise InvalidCone("cone is not solid: generators do not span R^d")
    if np.linalg.matrix_rank(facets, tol=1e-9) < d:
        raise InvalidCone("cone is not pointed: facet normals do not span the dual")
    vals = generators @ facets.T
    if np.min(vals) < -tol:
        raise InvalidCone("a generator violates a facet inequality")
    # interior certificate for solidity
    bary = generators.mean(axis=0)
    if np.min(facets @ bary) <= tol:
        raise InvalidCone("cone is not solid: no strictly interior point found")
    # each facet supported by >= d-1 independent generators
    for j in range(facets.shape[0]):
        tight = generators[np.abs(vals[:, j]) <= 10 * tol]
        if tight.shape[0] < d - 1 or np.linalg.matrix_rank(tight, tol=1e-9) < d - 1:
            raise InvalidCone(f"facet {j} is not supported by d-1 independent generators")


def polyhedral_cone(generators=None, facets=None, tol: float = GEOM_TOL) -> ConeRep:
    """Build a polyhedral cone from either form; the other is enumerated.

    Both stored forms are canonical: unit rows, extreme/irredundant only,
    lexicographically sorted.  Raises InvalidCone for cones that are not
    solid and pointed.
    """
    if (generators is None) == (facets is None):
        raise InvalidCone("exactly one of generators/facets must be given")
    if generators is not None:
        gens_in = _unit_rows(np.atleast_2d(np.asarray(generators, dtype=float)))
        d = gens_in.shape[1]
        if np.linalg.matrix_rank(gens_in, tol=1e-9) < d:
            raise InvalidCone("cone is not solid: generators do not span R^d")
        # facets of C are the extreme rays of the dual {phi : G phi >= 0}
        f = extreme_rays(gens_in, tol)
        g = extreme_rays(f, tol)
    else:
        facets_in = _unit_rows(np.atleast_2d(np.asarray(facets, dtype=float)))
        d = facets_in.shape[1]
        g = extreme_rays(facets_in, tol)
        f = extreme_rays(g, tol)
    _validate_polyhedral(f, g, tol)
    return ConeRep(dim=d, kind=POLYHEDRAL, facets=_freeze(f), generators=_freeze(g))


def second_order_cone(axis) -> ConeRep:
    """The cone {x : <a,x> >= ||x - <a,x> a||} for a unit axis a."""
    a = as_vector(axis)
    n = np.linalg.norm(a)
    if n <= 0:
        raise InvalidCone("second-order axis must be nonzero")
    if a.shape[0] < 2:
        raise InvalidCone("second-order cones need dimension >= 2")
    return ConeRep(dim=a.shape[0], kind=SECOND_ORDER, axis=_freeze(a / n))


def orthant(d: int) -> ConeRep:
    """The nonnegative orthant in R^d."""
    return polyhedral_cone(generators=np.eye(d))


def lorentz(d: int = 3) -> ConeRep:
    """Second-order cone with axis e1 in R^d."""
    a = np.zeros(d)
    a[0] = 1.0
    return second_order_cone(a)


def _soc_split(cone: ConeRep, x: np.ndarray) -> tuple[float, np.ndarray]:
    t = float(cone.axis @ x)
    return t, x - t * cone.axis


def locate(cone: ConeRep, x, tol: float = GEOM_TOL) -> Location:
    """Classify a point as interior, boundary, or outside the cone.

    Polyhedral slack is the facet value (facet normals are unit); the
    second-order slack is the analytic gap <a,x> - ||x - <a,x> a||.
    """
    x = as_vector(x, cone.dim)
    if cone.kind == POLYHEDRAL:
        slack = float(np.min(cone.facets @ x))
    else:
        t, v = _soc_split(cone, x)
        slack = t - float(np.linalg.norm(v))
    if slack > tol:
        return Location.INTERIOR
    if slack < -tol:
        return Location.OUTSIDE
    return Location.BOUNDARY


def order_relation(cone: ConeRep, x, y, tol: float = GEOM_TOL) -> Order:
    """Order classification of the pair (x, y) under the cone order."""
    x = as_vector(x, cone.dim)
    y = as_vector(y, cone.dim)
    diff = y - x
    if np.linalg.norm(diff) <= tol:
        return Order.EQ
    loc = locate(cone, diff, tol)
    if loc is Location.INTERIOR:
        return Order.LL
    if loc is Location.BOUNDARY:
        return Order.LEQ
    loc = locate(cone, -diff, tol)
    if loc is Location.INTERIOR:
        return Order.GG
    if loc is Location.BOUNDARY:
        return Order.GEQ
    return Order.NONE


def dual_cone(cone: ConeRep) -> ConeRep:
    """The dual cone {phi : phi(x) >= 0 for all x in the cone}.

    For polyhedral cones the two canonical forms swap roles; second-order
    cones are self-dual in the standard inner product.
    """
    if cone.kind == POLYHEDRAL:
        return ConeRep(dim=cone.dim, kind=POLYHEDRAL,
                       facets=cone.generators, generators=cone.facets)
    return cone


def _orthobasis(axis: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the axis complement, as columns."""
    d = axis.shape[0]
    m = np.eye(d) - np.outer(axis, axis)
    q, r = np.linalg.qr(m)
    cols = [q[:, j] for j in range(d) if abs(r[j, j]) > 1e-12]
    basis = []
    for c in cols:
        nz = np.nonzero(np.abs(c) > 1e-12)[0][0]
        basis.append(c if c[nz] > 0 else -c)
    b = np.array(basis).T
    if b.shape[1] != d - 1:
        raise InvalidCone("failed to build axis-complement basis")
    return b


@dataclass(frozen=True)
class StateSpace:
    """The compact base {phi in C* : phi(u) = 1} of the dual cone.

    Polyhedral vertices are kept as unit dual rays plus their anchor values,
    so that evaluating a vertex at the anchor divides a number by itself and
    returns exactly 1.0.  Second-order bases are the disc
    {(a + w)/tau : w ⊥ a, ||w|| <= 1} described parametrically.
    """

    cone: ConeRep
    dual: ConeRep
    anchor: np.ndarray
    rays: np.ndarray | None = None        # unit extreme rays of C*
    scales: np.ndarray | None = None      # rays @ anchor, all > 0
    axis_scale: float | None = None       # second-order: anchor = axis_scale * axis

    @property
    def dim(self) -> int:
        return self.cone.dim

    @property
    def vertices(self) -> np.ndarray:
        """Vertex functionals phi with phi(anchor) = 1 (polyhedral only)."""
        if self.rays is None:
            raise InvalidCone("second-order state space has no vertex list")
        return self.rays / self.scales[:, None]

    def eval_vertices(self, x) -> np.ndarray:
        """Vertex values at x, computed as (ray . x) / (ray . u)."""
        x = as_vector(x, self.dim)
        return (self.rays @ x) / self.scales

    def boundary_functionals(self, n: int = 64) -> np.ndarray:
        """n deterministic samples of the boundary sphere of the disc."""
        a = self.cone.axis
        d = self.dim
        s = 1.0 / self.axis_scale
        b = _orthobasis(a)
        if d == 2:
            dirs = np.array([[1.0], [-1.0]])[: max(2, min(n, 2))]
        elif d == 3:
            theta = 2.0 * np.pi * np.arange(n) / n
            dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        else:
            # deterministic Gaussian sphere sample, fixed internal seed
            rng = np.random.Generator(np.random.PCG64(20240901))
            raw = rng.standard_normal((n, d - 1))
            dirs = raw / np.linalg.norm(raw, axis=1)[:, None]
        return s * (a[None, :] + dirs @ b.T)


def state_space(cone: ConeRep, anchor, tol: float = GEOM_TOL) -> StateSpace:
    """Slice the dual cone at a fixed interior anchor u: {phi : phi(u) = 1}."""
    u = as_vector(anchor, cone.dim)
    if locate(cone, u, tol) is not Location.INTERIOR:
        raise AnchorNotInterior("anchor must lie in the cone interior")
    dual = dual_cone(cone)
    if cone.kind == POLYHEDRAL:
        rays = dual.generators
        scales = rays @ u
        if np.min(scales) <= 0:
            raise AnchorNotInterior("anchor not strictly positive on all dual rays")
        return StateSpace(cone=cone, dual=dual, anchor=_freeze(u),
                          rays=rays, scales=_freeze(scales))
    t, v = _soc_split(cone, u)
    if np.linalg.norm(v) > tol * max(1.0, np.linalg.norm(u)):
        raise AnchorNotAxial("second-order anchors must be positive multiples of the axis")
    return StateSpace(cone=cone, dual=dual, anchor=_freeze(u), axis_scale=t)


def support_margin(space: StateSpace, x) -> float:
    """Smallest state-space functional value at x.

    Positive iff x is interior, zero on the boundary, negative outside.
    Positively homogeneous in x.
    """
    x = as_vector(x, space.dim)
    if space.cone.kind == POLYHEDRAL:
        return float(np.min(space.eval_vertices(x)))
    t, v = _soc_split(space.cone, x)
    return (t - float(np.linalg.norm(v))) / space.axis_scale


def exposed_points(space: StateSpace, n: int = 64) -> np.ndarray:
    """Exposed points of the state space, one per row.

    For a polytope base these are exactly the vertices; for a disc base every
    boundary point is exposed and a finite sample of size n is returned.
    """
    if space.cone.kind == POLYHEDRAL:
        return space.vertices
    return space.boundary_functionals(n)


@dataclass(frozen=True)
class Face:
    """Supporting face: boundary functionals of the state space vanishing at
    a boundary point of the cone."""

    functionals: np.ndarray           # one row per supporting functional
    witness: np.ndarray               # the boundary point
    vertex_indices: tuple[int, ...] | None = None   # polyhedral provenance


def supporting_face(space: StateSpace, x, tol: float = GEOM_TOL) -> Face:
    """All state-space boundary functionals vanishing at boundary point x."""
    x = as_vector(x, space.dim)
    nx = float(np.linalg.norm(x))
    if nx <= tol:
        raise ApexDegenerate("supporting face at the apex is rejected")
    if locate(space.cone, x, tol) is not Location.BOUNDARY:
        raise NotOnBoundary("point is not on the cone boundary")
    if space.cone.kind == POLYHEDRAL:
        verts = space.vertices
        vals = space.eval_vertices(x)
        vnorms = np.linalg.norm(verts, axis=1)
        active = np.abs(vals) <= tol * vnorms * nx
        if not np.any(active):
            # fall back to the membership normalization for small points
            active = np.abs(vals) <= tol * vnorms
        idx = tuple(int(i) for i in np.nonzero(active)[0])
        if not idx:
            raise NotOnBoundary("no vanishing vertex functional within tolerance")
        return Face(functionals=_freeze(verts[list(idx)]), witness=_freeze(x),
                    vertex_indices=idx)
    t, v = _soc_split(space.cone, x)
    nv = np.linalg.norm(v)
    if nv <= tol * nx:
        raise ApexDegenerate("axis points touch the boundary only at the apex")
    phi = (space.cone.axis - v / nv) / space.axis_scale
    return Face(functionals=_freeze(phi[None, :]), witness=_freeze(x))


def exposing_witness(space: StateSpace, functional, vertex_index: int | None = None) -> np.ndarray:
    """A unit boundary point y with a singleton supporting face {functional}.

    For polyhedral cones y is the mean of the generators supporting the
    matching facet; for second-order cones y is the reflected boundary ray.
    """
    if space.cone.kind == POLYHEDRAL:
        if vertex_index is None:
            raise InvalidCone("vertex_index required for polyhedral witnesses")
        facet = space.rays[vertex_index]
        gens = space.cone.generators
        tight = gens[np.abs(gens @ facet) <= 1e-7]
        if tight.shape[0] == 0:
            raise InvalidCone("facet has no supporting generators")
        y = tight.mean(axis=0)
        return y / np.linalg.norm(y)
    phi = as_vector(functional, space.dim)
    a = space.cone.axis
    w = phi * space.axis_scale - a
    nw = np.linalg.norm(w)
    if nw <= 0:
        raise InvalidCone("functional coincides with the axis direction")
    y = a - w / nw
    return y / np.linalg.norm(y)


def interval_contains(cone: ConeRep, x, z, y, strict: bool = False,
                      tol: float = GEOM_TOL) -> bool:
    """Membership of y in the order interval [x, z] (strict: its interior)."""
    rel = order_relation(cone, x, z, tol)
    if strict:
        if rel is not Order.LL:
            raise EmptyInterval("strict intervals require x strictly below z")
    elif rel not in (Order.EQ, Order.LEQ, Order.LL):
        raise EmptyInterval("interval endpoints are not ordered")
    lo_ok = {Order.LL} if strict else {Order.EQ, Order.LEQ, Order.LL}
    return (order_relation(cone, x, y, tol) in lo_ok
            and order_relation(cone, y, z, tol) in lo_ok)


def strict_positive_functional(cone: ConeRep) -> np.ndarray:
    """A functional strictly positive on the cone minus the apex."""
    if cone.kind == POLYHEDRAL:
        psi = cone.facets.mean(axis=0)
    else:
        psi = cone.axis.copy()
    return psi


def positivity_gap(cone: ConeRep, psi: np.ndarray) -> float:
    """min of psi over unit cone elements; attained on extreme rays."""
    if cone.kind == POLYHEDRAL:
        return float(np.min(cone.generators @ psi))
    a = cone.axis
    t = float(a @ psi)
    w = psi - t * a
    # extreme rays are (a + v)/sqrt(2) with unit v; minimize over v
    return (t - float(np.linalg.norm(w))) / np.sqrt(2.0)


def interval_radius(cone: ConeRep, a, b) -> float:
    """Upper bound on ||w - a|| over the order interval [a, b]."""
    a = as_vector(a, cone.dim)
    b = as_vector(b, cone.dim)
    psi = strict_positive_functional(cone)
    gap = positivity_gap(cone, psi)
    if gap <= 0:
        raise InvalidCone("degenerate positivity gap")
    return float(psi @ (b - a)) / gap


def project_to_boundary(space: StateSpace, x) -> np.ndarray:
    """Shift x along the anchor direction onto the cone boundary.

    Every state-space functional is 1 at the anchor, so the support margin
    is exactly linear along that line and one step lands on the boundary.
    """
    x = as_vector(x, space.dim)
    return x - support_margin(space, x) * space.anchor


def sample_cone(cone: ConeRep, rng: np.random.Generator, n: int,
                interior: bool = False) -> np.ndarray:
    """n random unit-scale cone elements (rows)."""
    d = cone.dim
    out = np.empty((n, d))
    if cone.kind == POLYHEDRAL:
        gens = cone.generators
        k = gens.shape[0]
        i = 0
        while i < n:
            lam = rng.random(k)
            if interior:
                lam = lam + 0.05  # keep all generators active
            v = lam @ gens
            nv = np.linalg.norm(v)
            if nv <= 1e-12:
                continue
            out[i] = v / nv
            i += 1
        return out
    a = cone.axis
    b = _orthobasis(a)
    radii = rng.random(n) ** (1.0 / max(1, d - 1))
    if interior:
        radii = radii * 0.95
    raw = rng.standard_normal((n, d - 1))
    raw /= np.linalg.norm(raw, axis=1)[:, None]
    w = (radii[:, None] * raw) @ b.T
    vecs = a[None, :] + w
    return vecs / np.linalg.norm(vecs, axis=1)[:, None]


def boundary_points_near(space: StateSpace, x, delta: float, n: int,
                         rng: np.random.Generator) -> np.ndarray:
    """n boundary points within distance delta of the boundary point x."""
    x = as_vector(x, space.dim)
    pts = np.empty((n, space.dim))
    i = 0
    attempts = 0
    while i < n:
        attempts += 1
        if attempts > 50 * n:
            raise InvalidCone("boundary sampling stalled")
        step = rng.standard_normal(space.dim)
        step *= (0.3 * delta * rng.random()) / np.linalg.norm(step)
        w = project_to_boundary(space, x + step)
        if np.linalg.norm(w - x) <= delta:
            pts[i] = w
            i += 1
    return pts
