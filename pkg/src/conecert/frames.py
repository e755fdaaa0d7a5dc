"""Frames of exposed points, perturbation radii, and boundary-face balls.

A frame is a set of d linearly independent exposed points of a state space.
Its mean functional is strictly positive on the cone, and that positivity
survives perturbing each frame member by less than a computable radius.
The same machinery classifies boundary points by whether their supporting
face sits inside a given functional ball.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import (
    POLYHEDRAL,
    StateSpace,
    as_vector,
    exposed_points,
    exposing_witness,
    supporting_face,
    _freeze,
    _soc_split,
)
from .errors import (
    FrameNotFound,
    InvalidCone,
    NonpositiveBaseMargin,
    SingularFrame,
)

_SING_TOL = 1e-12


@dataclass(frozen=True)
class Frame:
    """d linearly independent exposed points of a state space.

    ``basis`` holds the functionals as rows; ``mean`` is their arithmetic
    average, strictly positive on the cone; ``witnesses`` are unit boundary
    points, one per row, each exposed by exactly that functional.
    """

    basis: np.ndarray
    mean: np.ndarray
    sigma_min: float
    witnesses: np.ndarray
    vertex_indices: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class SimplicialCone:
    """K' = {x : phi_i(x) >= 0} for d independent functionals (rows)."""

    functionals: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.functionals, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise SingularFrame("simplicial cone needs a square functional matrix")
        s = np.linalg.svd(b, compute_uv=False)
        if s[-1] <= _SING_TOL * s[0]:
            raise SingularFrame("functionals are numerically dependent")
        object.__setattr__(self, "functionals", _freeze(b))


@dataclass(frozen=True)
class FunctionalBall:
    """Metric ball U = {phi in boundary of S : ||phi - center|| < radius}."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise InvalidCone("functional ball needs a positive radius")
        object.__setattr__(self, "center", _freeze(as_vector(self.center)))

    def contains(self, phi) -> bool:
        return float(np.linalg.norm(as_vector(phi, self.center.shape[0])
                                    - self.center)) < self.radius


def select_frame(space: StateSpace, n_candidates: int = 64) -> Frame:
    """Pick d exposed points greedily maximizing the smallest singular value.

    Each pick scans the remaining exposed points and keeps the one whose
    addition gives the best-conditioned partial basis; ties break to the
    lowest index so the choice is deterministic.
    """
    cands = exposed_points(space, n_candidates)
    d = space.dim
    if cands.shape[0] < d:
        raise FrameNotFound(f"only {cands.shape[0]} exposed points for dimension {d}")
    chosen: list[int] = []
    for _ in range(d):
        best_i, best_s = -1, -1.0
        for i in range(cands.shape[0]):
            if i in chosen:
                continue
            trial = cands[chosen + [i]]
            s = np.linalg.svd(trial, compute_uv=False)[-1]
            if s > best_s + 1e-15:
                best_i, best_s = i, s
        if best_i < 0 or best_s <= _SING_TOL:
            raise FrameNotFound("greedy selection ran out of independent exposed points")
        chosen.append(best_i)
    chosen.sort()
    basis = cands[chosen]
    mean = basis.mean(axis=0)
    sigma_min = float(np.linalg.svd(basis, compute_uv=False)[-1])
    if space.cone.kind == POLYHEDRAL:
        idx = tuple(chosen)
        wits = np.array([exposing_witness(space, basis[k], vertex_index=chosen[k])
                         for k in range(d)])
    else:
        idx = None
        wits = np.array([exposing_witness(space, basis[k]) for k in range(d)])
    return Frame(basis=_freeze(basis), mean=_freeze(mean), sigma_min=sigma_min,
                 witnesses=_freeze(wits), vertex_indices=idx)


def positivity_margin(cone: SimplicialCone | np.ndarray, psi) -> float:
    """Smallest coefficient c_i in psi = sum_i c_i phi_i.

    Positive exactly when psi is strictly positive on K' minus the origin.
    """
    b = cone.functionals if isinstance(cone, SimplicialCone) else np.asarray(cone, dtype=float)
    s = np.linalg.svd(b, compute_uv=False)
    if s[-1] <= _SING_TOL * s[0]:
        raise SingularFrame("functionals are numerically dependent")
    psi = as_vector(psi, b.shape[1])
    c = np.linalg.solve(b.T, psi)
    return float(np.min(c))


def perturbation_radius(frame: Frame) -> float:
    """A radius eps so that moving each frame row by less than eps keeps
    both linear independence and a positive positivity margin of the mean.

    Independence: moving d rows by eps shifts the operator norm by at most
    sqrt(d)*eps, so eps <= sigma_min/(2 sqrt(d)) keeps sigma_min(B) >= s/2.
    Margin: the inverse-perturbation bound
        ||B^-1 - A^-1|| <= ||A^-1||^2 ||B-A|| / (1 - ||A^-1|| ||B-A||)
    shifts each coefficient by at most 2 sqrt(d) eps ||mean|| / s^2, so the
    second cap keeps the margin above m0/2.  Both carry a factor-2 safety.
    """
    m0 = positivity_margin(frame.basis, frame.mean)
    if m0 <= 0:
        raise NonpositiveBaseMargin("frame mean is not strictly positive on the frame cone")
    s = frame.sigma_min
    d = frame.dim
    rt = np.sqrt(float(d))
    eps_indep = s / (2.0 * rt)
    eps_margin = m0 * s * s / (4.0 * rt * float(np.linalg.norm(frame.mean)))
    return float(min(eps_indep, eps_margin))


def sample_perturbations(frame: Frame, eps: float, n: int,
                         rng: np.random.Generator) -> tuple[float, float]:
    """Worst sigma_min and positivity margin over n random perturbed frames.

    Each trial moves every frame row by an independent uniform vector of
    length < eps and recomputes both certified quantities.
    """
    d = frame.dim
    worst_s = np.inf
    worst_m = np.inf
    for _ in range(n):
        step = rng.standard_normal((d, d))
        step *= (eps * rng.random((d, 1))) / np.linalg.norm(step, axis=1)[:, None]
        b = frame.basis + step
        s = float(np.linalg.svd(b, compute_uv=False)[-1])
        c = np.linalg.solve(b.T, frame.mean)
        worst_s = min(worst_s, s)
        worst_m = min(worst_m, float(np.min(c)))
    return worst_s, worst_m


def face_in_ball(space: StateSpace, ball: FunctionalBall, x,
                 tol: float = 1e-9) -> bool:
    """Whether every supporting functional of boundary point x lies in U.

    This is membership in the relatively open boundary set
    W = {x on the cone boundary : face(x) inside U}.
    """
    face = supporting_face(space, x, tol)
    dists = np.linalg.norm(face.functionals - ball.center[None, :], axis=1)
    return bool(np.max(dists) < ball.radius)


def face_in_ball_slack(space: StateSpace, ball: FunctionalBall, x,
                       tol: float = 1e-9) -> float:
    """A point-space radius delta certifying openness of W at x.

    Any boundary point within delta of x still has its whole supporting
    face inside the ball.  Polyhedral: keeps every out-of-ball vertex
    inactive (the in-ball ones can join the face freely).  Second-order:
    bounds the motion of the single face functional through the
    normalization Lipschitz constant.  Requires face_in_ball(x) true.
    """
    x = as_vector(x, space.dim)
    face = supporting_face(space, x, tol)
    dists = np.linalg.norm(face.functionals - ball.center[None, :], axis=1)
    if np.max(dists) >= ball.radius:
        raise InvalidCone("slack undefined: face not inside the ball")
    nx = float(np.linalg.norm(x))
    if space.cone.kind == POLYHEDRAL:
        verts = space.vertices
        vals = space.eval_vertices(x)
        vnorms = np.linalg.norm(verts, axis=1)
        outside = np.linalg.norm(verts - ball.center[None, :], axis=1) >= ball.radius
        if not np.any(outside):
            return 0.25 * nx
        margins = vals[outside] / vnorms[outside] - tol * nx
        m = float(np.min(margins))
        if m <= 0:
            raise InvalidCone("an out-of-ball vertex is already active")
        return min(0.5 * m, 0.25 * nx)
    t, v = _soc_split(space.cone, x)
    nv = float(np.linalg.norm(v))
    slack = float(ball.radius - dists[0])
    # face functional moves by <= 4*delta/(tau*||v||) for delta <= ||v||/4
    return min(space.axis_scale * slack * nv / 8.0, nv / 4.0)
