"""Scenario files: one JSON document describing a cone, a map, and a task
list, with a mandatory seed so every run is reproducible."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import ConeRep, Location, StateSpace, as_vector, locate, state_space
from .dynamics import MapSpec
from .errors import ScenarioError
from .serialize import (
    cone_from_block,
    cone_to_block,
    load_json,
    map_from_block,
    map_to_block,
)

TASK_KINDS = ("verify-lemmas", "certify", "probe-density", "global-report")


@dataclass(frozen=True)
class TaskSpec:
    """One scenario task; unused fields stay at their defaults."""

    kind: str
    label: str
    points: tuple[tuple[float, ...], ...] = ()
    eps: float = 0.5
    n: int = 10
    n_samples: int = 1000

    def as_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "verify-lemmas":
            out["n_samples"] = self.n_samples
        elif self.kind == "certify":
            out["points"] = [list(p) for p in self.points]
        elif self.kind == "probe-density":
            out["points"] = [list(p) for p in self.points]
            out["eps"] = self.eps
        else:
            out["n"] = self.n
        return out


@dataclass(frozen=True)
class Scenario:
    """A parsed scenario: geometry, map, tolerances, seed, and tasks."""

    name: str
    seed: int
    cone: ConeRep
    anchor: np.ndarray
    map: MapSpec
    geom_tol: float
    cert_tol: float
    expected_fail: bool
    output: str
    tasks: tuple[TaskSpec, ...]
    cone_block: dict
    map_block: dict

    @property
    def dim(self) -> int:
        return self.cone.dim

    def space(self) -> StateSpace:
        return state_space(self.cone, self.anchor)

    def echo(self) -> dict:
        """Normalized scenario document; re-parses to an equivalent run."""
        return {
            "name": self.name,
            "seed": self.seed,
            "cone": dict(self.cone_block),
            "anchor": self.anchor.tolist(),
            "map": dict(self.map_block),
            "tolerances": {"geometric": self.geom_tol,
                           "certification": self.cert_tol},
            "expected_fail": self.expected_fail,
            "output": self.output,
            "tasks": [t.as_dict() for t in self.tasks],
        }


def _parse_task(raw: dict, index: int, dim: int,
                seen: dict[str, int]) -> TaskSpec:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ScenarioError(f"task {index}: needs a 'kind' field")
    kind = raw["kind"]
    if kind not in TASK_KINDS:
        raise ScenarioError(f"task {index}: unknown kind {kind!r}")
    n_prev = seen.get(kind, 0)
    seen[kind] = n_prev + 1
    label = kind if n_prev == 0 else f"{kind}#{n_prev + 1}"
    if kind == "verify-lemmas":
        return TaskSpec(kind, label, n_samples=int(raw.get("n_samples", 1000)))
    if kind == "global-report":
        n = int(raw.get("n", 10))
        if n < 1:
            raise ScenarioError(f"task {index}: n must be at least 1")
        return TaskSpec(kind, label, n=n)
    pts_raw = raw.get("points")
    if not pts_raw:
        raise ScenarioError(f"task {index}: needs a nonempty 'points' list")
    pts = []
    for j, p in enumerate(pts_raw):
        v = as_vector(p)
        if v.shape[0] != dim:
            raise ScenarioError(
                f"task {index}: point {j} has dimension {v.shape[0]}, "
                f"cone has {dim}")
        pts.append(tuple(float(c) for c in v))
    if kind == "certify":
        return TaskSpec(kind, label, points=tuple(pts))
    eps = float(raw.get("eps", 0.5))
    if eps <= 0:
        raise ScenarioError(f"task {index}: eps must be positive")
    return TaskSpec(kind, label, points=tuple(pts), eps=eps)


def parse_scenario(doc: dict) -> Scenario:
    """Validate and assemble a scenario document."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    for key in ("name", "seed", "cone", "map", "tasks"):
        if key not in doc:
            raise ScenarioError(f"scenario is missing the {key!r} field")
    seed = doc["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) \
            or not 0 <= seed < 2 ** 64:
        raise ScenarioError("seed must be an integer in [0, 2^64)")
    cone = cone_from_block(doc["cone"])
    anchor = as_vector(doc.get("anchor", cone.interior_point()), cone.dim)
    if locate(cone, anchor) is not Location.INTERIOR:
        raise ScenarioError("anchor must lie in the cone interior")
    f = map_from_block(doc["map"], cone)
    if f.domain.dim != cone.dim:
        raise ScenarioError(
            f"map domain dimension {f.domain.dim} does not match "
            f"cone dimension {cone.dim}")
    tols = doc.get("tolerances", {})
    geom_tol = float(tols.get("geometric", 1e-9))
    cert_tol = float(tols.get("certification", 1e-9))
    if geom_tol <= 0 or cert_tol <= 0:
        raise ScenarioError("tolerances must be positive")
    tasks_raw = doc["tasks"]
    if not isinstance(tasks_raw, list):
        raise ScenarioError("tasks must be a list")
    seen: dict[str, int] = {}
    tasks = tuple(_parse_task(t, i, cone.dim, seen)
                  for i, t in enumerate(tasks_raw))
    name = str(doc["name"])
    return Scenario(
        name=name,
        seed=seed,
        cone=cone,
        anchor=anchor,
        map=f,
        geom_tol=geom_tol,
        cert_tol=cert_tol,
        expected_fail=bool(doc.get("expected_fail", False)),
        output=str(doc.get("output", name)),
        tasks=tasks,
        cone_block=cone_to_block(cone),
        map_block=map_to_block(f),
    )


def load_scenario(path: str) -> Scenario:
    return parse_scenario(load_json(path))
