"""JSON codecs for cones, domains, maps, and certificates.

Certificates serialize to plain JSON with shortest round-trip decimals
(Python's float repr), fields in declaration order, and an embedded system
block so a third party can re-validate the file with nothing else.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cones import (
    ConeRep,
    as_vector,
    lorentz,
    orthant,
    polyhedral_cone,
    second_order_cone,
    state_space,
    support_margin,
)
from .dynamics import (
    BOX,
    WHOLE,
    DomainSpec,
    MapSpec,
    affine_map,
    compose_maps,
    iterate,
    lcm_capped,
    linear_map,
    make_example_system,
    open_ball,
    open_box,
    whole_space,
)
from .errors import ConecertError, ScenarioError
from .certify import Certificate, PinchMargins, verify_pinch

FORMAT_CERT = "conecert.certificate"
FORMAT_REPORT = "conecert.report"


def dump_json(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _matrix(rows, dim: int, what: str) -> np.ndarray:
    a = np.asarray(rows, dtype=float)
    if a.ndim != 2 or (dim and a.shape[1] != dim):
        raise ScenarioError(f"{what} must be a matrix with {dim} columns")
    return a


# cone blocks -----------------------------------------------------------

def cone_to_block(cone: ConeRep) -> dict:
    if cone.kind == "polyhedral":
        return {"kind": "polyhedral", "generators": cone.generators.tolist()}
    return {"kind": "second_order", "axis": cone.axis.tolist()}


def cone_from_block(block: dict) -> ConeRep:
    if not isinstance(block, dict) or "kind" not in block:
        raise ScenarioError("cone block needs a 'kind' field")
    kind = block["kind"]
    if kind == "orthant":
        return orthant(int(block["dim"]))
    if kind == "lorentz":
        return lorentz(int(block.get("dim", 3)))
    if kind == "polyhedral":
        gens = np.asarray(block["generators"], dtype=float)
        return polyhedral_cone(generators=gens)
    if kind == "second_order":
        return second_order_cone(as_vector(block["axis"]))
    raise ScenarioError(f"unknown cone kind {kind!r}")


# domain blocks ---------------------------------------------------------

def domain_to_block(dom: DomainSpec) -> dict:
    if dom.kind == WHOLE:
        return {"kind": "whole", "dim": dom.dim}
    if dom.kind == BOX:
        return {"kind": "box", "lo": dom.lo.tolist(), "hi": dom.hi.tolist()}
    return {"kind": "ball", "center": dom.center.tolist(),
            "radius": dom.radius}


def domain_from_block(block: dict, dim: int) -> DomainSpec:
    if not isinstance(block, dict) or "kind" not in block:
        raise ScenarioError("domain block needs a 'kind' field")
    kind = block["kind"]
    if kind == "whole":
        return whole_space(int(block.get("dim", dim)))
    if kind == "box":
        return open_box(as_vector(block["lo"], dim), as_vector(block["hi"], dim))
    if kind == "ball":
        return open_ball(as_vector(block["center"], dim),
                         float(block["radius"]))
    raise ScenarioError(f"unknown domain kind {kind!r}")


# map blocks ------------------------------------------------------------

def map_to_block(f: MapSpec) -> dict:
    """Map block: kind, matrix rows, translation, composition list, domain."""
    block: dict = {"kind": f.kind}
    if f.kind == "linear":
        block["matrix"] = f.matrix.tolist()
    elif f.kind == "affine":
        block["matrix"] = f.matrix.tolist()
        block["translation"] = f.offset.tolist()
    else:
        block["parts"] = [map_to_block(p) for p in f.parts]
    block["domain"] = domain_to_block(f.domain)
    return block


def map_from_block(block: dict, cone: ConeRep,
                   default_domain: DomainSpec | None = None) -> MapSpec:
    if not isinstance(block, dict) or "kind" not in block:
        raise ScenarioError("map block needs a 'kind' field")
    kind = block["kind"]
    dom = default_domain
    if "domain" in block:
        dom = domain_from_block(block["domain"], cone.dim)
    if kind == "example":
        sys = make_example_system(block["name"], block.get("params"), dom)
        return sys.map
    if kind == "linear":
        a = _matrix(block["matrix"], cone.dim, "map matrix")
        return linear_map(a, cone, dom)
    if kind == "affine":
        a = _matrix(block["matrix"], cone.dim, "map matrix")
        b = as_vector(block.get("translation", np.zeros(cone.dim)), cone.dim)
        return affine_map(a, b, cone, dom)
    if kind == "composition":
        parts = [map_from_block(p, cone, dom) for p in block["parts"]]
        return compose_maps(parts)
    raise ScenarioError(f"unknown map kind {kind!r}")


# certificates ----------------------------------------------------------

def certificate_to_jsonable(cert: Certificate, f: MapSpec, anchor) -> dict:
    """Serialize a certificate with its system so it re-validates alone."""
    return {
        "format": FORMAT_CERT,
        "version": 1,
        "system": {
            "cone": cone_to_block(f.cone),
            "anchor": as_vector(anchor, f.cone.dim).tolist(),
            "map": map_to_block(f),
        },
        "base": cert.base.tolist(),
        "frame": {
            "functionals": cert.frame_functionals.tolist(),
            "mean": cert.frame_mean.tolist(),
            "radius": cert.frame_radius,
        },
        "lower": {
            "points": cert.lower_points.tolist(),
            "periods": list(cert.lower_periods),
            "functionals": cert.rhos.tolist(),
        },
        "upper": {
            "points": cert.upper_points.tolist(),
            "periods": list(cert.upper_periods),
            "functionals": cert.sigmas.tolist(),
        },
        "margins": cert.margins.as_dict(),
        "r": cert.r,
        "minimal_period": cert.minimal_period,
        "residual": cert.residual,
        "tolerances": {"geometric": cert.geom_tol,
                       "certification": cert.cert_tol},
    }


def certificate_from_jsonable(data: dict) -> tuple[Certificate, MapSpec, np.ndarray]:
    """Rebuild (certificate, map, anchor) from a serialized certificate."""
    if data.get("format") != FORMAT_CERT:
        raise ScenarioError("not a certificate file")
    sysb = data["system"]
    cone = cone_from_block(sysb["cone"])
    anchor = as_vector(sysb["anchor"], cone.dim)
    f = map_from_block(sysb["map"], cone)
    m = data["margins"]
    margins = PinchMargins(
        sigma_min_lower=float(m["sigma_min_lower"]),
        sigma_min_upper=float(m["sigma_min_upper"]),
        positivity_lower=float(m["positivity_lower"]),
        positivity_upper=float(m["positivity_upper"]))
    cert = Certificate(
        base=as_vector(data["base"], cone.dim),
        frame_functionals=_matrix(data["frame"]["functionals"], cone.dim,
                                  "frame functionals"),
        frame_mean=as_vector(data["frame"]["mean"], cone.dim),
        frame_radius=float(data["frame"]["radius"]),
        lower_points=_matrix(data["lower"]["points"], cone.dim,
                             "lower points"),
        lower_periods=tuple(int(p) for p in data["lower"]["periods"]),
        rhos=_matrix(data["lower"]["functionals"], cone.dim, "rho rows"),
        upper_points=_matrix(data["upper"]["points"], cone.dim,
                             "upper points"),
        upper_periods=tuple(int(p) for p in data["upper"]["periods"]),
        sigmas=_matrix(data["upper"]["functionals"], cone.dim, "sigma rows"),
        margins=margins,
        r=int(data["r"]),
        minimal_period=int(data["minimal_period"]),
        residual=float(data["residual"]),
        geom_tol=float(data["tolerances"]["geometric"]),
        cert_tol=float(data["tolerances"]["certification"]),
    )
    return cert, f, anchor


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of independently re-checking a serialized certificate."""

    ok: bool
    checks: tuple[tuple[str, bool, str], ...]

    def lines(self) -> list[str]:
        out = []
        for name, passed, detail in self.checks:
            mark = "pass" if passed else "FAIL"
            out.append(f"[{mark}] {name}: {detail}")
        return out


def validate_certificate(data: dict) -> ValidationReport:
    """Re-derive every checkable field of a serialized certificate.

    Checks: frame consistency, boundary membership and periodicity of all
    2d points, vanishing of the paired functionals on the translated
    points, frame-ball membership, recomputed pinch margins, lcm, and the
    recomputed residual of f^r at the base point.
    """
    cert, f, anchor = certificate_from_jsonable(data)
    cone = f.cone
    space = state_space(cone, anchor)
    x = cert.base
    d = cone.dim
    checks: list[tuple[str, bool, str]] = []

    def add(name: str, passed: bool, detail: str) -> None:
        checks.append((name, bool(passed), detail))

    mean_err = float(np.linalg.norm(cert.frame_mean
                                    - cert.frame_functionals.mean(axis=0)))
    add("frame mean", mean_err <= 1e-12, f"deviation {mean_err:.3e}")
    add("frame radius", cert.frame_radius > 0,
        f"radius {cert.frame_radius:.3e}")

    worst_ball = 0.0
    for rows in (cert.rhos, cert.sigmas):
        dist = np.linalg.norm(rows - cert.frame_functionals, axis=1)
        worst_ball = max(worst_ball, float(dist.max()))
    add("functionals inside frame balls",
        worst_ball <= cert.frame_radius + 1e-12,
        f"worst distance {worst_ball:.3e} vs radius {cert.frame_radius:.3e}")

    worst_h = 0.0
    for pts, sgn in ((cert.lower_points, -1.0), (cert.upper_points, +1.0)):
        for p in pts:
            worst_h = max(worst_h, abs(support_margin(space, sgn * (p - x))))
    add("points on translated boundary", worst_h <= 1e-8,
        f"worst |h| {worst_h:.3e}")

    worst_per = 0.0
    for pts, pers in ((cert.lower_points, cert.lower_periods),
                      (cert.upper_points, cert.upper_periods)):
        for p, per in zip(pts, pers):
            res = float(np.linalg.norm(iterate(f, p, per) - p))
            worst_per = max(worst_per, res)
    add("periodicity of boundary points", worst_per <= cert.cert_tol,
        f"worst residual {worst_per:.3e}")

    worst_van = 0.0
    for i in range(d):
        worst_van = max(worst_van,
                        abs(float(cert.rhos[i] @ (cert.lower_points[i] - x))),
                        abs(float(cert.sigmas[i] @ (cert.upper_points[i] - x))))
    add("vanishing pairings", worst_van <= 1e-8, f"worst {worst_van:.3e}")

    try:
        fresh = verify_pinch(cert.rhos, cert.sigmas, cert.frame_mean)
        stored = cert.margins.as_dict()
        diff = max(abs(stored[k] - v) for k, v in fresh.as_dict().items())
        add("pinch margins match", diff <= 1e-12 and fresh.valid,
            f"max deviation {diff:.3e}")
    except ConecertError as e:
        add("pinch margins match", False, str(e))

    r_fresh = lcm_capped(list(cert.lower_periods) + list(cert.upper_periods))
    add("r is the lcm of all periods", r_fresh == cert.r,
        f"recomputed {r_fresh}, stored {cert.r}")
    add("minimal period divides r",
        cert.minimal_period >= 1 and cert.r % cert.minimal_period == 0,
        f"minimal {cert.minimal_period}, r {cert.r}")

    res_fresh = float(np.linalg.norm(iterate(f, x, cert.r) - x))
    add("residual recomputed", abs(res_fresh - cert.residual) <= 1e-12
        and res_fresh <= cert.cert_tol,
        f"recomputed {res_fresh:.3e}, stored {cert.residual:.3e}")

    return ValidationReport(ok=all(c[1] for c in checks),
                            checks=tuple(checks))
