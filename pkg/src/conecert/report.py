"""Scenario execution and report emission.

Task results are plain JSON-ready dicts, ordered by input index, with
certificates inline.  Wall-clock times are printed in the stdout summary
but kept out of the emitted files so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import dataclass

import numpy as np

from .certify import (
    Certificate,
    CertifyOptions,
    certify_point,
    global_report,
)
from .dynamics import SearchBudget, probe_boundary_density, verify_monotone
from .errors import ConecertError
from .frames import (
    FunctionalBall,
    face_in_ball,
    face_in_ball_slack,
    perturbation_radius,
    sample_perturbations,
    select_frame,
)
from .cones import boundary_points_near
from .scenario import Scenario, TaskSpec, load_scenario
from .serialize import FORMAT_REPORT, certificate_to_jsonable, dump_json

_OPENNESS_PERTURBATIONS = 50


@dataclass(frozen=True)
class RunReport:
    """Results of one scenario run; wall_clock never reaches the files."""

    scenario: Scenario
    tasks: tuple[dict, ...]
    exit_status: int
    wall_clock: tuple[tuple[str, float], ...]


def _cert_row(i: int, cert: Certificate, f, anchor) -> dict:
    m = cert.margins
    return {
        "point_index": i,
        "status": "certified",
        "r": cert.r,
        "minimal_period": cert.minimal_period,
        "residual": cert.residual,
        "margin_min": min(m.sigma_min_lower, m.sigma_min_upper,
                          m.positivity_lower, m.positivity_upper),
        "certificate": certificate_to_jsonable(cert, f, anchor),
    }


def _failure_row(i: int, obj) -> dict:
    row = {"point_index": i, "status": "failed",
           "reason": getattr(obj, "reason", type(obj).__name__),
           "message": getattr(obj, "message", str(obj))}
    idx = getattr(obj, "index", None)
    side = getattr(obj, "side", None)
    if idx is not None:
        row["frame_index"] = idx
    if side is not None:
        row["side"] = side
    return row


def _run_verify_lemmas(scn: Scenario, space, task: TaskSpec,
                       ss: np.random.SeedSequence) -> dict:
    rng = np.random.default_rng(ss)
    out: dict = {"kind": task.kind, "label": task.label}
    try:
        mono = verify_monotone(scn.map)
        out["monotone"] = {"mode": mono.mode, "checked": mono.checked,
                           "ok": True}
    except ConecertError as e:
        out["monotone"] = {"ok": False, "message": str(e)}
    frame = select_frame(space)
    eps = perturbation_radius(frame)
    worst_sigma, worst_margin = sample_perturbations(
        frame, eps, task.n_samples, rng)
    out["frame"] = {
        "radius": float(eps),
        "n_samples": task.n_samples,
        "worst_sigma_min": float(worst_sigma),
        "worst_margin": float(worst_margin),
        "ok": bool(eps > 0 and worst_sigma > 0 and worst_margin > 0),
    }
    openness = []
    for i in range(space.dim):
        w = frame.witnesses[i]
        ball = FunctionalBall(frame.basis[i], eps)
        entry = {"index": i}
        try:
            slack = face_in_ball_slack(space, ball, w, scn.geom_tol)
            nearby = boundary_points_near(space, w, slack,
                                          _OPENNESS_PERTURBATIONS, rng)
            ok = all(face_in_ball(space, ball, q, scn.geom_tol)
                     for q in nearby)
            entry.update(slack=float(slack), n_checked=len(nearby),
                         ok=bool(ok and slack > 0))
        except ConecertError as e:
            entry.update(ok=False, message=str(e))
        openness.append(entry)
    out["passed"] = bool(out["monotone"]["ok"] and out["frame"]["ok"]
                         and all(e["ok"] for e in openness))
    out["openness"] = openness
    return out


def _run_certify(scn: Scenario, space, task: TaskSpec,
                 ss: np.random.SeedSequence, threads: int) -> dict:
    pts = [np.asarray(p, dtype=float) for p in task.points]
    seeds = ss.spawn(len(pts))

    def one(i: int) -> dict:
        try:
            cert = certify_point(scn.map, space, pts[i],
                                 CertifyOptions(geom_tol=scn.geom_tol,
                                                cert_tol=scn.cert_tol,
                                                seed=seeds[i]))
            return _cert_row(i, cert, scn.map, scn.anchor)
        except ConecertError as e:
            return _failure_row(i, e)

    rows = _map_ordered(one, len(pts), threads)
    return {"kind": task.kind, "label": task.label,
            "passed": all(r["status"] == "certified" for r in rows),
            "results": rows}


def _run_probe(scn: Scenario, space, task: TaskSpec,
               ss: np.random.SeedSequence, threads: int) -> dict:
    pts = [np.asarray(p, dtype=float) for p in task.points]
    seeds = ss.spawn(len(pts))

    def one(i: int) -> dict:
        budget = SearchBudget(
            seed=int(seeds[i].generate_state(1, np.uint64)[0]),
            tol=scn.cert_tol)
        try:
            res = probe_boundary_density(scn.map, space, pts[i], task.eps,
                                         budget)
            return {"point_index": i, "status": "ok",
                    "exponent": res.exponent,
                    "residual": float(res.residual),
                    "h_value": float(res.h_value),
                    "distance": float(res.distance)}
        except ConecertError as e:
            return _failure_row(i, e)

    rows = _map_ordered(one, len(pts), threads)
    return {"kind": task.kind, "label": task.label, "eps": task.eps,
            "passed": all(r["status"] == "ok" for r in rows),
            "results": rows}


def _run_global(scn: Scenario, space, task: TaskSpec,
                ss: np.random.SeedSequence, threads: int) -> dict:
    opts = CertifyOptions(geom_tol=scn.geom_tol, cert_tol=scn.cert_tol,
                          seed=ss)
    rep = global_report(scn.map, space, task.n, opts, threads=threads)
    rows = []
    for i, entry in enumerate(rep.entries):
        if isinstance(entry, Certificate):
            rows.append(_cert_row(i, entry, scn.map, scn.anchor))
        else:
            rows.append(_failure_row(i, entry))
    passed = rep.n_certified == task.n and bool(rep.fresh_verified)
    return {"kind": task.kind, "label": task.label,
            "passed": passed,
            "n_points": task.n,
            "n_certified": rep.n_certified,
            "global_period": rep.global_period,
            "fresh_max_residual": rep.fresh_max_residual,
            "fresh_verified": rep.fresh_verified,
            "results": rows}


def _map_ordered(fn, n: int, threads: int) -> list:
    if threads > 1 and n > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(n)))
    return [fn(i) for i in range(n)]


_RUNNERS = {
    "verify-lemmas": lambda scn, sp, t, ss, th: _run_verify_lemmas(scn, sp, t, ss),
    "certify": _run_certify,
    "probe-density": _run_probe,
    "global-report": _run_global,
}


def run_scenario(source, threads: int = 1) -> RunReport:
    """Execute a scenario (path or parsed Scenario) task by task.

    Exit status 0 means the observed outcome matched the expectation:
    all tasks passed, or at least one failed and the scenario says
    expected_fail.  Status 1 is the mismatch in either direction.
    """
    scn = source if isinstance(source, Scenario) else load_scenario(source)
    space = scn.space()
    children = np.random.SeedSequence(scn.seed).spawn(len(scn.tasks))
    tasks: list[dict] = []
    clocks: list[tuple[str, float]] = []
    for task, ss in zip(scn.tasks, children):
        t0 = time.perf_counter()
        tasks.append(_RUNNERS[task.kind](scn, space, task, ss, threads))
        clocks.append((task.label, time.perf_counter() - t0))
    any_failed = any(not t["passed"] for t in tasks)
    status = 0 if any_failed == scn.expected_fail else 1
    return RunReport(scenario=scn, tasks=tuple(tasks), exit_status=status,
                     wall_clock=tuple(clocks))


def report_to_jsonable(report: RunReport) -> dict:
    return {
        "format": FORMAT_REPORT,
        "version": 1,
        "scenario": report.scenario.echo(),
        "tasks": list(report.tasks),
        "exit_status": report.exit_status,
    }


def _csv_rows(report: RunReport) -> list[tuple]:
    rows: list[tuple] = []
    for task in report.tasks:
        for res in task.get("results", ()):
            i = res["point_index"]
            if res["status"] == "certified":
                rows.append((task["label"], i, res["r"],
                             repr(res["residual"]), repr(res["margin_min"])))
            elif res["status"] == "ok":
                rows.append((task["label"], i, res["exponent"],
                             repr(res["residual"]), ""))
            else:
                rows.append((task["label"], i, "", "", ""))
    return rows


def render_csv(report: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("task", "point_index", "r", "residual", "margin_min"))
    w.writerows(_csv_rows(report))
    return buf.getvalue()


def emit_report(report: RunReport, prefix: str,
                figures: bool = True) -> list[str]:
    """Write <prefix>.report.json and <prefix>.residuals.csv, and by
    default the two companion figures; returns the written paths."""
    parent = os.path.dirname(prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)
    json_path = prefix + ".report.json"
    csv_path = prefix + ".residuals.csv"
    dump_json(report_to_jsonable(report), json_path)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(report))
    paths = [json_path, csv_path]
    if figures:
        from .figures import render_figures
        paths.extend(render_figures(report, prefix))
    return paths


def summary_text(report: RunReport) -> str:
    """Human-readable run summary, the only place wall-clock appears."""
    scn = report.scenario
    lines = [f"scenario {scn.name!r} (seed {scn.seed}, dim {scn.dim})"]
    for task, (label, secs) in zip(report.tasks, report.wall_clock):
        verdict = "pass" if task["passed"] else "FAIL"
        extra = ""
        if task["kind"] == "global-report":
            n_str = task["global_period"]
            extra = (f", certified {task['n_certified']}/{task['n_points']}"
                     f", N={'none' if n_str is None else n_str}")
        elif task["kind"] == "certify":
            good = sum(1 for r in task["results"]
                       if r["status"] == "certified")
            extra = f", certified {good}/{len(task['results'])}"
        elif task["kind"] == "probe-density":
            good = sum(1 for r in task["results"] if r["status"] == "ok")
            extra = f", located {good}/{len(task['results'])}"
        elif task["kind"] == "verify-lemmas":
            extra = f", frame radius {task['frame']['radius']:.3e}"
        lines.append(f"  {label}: {verdict}{extra} ({secs:.2f} s)")
    if scn.expected_fail:
        matched = report.exit_status == 0
        lines.append("  expected_fail=true: failures "
                     + ("observed as expected" if matched else "NOT observed"))
    lines.append(f"exit status {report.exit_status}")
    return "\n".join(lines)
