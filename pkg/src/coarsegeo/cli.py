"""Command-line front end: scenario runs, reports, deterministic seeding.

Exit codes: 0 all checks passed, 1 a check or hypothesis failed, 2 bad
input.  Reports are JSON with sorted keys; wall-clock goes in a separate
"timing" field so reruns with one seed are byte-identical elsewhere.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import __version__
from .ball import build_ball, dump_ball, get_ball
from .boundary import VisualMetricParams, gromov_product_infinity, make_boundary_point, visual_distance
from .circle import (
    FuchsianGenus2Spec,
    PingPongError,
    SchottkySpec,
    action_distance,
    build_semiconjugacy,
    perturb,
    reduced_words,
    standard_action,
    verify_semiconjugacy,
)
from .hyperbolicity import SampleSpec, certify_delta, thin_constant
from .models import get_model
from .recognition import (
    HypothesisError,
    axis_window,
    check_broken_geodesic,
    noisy_axis_data,
    random_broken_geodesic,
    reconstruct,
)
from .triples import (
    build_ledger,
    coarse_projection,
    make_triple,
    preimage_projection_diameter,
    projection_diameter,
    standard_triple_grid,
)
from .words import EMPTY


class CheckFailure(RuntimeError):
    pass


def _report(out_path: Optional[str], payload: dict, started: float) -> dict:
    payload = dict(payload)
    payload["version"] = __version__
    payload["timing"] = {"seconds": round(time.time() - started, 3)}
    text = json.dumps(payload, indent=1, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return payload


def _checks_pass(checks: List[dict]) -> bool:
    return all(c["pass"] for c in checks)


def _echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


# -- subcommands --------------------------------------------------------------


def cmd_ball(args) -> int:
    started = time.time()
    ball = build_ball(get_model(args.model), args.radius)
    if args.out:
        dump_ball(ball, args.out)
        print(f"wrote {args.out}: {len(ball)} vertices")
    else:
        print(json.dumps({"model": args.model, "radius": args.radius, "vertices": len(ball)}))
    return 0


def cmd_delta(args) -> int:
    started = time.time()
    ball = get_ball(args.model, args.radius)
    sample = SampleSpec(seed=args.seed)
    nu = thin_constant(ball, args.inner, sample)
    candidate = Fraction(args.candidate) if args.candidate else 2 * nu
    cert = certify_delta(ball, candidate, inner=args.inner, sample=sample)
    if cert.violations and not args.candidate:
        cert = certify_delta(ball, candidate + 1, inner=args.inner, sample=sample)
    checks = [
        {
            "name": "delta-properties",
            "bound": str(cert.delta_certified),
            "measured": f"nu={cert.nu_thin} four_point={cert.delta4}",
            "pass": cert.ok,
        }
    ]
    _report(args.report, {"scenario": _echo(args), "certificate": cert.to_json(), "checks": checks}, started)
    return 0 if cert.ok else 1


def cmd_gromov(args) -> int:
    started = time.time()
    model = get_model(args.model)
    alpha = make_boundary_point(model, args.alpha)
    beta = make_boundary_point(model, args.beta)
    interval = gromov_product_infinity(
        model, EMPTY, alpha, beta, args.depth, Fraction(args.nu)
    )
    params = VisualMetricParams(lam=args.lam, k1=args.k1, k2=args.k2, depth=args.depth)
    dist = visual_distance(params, interval)
    _report(
        args.report,
        {
            "scenario": _echo(args),
            "product": [str(interval.lower), str(interval.upper)],
            "visual_distance": [dist.lower, dist.upper],
            "checks": [],
        },
        started,
    )
    return 0


def cmd_project(args) -> int:
    started = time.time()
    model = get_model(args.model)
    triple = make_triple(model, args.triple[0], args.triple[1], args.triple[2])
    proj = coarse_projection(model, triple, Fraction(args.r), args.depth)
    _report(
        args.report,
        {
            "scenario": _echo(args),
            "vertices": [model.text(v) for v in proj.vertices],
            "diameter": proj.diameter(model) if proj.vertices else 0,
            "checks": [],
        },
        started,
    )
    return 0


def cmd_ledger(args) -> int:
    started = time.time()
    model = get_model(args.model)
    ball = get_ball(args.model, args.radius)
    sample = SampleSpec(seed=args.seed)
    nu = thin_constant(ball, args.inner, sample)
    delta = 2 * nu if nu > 0 else Fraction(1)
    # enumerating projections is exponential in the scale, so both the
    # Q survey and the preimage diameter run at the capped scale and the
    # report says so
    r_q = min(3 * delta, Fraction(args.q_scale_cap))
    grid = standard_triple_grid(model, args.triples, args.seed, depth=args.depth)
    survey = projection_diameter(model, grid, r_q, args.depth)
    preim = [
        t
        for t in grid
        if EMPTY in coarse_projection(model, t, r_q, args.depth).vertices
    ]
    diam_d0 = preimage_projection_diameter(model, preim, r_q, args.depth) if preim else 0
    ledger = build_ledger(delta, survey.q_emp, diam_d0, args.cv)
    payload = {
        "scenario": _echo(args),
        "ledger": ledger.to_json(),
        "q_scale_used": str(r_q),
        "q_scale_capped": bool(r_q < 3 * delta),
        "empty_projections": survey.empty_count,
        "checks": [],
    }
    _report(args.out, payload, started)
    return 0


def cmd_broken(args) -> int:
    started = time.time()
    model = get_model(args.model)
    delta = Fraction(args.delta)
    l = Fraction(args.l)
    worst = Fraction(0)
    failures = 0
    for k in range(args.count):
        pw = random_broken_geodesic(model, l, delta, args.seed + k)
        verdict = check_broken_geodesic(pw, l, delta, model)
        if not verdict.hypotheses_hold:
            continue
        worst = max(worst, Fraction(verdict.hausdorff))
        if not verdict.passed:
            failures += 1
    checks = [
        {
            "name": "broken-geodesic-hausdorff",
            "bound": str(l + 4 * delta),
            "measured": str(worst),
            "pass": failures == 0,
        }
    ]
    _report(args.report, {"scenario": _echo(args), "checks": checks, "failures": failures}, started)
    return 0 if failures == 0 else 1


def cmd_reconstruct(args) -> int:
    started = time.time()
    model = get_model(args.model)
    delta = Fraction(args.delta)
    nu = Fraction(args.nu)
    try:
        axis = axis_window(model, args.axis, args.window)
        data = noisy_axis_data(model, axis, args.H, args.R, args.seed)
        result = reconstruct(data, delta, nu, model)
    except HypothesisError as exc:
        _report(
            args.report,
            {
                "scenario": _echo(args),
                "checks": [
                    {"name": f"hypothesis:{exc.step}", "bound": "", "measured": str(exc), "pass": False}
                ],
            },
            started,
        )
        return 1
    bound_h = 3 * args.H + 6 * delta
    bound_p = args.R - (4 * args.H + 10 * delta) - 2 * nu
    checks = [
        {
            "name": "hausdorff-to-S",
            "bound": str(bound_h),
            "measured": str(result.hausdorff_to_S),
            "pass": Fraction(result.hausdorff_to_S) <= bound_h,
        },
        {
            "name": "endpoint-products",
            "bound": str(bound_p),
            "measured": f"{result.endpoint_products[0]},{result.endpoint_products[1]}",
            "pass": all(p >= bound_p for p in result.endpoint_products),
        },
        {
            "name": "shadowing",
            "bound": str(3 * args.H + 6 * delta + 1),
            "measured": str(result.hausdorff_to_S),
            "pass": Fraction(result.hausdorff_to_S) < 3 * args.H + 6 * delta + 1,
        },
    ]
    payload = {
        "scenario": _echo(args),
        "result": result.to_json(model),
        "checks": checks,
    }
    _report(args.report, payload, started)
    return 0 if _checks_pass(checks) else 1


def _load_spec(name: str):
    if name in ("schottky", "builtin:schottky"):
        return SchottkySpec()
    if name in ("fuchsian2", "fuchsian-genus2", "builtin:fuchsian2"):
        return FuchsianGenus2Spec()
    with open(name) as fh:
        raw = json.load(fh)
    kind = raw.get("kind")
    if kind == "schottky":
        return SchottkySpec(
            cosh_s=raw.get("cosh_s", 5.0),
            pad_halfwidth=raw.get("pad_halfwidth", 0.11),
            centers=tuple(raw.get("centers", (0.0, 0.25, 0.5, 0.75))),
        )
    if kind in ("fuchsian2", "fuchsian_genus2"):
        return FuchsianGenus2Spec(**{k: v for k, v in raw.items() if k == "cosh_s"})
    raise ValueError(f"unknown circle spec {name!r}")


def cmd_perturb_verify(args) -> int:
    started = time.time()
    spec = _load_spec(args.spec)
    rho0 = standard_action(spec)
    try:
        rho = perturb(rho0, args.mode, args.eps, seed=args.seed)
    except (PingPongError, ValueError) as exc:
        _report(
            args.report,
            {
                "scenario": _echo(args),
                "checks": [{"name": "perturbation", "bound": "", "measured": str(exc), "pass": False}],
            },
            started,
        )
        return 1
    sc = build_semiconjugacy(rho0, rho, args.cap, grid=args.grid)
    words = list(reduced_words(rho0.generator_names(), args.verify_len))
    report = verify_semiconjugacy(sc.table, rho0, rho, words, args.grid)
    checks = [
        {
            "name": "monotone-degree-one",
            "bound": "true",
            "measured": str(report.monotone_degree_one).lower(),
            "pass": report.monotone_degree_one,
        },
        {
            "name": "equivariance-defect",
            "bound": str(args.tol),
            "measured": f"{report.defect:.3e}",
            "pass": report.defect < args.tol,
        },
    ]
    payload = {
        "scenario": _echo(args),
        "matched_pairs": len(sc.matched),
        "discarded_pairs": sc.discarded,
        "defect": report.defect,
        "distance_to_identity": report.distance_to_identity,
        "perturbation_size": action_distance(rho0, rho),
        "checks": checks,
    }
    _report(args.report, payload, started)
    if args.csv:
        xs = np.linspace(0.0, 1.0, 512, endpoint=False)
        ys = sc.table(xs)
        with open(args.csv, "w") as fh:
            fh.write("x,h(x)\n")
            for a, b in zip(xs, ys):
                fh.write(f"{a:.8f},{b:.8f}\n")
    return 0 if _checks_pass(checks) else 1


def cmd_run(args) -> int:
    try:
        with open(args.scenario) as fh:
            scenario = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return 2
    out = scenario.get("report")
    tasks = scenario.get("tasks", [])
    started = time.time()
    all_checks = []
    status = 0
    for task in tasks:
        argv = [task["command"]] + [str(x) for x in task.get("args", [])]
        code = main(argv)
        if code == 2:
            return 2
        status = max(status, code)
        all_checks.append({"name": task["command"], "bound": "exit 0", "measured": str(code), "pass": code == 0})
    _report(out, {"scenario": scenario, "checks": all_checks}, started)
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coarsegeo",
        description="Coarse-geometry checks on hyperbolic groups and circle actions",
    )
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("ball", help="build a Cayley ball and dump it as JSON")
    b.add_argument("--model", required=True)
    b.add_argument("--radius", type=int, required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_ball)

    d = sub.add_parser("delta", help="certify a hyperbolicity constant")
    d.add_argument("--model", required=True)
    d.add_argument("--radius", type=int, required=True)
    d.add_argument("--inner", type=int, default=3)
    d.add_argument("--seed", type=int, required=True)
    d.add_argument("--candidate")
    d.add_argument("--report")
    d.set_defaults(func=cmd_delta)

    g = sub.add_parser("gromov", help="product interval and visual distance of two rays")
    g.add_argument("--model", required=True)
    g.add_argument("--alpha", required=True)
    g.add_argument("--beta", required=True)
    g.add_argument("--depth", type=int, default=12)
    g.add_argument("--nu", default="0")
    g.add_argument("--lam", type=float, default=2.0)
    g.add_argument("--k1", type=float, default=1.0)
    g.add_argument("--k2", type=float, default=1.0)
    g.add_argument("--report")
    g.set_defaults(func=cmd_gromov)

    pr = sub.add_parser("project", help="coarse projection of a boundary triple")
    pr.add_argument("--model", required=True)
    pr.add_argument("--triple", nargs=3, required=True)
    pr.add_argument("--r", required=True)
    pr.add_argument("--depth", type=int, default=10)
    pr.add_argument("--report")
    pr.set_defaults(func=cmd_project)

    le = sub.add_parser("ledger", help="compute the explicit-constants ledger")
    le.add_argument("--model", required=True)
    le.add_argument("--radius", type=int, required=True)
    le.add_argument("--inner", type=int, default=3)
    le.add_argument("--cv", type=int, required=True)
    le.add_argument("--seed", type=int, required=True)
    le.add_argument("--triples", type=int, default=40)
    le.add_argument("--depth", type=int, default=8)
    le.add_argument("--q-scale-cap", type=int, default=4)
    le.add_argument("--out")
    le.set_defaults(func=cmd_ledger)

    br = sub.add_parser("broken", help="randomized broken-geodesic criterion scan")
    br.add_argument("--model", required=True)
    br.add_argument("--count", type=int, default=100)
    br.add_argument("--l", default="1")
    br.add_argument("--delta", required=True)
    br.add_argument("--seed", type=int, required=True)
    br.add_argument("--report")
    br.set_defaults(func=cmd_broken)

    rc = sub.add_parser("reconstruct", help="reconstruct a geodesic from noisy axis data")
    rc.add_argument("--model", required=True)
    rc.add_argument("--axis", required=True)
    rc.add_argument("--H", type=int, default=1)
    rc.add_argument("--R", type=int, required=True)
    rc.add_argument("--window", type=int, required=True)
    rc.add_argument("--delta", required=True)
    rc.add_argument("--nu", default="0")
    rc.add_argument("--seed", type=int, required=True)
    rc.add_argument("--report")
    rc.set_defaults(func=cmd_reconstruct)

    pv = sub.add_parser("perturb-verify", help="perturb a circle action and verify the semi-conjugacy")
    pv.add_argument("--spec", required=True)
    pv.add_argument("--eps", type=float, required=True)
    pv.add_argument("--mode", choices=["free", "conjugation"], required=True)
    pv.add_argument("--cap", type=int, default=6)
    pv.add_argument("--grid", type=int, default=4096)
    pv.add_argument("--seed", type=int, required=True)
    pv.add_argument("--verify-len", type=int, default=2)
    pv.add_argument("--tol", type=float, default=1e-3)
    pv.add_argument("--report")
    pv.add_argument("--csv")
    pv.set_defaults(func=cmd_perturb_verify)

    ru = sub.add_parser("run", help="run a JSON scenario file")
    ru.add_argument("scenario")
    ru.set_defaults(func=cmd_run)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except HypothesisError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
