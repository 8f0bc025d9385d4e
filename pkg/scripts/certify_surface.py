#!/usr/bin/env python3
"""Certify the genus-2 surface group constants and print the ledger.

Builds the radius-6 Cayley ball, measures the thinness and four-point
constants, certifies the smallest admissible delta, samples projection
diameters at a feasible scale, and assembles the explicit-constants
ledger for a chosen closeness target C_V.
"""

import argparse
import time
from fractions import Fraction

from coarsegeo.ball import get_ball
from coarsegeo.hyperbolicity import SampleSpec, certify_delta, thin_constant
from coarsegeo.models import get_model
from coarsegeo.triples import (
    build_ledger,
    coarse_projection,
    preimage_projection_diameter,
    projection_diameter,
    standard_triple_grid,
)
from coarsegeo.words import EMPTY


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--radius", type=int, default=6)
    ap.add_argument("--inner", type=int, default=3)
    ap.add_argument("--seed", type=int, default=20260808)
    ap.add_argument("--cv", type=int, default=10)
    ap.add_argument("--triples", type=int, default=60)
    ap.add_argument("--q-scale-cap", type=int, default=4)
    args = ap.parse_args()

    model = get_model("surface:2")
    t0 = time.time()
    ball = get_ball("surface:2", args.radius)
    print(f"ball radius {args.radius}: {len(ball)} vertices ({time.time()-t0:.1f}s)")

    sample = SampleSpec(seed=args.seed)
    nu = thin_constant(ball, args.inner, sample)
    cert = certify_delta(ball, 2 * nu, inner=args.inner, sample=sample)
    if cert.violations:
        cert = certify_delta(ball, 2 * nu + 1, inner=args.inner, sample=sample)
    print(f"nu = {cert.nu_thin}, four-point = {cert.delta4}, "
          f"certified delta = {cert.delta_certified} (violations: {list(cert.violations) or 'none'})")

    delta = cert.delta_certified
    r_q = min(3 * delta, Fraction(args.q_scale_cap))
    grid = standard_triple_grid(model, args.triples, args.seed, depth=10)
    survey = projection_diameter(model, grid, r_q, 8)
    capped = " (capped)" if r_q < 3 * delta else ""
    print(f"Q_emp at scale {r_q}{capped}: {survey.q_emp} over {args.triples} triples, "
          f"{survey.empty_count} empty")

    preim = [t for t in grid if EMPTY in coarse_projection(model, t, r_q, 8).vertices]
    diam_d0 = preimage_projection_diameter(model, preim, r_q, 8) if preim else 0
    print(f"preimage of origin: {len(preim)} triples, diam pi(D0) = {diam_d0}")

    ledger = build_ledger(delta, survey.q_emp, diam_d0, args.cv)
    print("ledger:", ledger.to_json())


if __name__ == "__main__":
    main()
