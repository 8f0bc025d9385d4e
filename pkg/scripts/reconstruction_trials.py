#!/usr/bin/env python3
"""Seeded reconstruction trials from noisy axis data, with bound margins."""

import argparse
from fractions import Fraction

from coarsegeo.models import get_model
from coarsegeo.recognition import axis_window, noisy_axis_data, reconstruct


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--model", default="surface:2")
    ap.add_argument("--axis", default="a1 b1")
    ap.add_argument("--delta", default="8")
    ap.add_argument("--nu", default="4")
    ap.add_argument("--H", type=int, default=1)
    ap.add_argument("--window", type=int, default=128)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20260808)
    args = ap.parse_args()

    model = get_model(args.model)
    delta = Fraction(args.delta)
    nu = Fraction(args.nu)
    R = int(24 * args.H + 16 * delta) + 1
    bound_h = 3 * args.H + 6 * delta
    bound_p = R - (4 * args.H + 10 * delta) - 2 * nu
    print(f"model {args.model}: minimal R = {R}, bounds: hausdorff <= {bound_h}, "
          f"products >= {bound_p}")
    axis = axis_window(model, args.axis, args.window)
    worst_h, worst_p = 0, None
    for k in range(args.trials):
        data = noisy_axis_data(model, axis, args.H, R, seed=args.seed + k)
        res = reconstruct(data, delta, nu, model)
        worst_h = max(worst_h, res.hausdorff_to_S)
        p = min(res.endpoint_products)
        worst_p = p if worst_p is None else min(worst_p, p)
    print(f"{args.trials} trials: max hausdorff {worst_h}, min endpoint product {worst_p}")


if __name__ == "__main__":
    main()
