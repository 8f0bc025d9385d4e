#!/usr/bin/env python3
"""Run both circle-perturbation experiments and print their reports.

Conjugation mode moves the whole Fuchsian action by a small
homeomorphism (the recovered factor map should invert it); free-noise
mode perturbs the Schottky generators independently and the factor map
collapses the gaps of the perturbed minimal set.
"""

import argparse
import time

import numpy as np

from coarsegeo.circle import (
    FuchsianGenus2Spec,
    SchottkySpec,
    build_semiconjugacy,
    cover_length,
    covers_nest_strictly,
    minimal_set,
    perturb,
    reduced_words,
    standard_action,
    verify_semiconjugacy,
)


def conjugation_run(eps, seed, cap, verify_len, grid):
    rho0 = standard_action(FuchsianGenus2Spec())
    rho = perturb(rho0, "conjugation", eps, seed=seed)
    t0 = time.time()
    sc = build_semiconjugacy(rho0, rho, cap)
    words = list(reduced_words(rho0.generator_names(), verify_len, cyclically_reduced=False))
    rep = verify_semiconjugacy(sc.table, rho0, rho, words, grid=grid)
    print(f"[conjugation eps={eps}] matched={len(sc.matched)} discarded={sc.discarded} "
          f"defect={rep.defect:.2e} |h-id|={rep.distance_to_identity:.4f} "
          f"({time.time()-t0:.0f}s, {len(words)} words)")


def free_noise_run(eps, seed, cap, depth):
    rho0 = standard_action(SchottkySpec())
    rho = perturb(rho0, "free", eps, seed=seed)
    t0 = time.time()
    sc = build_semiconjugacy(rho0, rho, cap)
    covers = minimal_set(rho, depth)
    nested = all(covers_nest_strictly(covers[d - 1], covers[d]) for d in range(1, depth))
    sample = np.array(sorted({e for arc in covers[-1] for e in arc}))
    gens = [(n,) for n in rho0.generator_names()]
    gens += [(n.upper(),) for n in rho0.generator_names()]
    rep = verify_semiconjugacy(sc.table, rho0, rho, gens, sample_points=sample)
    lengths = ", ".join(f"{cover_length(c):.4f}" for c in covers)
    print(f"[free eps={eps}] matched={len(sc.matched)} defect={rep.defect:.2e} "
          f"nested={nested} cover lengths: {lengths} ({time.time()-t0:.0f}s)")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps-conj", type=float, default=0.01)
    ap.add_argument("--eps-free", type=float, default=0.005)
    ap.add_argument("--seed", type=int, default=20260808)
    ap.add_argument("--cap", type=int, default=8)
    ap.add_argument("--verify-len", type=int, default=3)
    ap.add_argument("--grid", type=int, default=4096)
    ap.add_argument("--depth", type=int, default=8)
    args = ap.parse_args()
    conjugation_run(args.eps_conj, args.seed, args.cap, args.verify_len, args.grid)
    free_noise_run(args.eps_free, args.seed, args.cap, args.depth)


if __name__ == "__main__":
    main()
