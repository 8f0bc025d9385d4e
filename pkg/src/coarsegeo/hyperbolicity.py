"""Hyperbolicity constants at ball scale and the five-property certificate.

thin_constant measures triangle thinness through the comparison tripod:
for every sampled triangle and every enumerated choice of geodesic sides,
points mapping to the same tripod point must be close; the maximum such
distance is the thinness defect nu.  four_point_delta measures the
product inequality <a,b>_p >= min(<a,c>_p, <b,c>_p) - delta directly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .ball import Ball, GeodesicPath
from .geometry import geodesic_dag
from .models import distance as model_distance, gromov_product as model_product
from .triples import Triple, make_triple, projection_membership, standard_triple_grid
from .words import EMPTY, Word


@dataclass(frozen=True)
class SampleSpec:
    """Deterministic sampling plan for triangle/quadruple scans."""

    seed: int
    triangles: int = 2000
    quads: int = 3000
    exhaustive_limit: int = 50_000
    side_cap: int = 4

    def __post_init__(self):
        if self.triangles < 1 or self.quads < 1 or self.side_cap < 1:
            raise ValueError("sample sizes must be positive")


def _sample_tuples(items: List[Word], k: int, want: int, limit: int, seed: int):
    """All k-subsets if few enough, else a seeded uniform sample."""
    n = len(items)
    total = 1
    for i in range(k):
        total = total * (n - i) // (i + 1)
    if total <= limit:
        yield from itertools.combinations(items, k)
        return
    rng = random.Random(seed)
    seen = set()
    guard = 0
    while len(seen) < want and guard < 50 * want:
        guard += 1
        idx = tuple(sorted(rng.sample(range(n), k)))
        if idx in seen:
            continue
        seen.add(idx)
        yield tuple(items[i] for i in idx)


def _side_paths(ball: Ball, u: Word, v: Word, cap: int) -> List[List[Word]]:
    dag = geodesic_dag(ball.model, u, v)
    paths, _ = dag.paths(cap)
    return paths


def triangle_thinness(ball: Ball, x: Word, y: Word, z: Word, side_cap: int) -> Fraction:
    """Max distance between same-image tripod points over side choices."""
    model = ball.model
    dxy = model_distance(model, x, y)
    dxz = model_distance(model, x, z)
    dyz = model_distance(model, y, z)
    legs = {
        "x": Fraction(dxy + dxz - dyz, 2),
        "y": Fraction(dxy + dyz - dxz, 2),
        "z": Fraction(dxz + dyz - dxy, 2),
    }
    sides_xy = _side_paths(ball, x, y, side_cap)
    sides_xz = _side_paths(ball, x, z, side_cap)
    sides_yz = _side_paths(ball, y, z, side_cap)
    worst = Fraction(0)
    corner_data = (
        (legs["x"], sides_xy, sides_xz),
        (legs["y"], [p[::-1] for p in sides_xy], sides_yz),
        (legs["z"], [p[::-1] for p in sides_xz], [p[::-1] for p in sides_yz]),
    )
    for leg, fam1, fam2 in corner_data:
        tmax = int(leg)
        for p1 in fam1:
            for p2 in fam2:
                for t in range(1, tmax + 1):
                    d = model_distance(model, p1[t], p2[t])
                    if d > worst:
                        worst = Fraction(d)
    return worst


def thin_constant(ball: Ball, inner: int, sample: SampleSpec) -> Fraction:
    """Max tripod defect nu over sampled triangles with corners in B_inner."""
    if inner > ball.radius // 2:
        raise ValueError("inner radius must be at most half the ball radius")
    verts = ball.inner_vertices(inner)
    worst = Fraction(0)
    for x, y, z in _sample_tuples(
        verts, 3, sample.triangles, sample.exhaustive_limit, sample.seed
    ):
        d = triangle_thinness(ball, x, y, z, sample.side_cap)
        if d > worst:
            worst = d
    return worst


def four_point_delta(ball: Ball, inner: int, sample: SampleSpec) -> Fraction:
    """Max defect of <a,b>_p >= min(<a,c>_p, <b,c>_p) - delta on 4-tuples."""
    if inner > ball.radius // 2:
        raise ValueError("inner radius must be at most half the ball radius")
    verts = ball.inner_vertices(inner)
    model = ball.model
    worst = Fraction(0)
    for quad in _sample_tuples(
        verts, 4, sample.quads, sample.exhaustive_limit, sample.seed + 1
    ):
        for a, b, c, p in itertools.permutations(quad, 4):
            defect = min(
                model_product(model, a, c, p), model_product(model, b, c, p)
            ) - model_product(model, a, b, p)
            if defect > worst:
                worst = defect
    return worst


def _third_point_candidates(model, v: Word, grid: Sequence[Triple]):
    """Third boundary points likely to project near v: rays branching at v."""
    from .boundary import make_boundary_point

    for s in model.letters():
        try:
            yield make_boundary_point(model, v, (s,))
        except Exception:
            continue
    for t in grid:
        yield t.c


@dataclass(frozen=True)
class HyperbolicityCertificate:
    ball_radius: int
    inner_radius: int
    nu_thin: Fraction
    delta4: Fraction
    delta_certified: Fraction
    violations: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ball_radius": self.ball_radius,
            "inner_radius": self.inner_radius,
            "nu_thin": str(self.nu_thin),
            "delta4": str(self.delta4),
            "delta_certified": str(self.delta_certified),
            "violations": list(self.violations),
        }


def certify_delta(
    ball: Ball,
    candidate,
    inner: int = 3,
    sample: Optional[SampleSpec] = None,
    grid: Optional[Sequence[Triple]] = None,
    depth: Optional[int] = None,
) -> HyperbolicityCertificate:
    """Check the finite-scale delta properties for one candidate constant.

    (d1) sampled triangles are candidate-thin, (d3) the four-point
    inequality holds with candidate, (d4) sampled vertices have nonempty
    projection preimage at scale candidate, (d5) vertices on geodesics
    between sampled boundary pairs lie in some projection at scale
    candidate.  Failures are recorded as violations, never raised.
    """
    candidate = Fraction(candidate)
    sample = sample or SampleSpec(seed=20260808)
    model = ball.model
    nu = thin_constant(ball, inner, sample)
    if candidate < 2 * nu:
        raise ValueError(f"candidate {candidate} < 2 * thin constant {2 * nu}")
    d4 = four_point_delta(ball, inner, sample)
    violations: List[str] = []
    if nu > candidate:
        violations.append(f"delta1: thinness defect {nu} exceeds {candidate}")
    if d4 > candidate:
        violations.append(f"delta3: four-point defect {d4} exceeds {candidate}")
    depth = depth or max(6, min(10, ball.radius + 2))
    grid = list(grid) if grid is not None else standard_triple_grid(model, 12, sample.seed)
    # (d4): find a witness triple projecting onto the origin, then translate
    witness = None
    for t in grid:
        if projection_membership(model, EMPTY, t, candidate, depth):
            witness = t
            break
    if witness is None:
        violations.append("delta4: no sampled triple projects onto the origin")
    else:
        for p in ball.inner_vertices(min(2, ball.radius)):
            if not projection_membership(
                model, p, witness.translated(p), candidate, depth
            ):
                violations.append(
                    f"delta4: empty preimage at vertex {model.text(p) or 'e'!r}"
                )
                break
    # (d5): geodesics between boundary pairs are covered by projections
    pair_budget = 3
    pairs_checked = 0
    for t in grid:
        if pairs_checked >= pair_budget:
            break
        a, b = t.a, t.b
        pairs_checked += 1
        wa = a.truncation(depth)
        wb = b.truncation(depth)
        dag = geodesic_dag(model, wa, wb)
        mid_vertices = [
            v
            for layer in dag.layers
            for v in layer
            if len(v) <= min(2, ball.radius)
        ]
        for v in mid_vertices:
            covered = False
            for c in _third_point_candidates(model, v, grid):
                try:
                    cand_triple = make_triple(model, a, b, c, depth)
                except Exception:
                    continue
                if projection_membership(model, v, cand_triple, candidate, depth):
                    covered = True
                    break
            if not covered:
                violations.append(
                    f"delta5: vertex {model.text(v) or 'e'!r} on a geodesic "
                    f"not covered at scale {candidate}"
                )
                break
    return HyperbolicityCertificate(
        ball.radius, inner, nu, d4, candidate, tuple(violations)
    )


@dataclass(frozen=True)
class RayProductReport:
    max_violation: Fraction
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return self.max_violation <= 0


def ray_product_bound_check(
    ball: Ball, p: Word, ray_a: GeodesicPath, ray_b: GeodesicPath, nu
) -> RayProductReport:
    """Verify later ray points never drop the product by more than 2 nu.

    For a on ray_a, b on ray_b and any later pair (c, d), checks
    <c,d>_p >= <a,b>_p - 2 nu; the report carries the worst signed margin.
    """
    model = ball.model
    nu = Fraction(nu)
    pa = ball.vertex(p)
    if ray_a.start != pa or ray_b.start != pa:
        raise ValueError("both rays must start at the basepoint")
    na, nb = len(ray_a.vertices), len(ray_b.vertices)
    prod = [
        [model_product(model, ray_a.vertices[i], ray_b.vertices[j], pa) for j in range(nb)]
        for i in range(na)
    ]
    # later_min[i][j] = min product over (i' >= i, j' >= j)
    later_min = [row[:] for row in prod]
    for i in range(na - 1, -1, -1):
        for j in range(nb - 1, -1, -1):
            m = later_min[i][j]
            if i + 1 < na:
                m = min(m, later_min[i + 1][j])
            if j + 1 < nb:
                m = min(m, later_min[i][j + 1])
            later_min[i][j] = m
    worst = Fraction(-10 ** 9)
    count = 0
    for i in range(na):
        for j in range(nb):
            count += 1
            violation = (prod[i][j] - 2 * nu) - later_min[i][j]
            if violation > worst:
                worst = violation
    return RayProductReport(worst, count)
