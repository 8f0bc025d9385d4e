"""Ordered boundary triples, coarse projection to the Cayley graph, constants.

The projection of a triple at scale r is the set of vertices lying within
closed distance r-1 of every geodesic joining the three points (geodesics
are proxied by geodesics between depth-N ray truncations).  Closed
neighborhoods on a graph with integer distances keep pi_1 meaningful; the
open convention would make every radius-0 neighborhood empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Set, Tuple, Union

from .ball import Ball
from .boundary import (
    BoundaryPoint,
    NotDistinctError,
    PrecisionError,
    gromov_product_infinity,
    make_boundary_point,
)
from .geometry import GeodesicDag, geodesic_dag, near_set
from .models import GroupModel, canon, distance
from .words import EMPTY, Word, free_reduce, shortlex_key


def set_diameter(model: GroupModel, vertices: Sequence[Word]) -> int:
    """Exact diameter of a finite vertex set.

    Pairs (x, y) with d(x, v0) + d(v0, y) <= best cannot improve on the
    current best, so a farthest-point sweep prunes most of the quadratic
    scan; the remaining pairs are checked exactly.
    """
    vs = list(vertices)
    n = len(vs)
    if n < 2:
        return 0
    v0 = vs[0]
    d0 = [distance(model, v0, v) for v in vs]
    best = max(d0)
    order = sorted(range(n), key=lambda i: -d0[i])
    for ai in range(n):
        i = order[ai]
        if 2 * d0[i] <= best:
            break
        for aj in range(ai + 1, n):
            j = order[aj]
            if d0[i] + d0[j] <= best:
                break
            d = distance(model, vs[i], vs[j])
            if d > best:
                best = d
    return best


@dataclass(frozen=True)
class Triple:
    a: BoundaryPoint
    b: BoundaryPoint
    c: BoundaryPoint

    def points(self) -> Tuple[BoundaryPoint, BoundaryPoint, BoundaryPoint]:
        return (self.a, self.b, self.c)

    def translated(self, g: Word) -> "TranslatedTriple":
        return TranslatedTriple(self, tuple(g))


@dataclass(frozen=True)
class TranslatedTriple:
    """g . (a, b, c): truncations are left-translated by g."""

    base: Triple
    g: Word


def make_triple(b: Union[Ball, GroupModel], a, bb, c, depth: int = 12) -> Triple:
    """Validate pairwise distinctness via stabilized products at the origin."""
    model = b.model if isinstance(b, Ball) else b
    pts = [
        p if isinstance(p, BoundaryPoint) else make_boundary_point(model, p)
        for p in (a, bb, c)
    ]
    for i in range(3):
        for j in range(i + 1, 3):
            gromov_product_infinity(model, EMPTY, pts[i], pts[j], depth)
    return Triple(*pts)


@dataclass(frozen=True)
class ProjectionResult:
    vertices: Tuple[Word, ...]
    r: Fraction
    depth: int
    truncated: bool

    def __contains__(self, w) -> bool:
        return tuple(w) in self.vertices

    def diameter(self, model: GroupModel) -> int:
        return set_diameter(model, self.vertices)


def _triple_truncations(
    model: GroupModel, t: Union[Triple, TranslatedTriple], depth: int
) -> Tuple[Word, Word, Word]:
    if isinstance(t, TranslatedTriple):
        g = t.g
        return tuple(
            canon(model, free_reduce(g + p.truncation(depth)))
            for p in t.base.points()
        )
    return tuple(canon(model, p.truncation(depth)) for p in t.points())


def _pair_dags(model: GroupModel, wa: Word, wb: Word, wc: Word) -> List[GeodesicDag]:
    return [
        geodesic_dag(model, wa, wb),
        geodesic_dag(model, wb, wc),
        geodesic_dag(model, wa, wc),
    ]


def _central_sources(
    model: GroupModel, dags: Sequence[GeodesicDag], reach: int
) -> List[List[Word]]:
    """Per family, interval vertices within 2*reach of both other intervals.

    Any vertex of pi_r is within reach of every geodesic, so its closest
    point on one interval is within 2*reach of the other two; restricting
    the candidate search to these central stretches loses nothing.
    """
    vertex_sets = [sorted(d.vertex_set(), key=shortlex_key) for d in dags]
    out: List[List[Word]] = []
    for i, verts in enumerate(vertex_sets):
        others = [vertex_sets[j] for j in range(3) if j != i]
        central = []
        for v in verts:
            ok = True
            for other in others:
                if min(distance(model, v, z) for z in other) > 2 * reach:
                    ok = False
                    break
            if ok:
                central.append(v)
        out.append(central)
    return out


def _blocked_vertices(
    model: GroupModel, x: Word, dag: GeodesicDag, reach: int
) -> Set[Word]:
    """Interval vertices within closed reach of x, pruned by layer index."""
    d_ux = distance(model, dag.u, x)
    blocked: Set[Word] = set()
    for k, layer in enumerate(dag.layers):
        if abs(d_ux - k) > reach:
            continue
        for z in layer:
            if distance(model, x, z) <= reach:
                blocked.add(z)
    return blocked


def projection_membership(
    b: Union[Ball, GroupModel],
    v,
    t: Union[Triple, TranslatedTriple],
    r,
    depth: int,
) -> bool:
    """Is vertex v in pi_r of the triple?  Checked without enumerating pi_r.

    Works at any scale r: the blocked set per geodesic family is found by
    banded word distances, so no neighborhood of radius r-1 is built.
    """
    model = b.model if isinstance(b, Ball) else b
    x = canon(model, model.word(v) if isinstance(v, str) else tuple(v))
    reach = math.floor(Fraction(r) - 1)
    if reach < 0:
        return False
    wa, wb, wc = _triple_truncations(model, t, depth)
    for dag in _pair_dags(model, wa, wb, wc):
        if dag.avoids(_blocked_vertices(model, x, dag, reach)):
            return False
    return True


def coarse_projection(
    b: Union[Ball, GroupModel],
    t: Union[Triple, TranslatedTriple],
    r,
    depth: int,
    budget: int = 400_000,
) -> ProjectionResult:
    """Vertices within closed r-1 of every geodesic between the truncations."""
    model = b.model if isinstance(b, Ball) else b
    r = Fraction(r)
    reach = math.floor(r - 1)
    if isinstance(b, Ball) and depth > b.radius:
        raise ValueError(f"truncation depth {depth} escapes ball radius {b.radius}")
    wa, wb, wc = _triple_truncations(model, t, depth)
    if reach < 0:
        return ProjectionResult((), r, depth, False)
    dags = _pair_dags(model, wa, wb, wc)
    centrals = _central_sources(model, dags, reach)
    if any(not c for c in centrals):
        return ProjectionResult((), r, depth, False)
    cand_sets = [set(near_set(model, c, reach, budget)) for c in centrals]
    candidates = sorted(cand_sets[0] & cand_sets[1] & cand_sets[2], key=shortlex_key)
    hits = []
    for x in candidates:
        if all(
            not dag.avoids(_blocked_vertices(model, x, dag, reach)) for dag in dags
        ):
            hits.append(x)
    return ProjectionResult(tuple(hits), r, depth, False)


@dataclass(frozen=True)
class DiameterSurvey:
    q_emp: int
    diameters: Tuple[int, ...]
    empty_count: int
    r: Fraction
    depth: int


def projection_diameter(
    b: Union[Ball, GroupModel],
    triples: Sequence[Union[Triple, TranslatedTriple]],
    r,
    depth: int,
) -> DiameterSurvey:
    """Empirical max diameter Q_emp(r) over a sample of triples."""
    model = b.model if isinstance(b, Ball) else b
    diams: List[int] = []
    empty = 0
    for t in triples:
        proj = coarse_projection(b, t, r, depth)
        if not proj.vertices:
            empty += 1
            continue
        diams.append(proj.diameter(model))
    q = max(diams) if diams else 0
    return DiameterSurvey(q, tuple(diams), empty, Fraction(r), depth)


def vertex_preimage(
    b: Union[Ball, GroupModel],
    v,
    r,
    triple_grid: Sequence[Triple],
    depth: int,
) -> List[Triple]:
    """All sampled triples whose projection contains v."""
    return [t for t in triple_grid if projection_membership(b, v, t, r, depth)]


def preimage_projection_diameter(
    b: Union[Ball, GroupModel],
    triples: Sequence[Triple],
    r,
    depth: int,
) -> int:
    """Diameter of the union of projections of a preimage sample.

    This is the finite stand-in for diam(pi(D_0)) with D_0 the sampled
    preimage of the origin.
    """
    model = b.model if isinstance(b, Ball) else b
    union: Set[Word] = set()
    for t in triples:
        union.update(coarse_projection(b, t, r, depth).vertices)
    return set_diameter(model, sorted(union, key=shortlex_key))


@dataclass(frozen=True)
class ConstantsLedger:
    """The explicit constants computed at finite scale."""

    delta: Fraction
    Q_of_3delta: int
    H: int
    diam_pi_D0: int
    C_V: int
    R: int

    def __post_init__(self):
        if self.H != int(max(2 * self.delta, self.Q_of_3delta)) + 1:
            raise ValueError("H must equal max(2 delta, Q(3 delta)) + 1")
        bound = max(
            24 * self.H + 52 * self.delta + self.diam_pi_D0,
            self.C_V + 4 * self.H + 11 * self.delta,
        )
        if not self.R > bound:
            raise ValueError("R must exceed max(24H + 52d + diam, C_V + 4H + 11d)")

    def to_json(self) -> dict:
        return {
            "delta": str(self.delta),
            "Q_of_3delta": self.Q_of_3delta,
            "H": self.H,
            "diam_pi_D0": self.diam_pi_D0,
            "C_V": self.C_V,
            "R": self.R,
        }


def build_ledger(delta, Q3d: int, diam_pi_D0: int, C_V) -> ConstantsLedger:
    """H = max(2 delta, Q(3 delta)) + 1 and the least admissible integer R."""
    delta = Fraction(delta)
    if delta < 0 or Q3d < 0 or diam_pi_D0 < 0 or C_V < 0:
        raise ValueError("ledger inputs must be nonnegative")
    H = int(max(2 * delta, Fraction(Q3d))) + 1
    bound = max(24 * H + 52 * delta + diam_pi_D0, Fraction(C_V) + 4 * H + 11 * delta)
    R = math.floor(bound) + 1
    return ConstantsLedger(delta, Q3d, H, diam_pi_D0, int(C_V), R)


# -- triple grids -----------------------------------------------------------

_FREE_PERIOD_POOL = ["a", "b", "A", "B", "ab", "aB", "ba", "bA", "aab", "abb"]


def _surface_period_pool(model: GroupModel) -> List[str]:
    return [
        "a1", "b1", "A1", "B1", "a2", "b2",
        "a1 b1", "a1 B1", "b1 a2", "a1 a2", "a1 b2", "b1 b2",
        "a1 b1 A1 B1",
    ]


def standard_triple_grid(
    model: GroupModel, count: int, seed: int, depth: int = 12
) -> List[Triple]:
    """A deterministic sample of pairwise-distinct boundary triples."""
    import random

    rng = random.Random(seed)
    pool_text = (
        _FREE_PERIOD_POOL if model.kind == "free" else _surface_period_pool(model)
    )
    points: List[BoundaryPoint] = []
    for text in pool_text:
        try:
            points.append(make_boundary_point(model, f"|{text}"))
        except Exception:
            continue
    letters = model.letters()
    attempts = 0
    while len(points) < max(10, count // 2) and attempts < 400:
        attempts += 1
        per = tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
        pre = tuple(rng.choice(letters) for _ in range(rng.randint(0, 2)))
        try:
            points.append(make_boundary_point(model, pre, per))
        except Exception:
            continue
    triples: List[Triple] = []
    guard = 0
    while len(triples) < count and guard < 40 * count:
        guard += 1
        a, bb, c = rng.sample(points, 3)
        try:
            triples.append(make_triple(model, a, bb, c, depth))
        except (NotDistinctError, PrecisionError):
            continue
    if len(triples) < count:
        raise RuntimeError(f"could not build {count} distinct triples (got {len(triples)})")
    return triples
