"""Broken-geodesic recognition and reconstruction of geodesics from coarse data.

Two engines live here.  check_broken_geodesic tests the criterion that a
piecewise geodesic with long segments (> 2l + 8 delta) and small corner
products (<= l) stays within Hausdorff distance l + 4 delta of a genuine
geodesic.  reconstruct builds a geodesic window out of a coarsely
geodesic set S (every window of radius R looks H-close to a local
geodesic) by chaining points roughly R/2 apart, then certifies the
Hausdorff and endpoint-product guarantees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .ball import Ball, GeodesicPath
from .geometry import canonical_geodesic
from .models import (
    GroupModel,
    canon,
    dehn_reduce,
    distance,
    geodesic_word,
    gromov_product,
)
from .words import Word, free_reduce, inverse, shortlex_key


class HypothesisError(RuntimeError):
    """A reconstruction hypothesis failed; .step names the failed stage."""

    def __init__(self, step: str, message: str):
        super().__init__(f"{step}: {message}")
        self.step = step


def _model_of(b: Union[Ball, GroupModel]) -> GroupModel:
    return b.model if isinstance(b, Ball) else b


# -- piecewise geodesics ------------------------------------------------------


@dataclass
class PiecewiseGeodesic:
    breakpoints: List[Word]
    segments: List[GeodesicPath]

    def __post_init__(self):
        if len(self.breakpoints) < 2 or len(self.segments) != len(self.breakpoints) - 1:
            raise ValueError("need k >= 1 segments joining k+1 breakpoints")

    def vertices(self) -> List[Word]:
        out: List[Word] = list(self.segments[0].vertices)
        for seg in self.segments[1:]:
            out.extend(seg.vertices[1:])
        return out

    @staticmethod
    def through(model: GroupModel, breakpoints: Sequence[Word]) -> "PiecewiseGeodesic":
        """Join consecutive breakpoints by their canonical geodesics."""
        pts = [canon(model, p) for p in breakpoints]
        segs = [
            GeodesicPath(tuple(canonical_geodesic(model, pts[i], pts[i + 1])))
            for i in range(len(pts) - 1)
        ]
        return PiecewiseGeodesic(pts, segs)


def corner_products(pw: PiecewiseGeodesic, b: Union[Ball, GroupModel]) -> List[Fraction]:
    """Gromov products <p_{i-1}, p_{i+1}>_{p_i} at the interior breakpoints."""
    model = _model_of(b)
    pts = pw.breakpoints
    return [
        gromov_product(model, pts[i - 1], pts[i + 1], pts[i])
        for i in range(1, len(pts) - 1)
    ]


def _directed_hausdorff(
    model: GroupModel, xs: Sequence[Word], ys: Sequence[Word], window: int = 0
) -> int:
    """max over xs of distance to ys; index-windowed first, exact fallback.

    The window is only a search accelerator: a full scan confirms any
    candidate maximum before it is returned.
    """
    worst = 0
    n, m = len(xs), len(ys)
    for i, x in enumerate(xs):
        center = round(i * (m - 1) / max(1, n - 1))
        best = None
        if window > 0:
            lo, hi = max(0, center - window), min(m, center + window + 1)
            best = min(distance(model, x, ys[j]) for j in range(lo, hi))
        if best is None or best > worst:
            best = min(distance(model, x, y) for y in ys)
        if best > worst:
            worst = best
    return worst


def hausdorff_distance(
    model: GroupModel, xs: Sequence[Word], ys: Sequence[Word], window: int = 12
) -> int:
    return max(
        _directed_hausdorff(model, xs, ys, window),
        _directed_hausdorff(model, ys, xs, window),
    )


@dataclass(frozen=True)
class BrokenGeodesicVerdict:
    segments_long: bool
    corners_small: bool
    hausdorff: int
    bound: Fraction
    segment_lengths: Tuple[int, ...]
    corner_values: Tuple[Fraction, ...]

    @property
    def hypotheses_hold(self) -> bool:
        return self.segments_long and self.corners_small

    @property
    def passed(self) -> bool:
        return (not self.hypotheses_hold) or Fraction(self.hausdorff) <= self.bound


def check_broken_geodesic(
    pw: PiecewiseGeodesic, l, delta, b: Union[Ball, GroupModel]
) -> BrokenGeodesicVerdict:
    """Exact Hausdorff comparison of pw against a geodesic with its endpoints."""
    model = _model_of(b)
    l = Fraction(l)
    delta = Fraction(delta)
    seg_lengths = tuple(len(s) for s in pw.segments)
    segments_long = all(Fraction(s) > 2 * l + 8 * delta for s in seg_lengths)
    corners = tuple(corner_products(pw, model))
    corners_small = all(c <= l for c in corners)
    geo = canonical_geodesic(model, pw.breakpoints[0], pw.breakpoints[-1])
    hd = hausdorff_distance(model, pw.vertices(), geo)
    return BrokenGeodesicVerdict(
        segments_long, corners_small, hd, l + 4 * delta, seg_lengths, corners
    )


# -- r-connected components ---------------------------------------------------


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def r_connected_components(
    S: Sequence[Word], r, b: Union[Ball, GroupModel]
) -> List[List[Word]]:
    """Partition S into maximal subsets chainable by steps of length <= r."""
    model = _model_of(b)
    verts = sorted({canon(model, s) for s in S}, key=shortlex_key)
    uf = _UnionFind(len(verts))
    r = Fraction(r)
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if Fraction(distance(model, verts[i], verts[j])) <= r:
                uf.union(i, j)
    groups: Dict[int, List[Word]] = {}
    for i, v in enumerate(verts):
        groups.setdefault(uf.find(i), []).append(v)
    return [groups[k] for k in sorted(groups)]


# -- reconstruction -----------------------------------------------------------


@dataclass
class CoarseGeodesicData:
    """A coarsely geodesic set with its local geodesic windows.

    For every s in S the window gamma_s must H-approximate S inside the
    R-ball around s, in both directions.
    """

    S: List[Word]
    local_geodesics: Dict[Word, GeodesicPath]
    H: int
    R: int

    def validate(self, model: GroupModel) -> None:
        if self.H <= 0 or self.R <= 0:
            raise HypothesisError("data", "H and R must be positive")
        verts = sorted({canon(model, s) for s in self.S}, key=shortlex_key)
        if len(verts) != len(self.S):
            raise HypothesisError("data", "S contains repeated vertices")
        comps = r_connected_components(verts, Fraction(self.R, 4), model)
        if len(comps) != 1:
            raise HypothesisError(
                "connectivity", f"S splits into {len(comps)} R/4-connected components"
            )
        # distances to a window are memoized per distinct window object:
        # synthetic data reuses one axis window for every base point
        to_gamma: Dict[int, Dict[Word, int]] = {}
        gamma_to_S: Dict[int, List[int]] = {}
        for s in verts:
            gamma = self.local_geodesics.get(s)
            if gamma is None:
                raise HypothesisError("data", f"no local geodesic at {model.text(s)!r}")
            gid = id(gamma)
            if gid not in to_gamma:
                to_gamma[gid] = {
                    x: min(distance(model, x, gv) for gv in gamma.vertices)
                    for x in verts
                }
                gamma_to_S[gid] = [
                    min(distance(model, gv, x) for x in verts)
                    for gv in gamma.vertices
                ]
            dist_map = to_gamma[gid]
            for x in verts:
                if distance(model, s, x) <= self.R and dist_map[x] > self.H:
                    raise HypothesisError(
                        "local-fit",
                        f"S point {model.text(x)!r} is farther than H from "
                        f"gamma_s at {model.text(s)!r}",
                    )
            for gv, d_to_S in zip(gamma.vertices, gamma_to_S[gid]):
                if distance(model, s, gv) <= self.R and d_to_S > self.H:
                    raise HypothesisError(
                        "local-fit",
                        f"gamma_s vertex {model.text(gv)!r} is farther than H from S",
                    )


@dataclass(frozen=True)
class ReconstructionResult:
    chain: Tuple[Word, ...]
    path: PiecewiseGeodesic
    limit_geodesic: GeodesicPath
    hausdorff_to_S: int
    endpoint_products: Tuple[Fraction, Fraction]
    chain_spacings: Tuple[int, ...]
    chain_corner_products: Tuple[Fraction, ...]
    excluded_tail_points: int

    def to_json(self, model: GroupModel) -> dict:
        return {
            "chain": [model.text(s) for s in self.chain],
            "hausdorff_to_S": self.hausdorff_to_S,
            "endpoint_products": [str(p) for p in self.endpoint_products],
            "chain_spacings": list(self.chain_spacings),
            "chain_corner_products": [str(c) for c in self.chain_corner_products],
            "excluded_tail_points": self.excluded_tail_points,
        }


def _nearest_in(
    model: GroupModel, target: Word, pool: Sequence[Word], cap: int
) -> Optional[Word]:
    """Shortlex-least pool vertex within cap of target, None if none."""
    best: Optional[Word] = None
    best_d = cap + 1
    for p in sorted(pool, key=shortlex_key):
        d = distance(model, target, p)
        if d < best_d or (d == best_d and best is None):
            best, best_d = p, d
    return best if best_d <= cap else None


def _gamma_anchor(model: GroupModel, gamma: GeodesicPath, s: Word, H: int) -> int:
    ds = [distance(model, s, v) for v in gamma.vertices]
    j = min(range(len(ds)), key=lambda i: (ds[i], i))
    if ds[j] > H:
        raise HypothesisError(
            "anchor", f"gamma_s passes no closer than {ds[j]} > H to its base point"
        )
    return j


def reconstruct(
    data: CoarseGeodesicData,
    delta,
    nu,
    b: Union[Ball, GroupModel],
) -> ReconstructionResult:
    """Chain points of S roughly R/2 apart and certify the geodesic guarantees.

    Refuses to run unless R > 24 H + 16 delta; every other hypothesis
    failure raises a HypothesisError naming the failed step.
    """
    model = _model_of(b)
    delta = Fraction(delta)
    nu = Fraction(nu)
    H, R = data.H, data.R
    if not Fraction(R) > 24 * H + 16 * delta:
        raise HypothesisError(
            "precondition", f"R = {R} must exceed 24H + 16 delta = {24 * H + 16 * delta}"
        )
    data.validate(model)
    verts = sorted({canon(model, s) for s in data.S}, key=shortlex_key)
    origin = min(verts, key=lambda v: (len(v), shortlex_key(v)))
    step = R // 2

    def extend(start: Word, sign: int) -> List[Word]:
        """Walk along local geodesics in one direction until data runs out."""
        chain = [start]
        prev: Optional[Word] = None
        while True:
            s = chain[-1]
            gamma = data.local_geodesics[s]
            j0 = _gamma_anchor(model, gamma, s, H)
            if prev is None:
                direction = sign
            else:
                d_lo = (
                    distance(model, prev, gamma.vertices[0]),
                    distance(model, prev, gamma.vertices[-1]),
                )
                direction = 1 if d_lo[0] < d_lo[1] else -1
            target_idx = j0 + direction * step
            if not 0 <= target_idx < len(gamma.vertices):
                return chain  # window frontier
            target = gamma.vertices[target_idx]
            nxt = _nearest_in(model, target, verts, H)
            if nxt is None:
                raise HypothesisError(
                    "chain",
                    f"no S point within H of the step target from {model.text(s)!r}",
                )
            if nxt in chain:
                return chain
            chain.append(nxt)

    forward = extend(origin, +1)
    backward = extend(origin, -1)
    chain = list(reversed(backward[1:])) + forward
    if len(chain) < 3:
        raise HypothesisError(
            "chain", f"chain has only {len(chain)} points; need at least 3"
        )
    spacings = tuple(
        distance(model, chain[i], chain[i + 1]) for i in range(len(chain) - 1)
    )
    corner_vals = tuple(
        gromov_product(model, chain[i - 1], chain[i + 1], chain[i])
        for i in range(1, len(chain) - 1)
    )
    for i, sp in enumerate(spacings):
        if not Fraction(sp) <= Fraction(R, 2) + 2 * H:
            raise HypothesisError(
                "spacing", f"chain step {i} has length {sp} > R/2 + 2H"
            )
    for i, cp in enumerate(corner_vals):
        if not cp <= 5 * H:
            raise HypothesisError(
                "corners", f"chain corner {i} has product {cp} > 5H"
            )
    path = PiecewiseGeodesic.through(model, chain)
    limit = GeodesicPath(tuple(canonical_geodesic(model, chain[0], chain[-1])))

    # Hausdorff within the chain window: S points past the extreme
    # breakpoints are frontier stragglers (a longer window would absorb
    # them), so only points between the extremes are compared.
    span = distance(model, chain[0], chain[-1])
    in_window = [
        s
        for s in verts
        if distance(model, s, chain[0]) <= span and distance(model, s, chain[-1]) <= span
    ]
    excluded = len(verts) - len(in_window)
    hd = hausdorff_distance(model, in_window, list(limit.vertices))

    # endpoint products at the seed point, against its own local window
    gamma0 = data.local_geodesics[origin]
    plus, minus = limit.vertices[-1], limit.vertices[0]
    g_plus, g_minus = gamma0.vertices[-1], gamma0.vertices[0]
    pairing_a = min(
        gromov_product(model, plus, g_plus, origin),
        gromov_product(model, minus, g_minus, origin),
    )
    pairing_b = min(
        gromov_product(model, plus, g_minus, origin),
        gromov_product(model, minus, g_plus, origin),
    )
    if pairing_a >= pairing_b:
        products = (
            gromov_product(model, plus, g_plus, origin) - 2 * nu,
            gromov_product(model, minus, g_minus, origin) - 2 * nu,
        )
    else:
        products = (
            gromov_product(model, plus, g_minus, origin) - 2 * nu,
            gromov_product(model, minus, g_plus, origin) - 2 * nu,
        )
    return ReconstructionResult(
        tuple(chain),
        path,
        limit,
        hd,
        products,
        spacings,
        corner_vals,
        excluded,
    )


def random_broken_geodesic(
    model: GroupModel,
    l,
    delta,
    seed: int,
    segments: Optional[int] = None,
    max_tries: int = 200,
) -> PiecewiseGeodesic:
    """A random piecewise geodesic satisfying the criterion's hypotheses.

    Each new segment backtracks j <= l letters along the previous one and
    then continues in a fresh direction, which pins the corner product
    near j; candidates are rejected until segment lengths exceed
    2l + 8 delta and every corner product is at most l.
    """
    rng = random.Random(seed)
    l = Fraction(l)
    delta = Fraction(delta)
    min_len = int(2 * l + 8 * delta) + 1
    letters = model.letters()

    def random_geodesic_word(length: int, head: Tuple[int, ...]) -> Optional[Word]:
        out = list(head)
        guard = 0
        while len(out) < length and guard < 40 * length:
            guard += 1
            s = rng.choice(letters)
            if out and s == -out[-1]:
                continue
            cand = tuple(out) + (s,)
            if len(dehn_reduce(model, cand)) != len(cand):
                continue
            out.append(s)
        return tuple(out) if len(out) == length else None

    for _ in range(max_tries):
        k = segments if segments is not None else rng.choice((2, 2, 3))
        points = [()]
        prev_word: Optional[Word] = None
        ok = True
        for _seg in range(k):
            length = min_len + rng.randint(0, 3)
            if prev_word is None:
                head: Tuple[int, ...] = ()
            else:
                j = rng.randint(0, int(l))
                head = tuple(-x for x in reversed(prev_word[len(prev_word) - j :]))
            w = random_geodesic_word(length, head)
            if w is None:
                ok = False
                break
            nxt = dehn_reduce(model, points[-1] + w)
            if distance(model, points[-1], nxt) != length:
                ok = False
                break
            points.append(nxt)
            prev_word = w
        if not ok:
            continue
        pw = PiecewiseGeodesic.through(model, points)
        if all(len(s) > 2 * l + 8 * delta for s in pw.segments) and all(
            c <= l for c in corner_products(pw, model)
        ):
            return pw
    raise RuntimeError(f"could not generate a broken geodesic after {max_tries} tries")


# -- axis-derived data for experiments ---------------------------------------


def axis_window(model: GroupModel, word, half_extent: int) -> GeodesicPath:
    """Geodesic window along the axis of a cyclically reduced word.

    The window is the path reading w repeatedly from w^-k toward w^k,
    truncated to roughly half_extent letters on both sides of the origin.
    """
    w = model.word(word) if isinstance(word, str) else free_reduce(word)
    w = dehn_reduce(model, w)
    if not w:
        raise ValueError("axis word is trivial")
    reps = max(1, (half_extent + len(w) - 1) // len(w))
    lo = canon(model, inverse(w) * reps)
    full: List[Word] = [lo]
    cur = lo
    for _ in range(2 * reps):
        for letter in w:
            cur = canon(model, cur + (letter,))
            full.append(cur)
    d = distance(model, full[0], full[-1])
    if d != len(full) - 1:
        raise ValueError(f"word {model.text(w)!r} does not act along a geodesic axis")
    return GeodesicPath(tuple(full))


def noisy_axis_data(
    model: GroupModel,
    axis: GeodesicPath,
    H: int,
    R: int,
    seed: int,
) -> CoarseGeodesicData:
    """Perturb each axis vertex within H to get coarse data along the axis."""
    rng = random.Random(seed)
    letters = model.letters()
    pts: Set[Word] = set()
    for v in axis.vertices:
        if rng.random() < 0.5:
            pts.add(canon(model, v))
        else:
            moved = v
            for _ in range(rng.randint(1, H)):
                moved = moved + (rng.choice(letters),)
            moved = canon(model, moved)
            if min(distance(model, moved, av) for av in axis.vertices) <= H:
                pts.add(moved)
            else:
                pts.add(canon(model, v))
    S = sorted(pts, key=shortlex_key)
    return CoarseGeodesicData(S, {s: axis for s in S}, H, R)
