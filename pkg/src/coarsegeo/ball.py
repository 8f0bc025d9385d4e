"""Finite Cayley balls: exact distances, geodesic enumeration, Gromov products."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .geometry import BudgetError, geodesic_dag
from .models import GroupModel, canon, distance as model_distance, get_model
from .words import Word, shortlex_key

DEFAULT_VERTEX_BUDGET = 600_000
DEFAULT_GEODESIC_CAP = 10_000


class ContainmentError(RuntimeError):
    """A geodesic between the requested vertices may leave the ball."""


@dataclass
class GeodesicPath:
    """An edge path whose length equals the distance between its endpoints."""

    vertices: Tuple[Word, ...]

    def __post_init__(self):
        self.vertices = tuple(tuple(v) for v in self.vertices)

    def __len__(self):
        return len(self.vertices) - 1

    @property
    def start(self) -> Word:
        return self.vertices[0]

    @property
    def end(self) -> Word:
        return self.vertices[-1]

    def reversed(self) -> "GeodesicPath":
        return GeodesicPath(tuple(reversed(self.vertices)))


@dataclass
class Ball:
    """Ball of the Cayley graph around the identity, on canonical vertices."""

    model: GroupModel
    radius: int
    verts: List[Word]
    index: Dict[Word, int]
    nbrs: List[List[int]]
    dist0: List[int]
    _bfs_memo: Dict[int, List[int]] = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.verts)

    def __contains__(self, w) -> bool:
        return canon(self.model, tuple(w)) in self.index

    def vertex(self, w) -> Word:
        """Canonical form of w, which must lie in the ball."""
        c = canon(self.model, self.model.word(w) if isinstance(w, str) else tuple(w))
        if c not in self.index:
            raise KeyError(f"vertex {c!r} outside ball of radius {self.radius}")
        return c

    def dist_origin(self, w) -> int:
        return self.dist0[self.index[self.vertex(w)]]

    def sphere(self, d: int) -> List[Word]:
        return [v for v, dd in zip(self.verts, self.dist0) if dd == d]

    def inner_vertices(self, inner: int) -> List[Word]:
        out = [v for v, dd in zip(self.verts, self.dist0) if dd <= inner]
        out.sort(key=shortlex_key)
        return out

    def graph_distances_from(self, w) -> List[int]:
        """BFS distances over the ball subgraph (memoized per source)."""
        i = self.index[self.vertex(w)]
        memo = self._bfs_memo.get(i)
        if memo is not None:
            return memo
        dist = [-1] * len(self.verts)
        dist[i] = 0
        frontier = [i]
        while frontier:
            nxt = []
            for a in frontier:
                da = dist[a]
                for b in self.nbrs[a]:
                    if dist[b] < 0:
                        dist[b] = da + 1
                        nxt.append(b)
            frontier = nxt
        self._bfs_memo[i] = dist
        return dist

    def to_json(self) -> dict:
        edges = []
        for i, ns in enumerate(self.nbrs):
            for j in ns:
                if i < j:
                    edges.append([i, j])
        return {
            "model": self.model.spec,
            "radius": self.radius,
            "vertices": [self.model.text(v) for v in self.verts],
            "dist_origin": list(self.dist0),
            "edges": edges,
        }


def build_ball(model: GroupModel, radius: int, budget: int = DEFAULT_VERTEX_BUDGET) -> Ball:
    """Breadth-first ball construction over canonical normal forms."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    origin: Word = ()
    verts: List[Word] = [origin]
    index: Dict[Word, int] = {origin: 0}
    dist0: List[int] = [0]
    nbrs: List[List[int]] = [[]]
    letters = model.letters()
    frontier = [origin]
    for d in range(1, radius + 1):
        nxt: List[Word] = []
        for u in sorted(frontier, key=shortlex_key):
            iu = index[u]
            for s in letters:
                w = canon(model, u + (s,))
                iw = index.get(w)
                if iw is None:
                    if len(w) > radius:
                        continue
                    iw = len(verts)
                    verts.append(w)
                    index[w] = iw
                    dist0.append(d)
                    nbrs.append([])
                    nxt.append(w)
                    if len(verts) > budget:
                        raise BudgetError(
                            f"ball of radius {radius} exceeded vertex budget {budget}"
                        )
                if iw not in nbrs[iu]:
                    nbrs[iu].append(iw)
                if iu not in nbrs[iw]:
                    nbrs[iw].append(iu)
        frontier = nxt
    return Ball(model, radius, verts, index, nbrs, dist0)


def distance(ball: Ball, u, v) -> int:
    """Exact Cayley-graph distance between two ball vertices."""
    cu, cv = ball.vertex(u), ball.vertex(v)
    if ball.dist0[ball.index[cu]] + ball.dist0[ball.index[cv]] <= ball.radius:
        # geodesics stay inside, so the memoized in-ball BFS is exact
        return ball.graph_distances_from(cu)[ball.index[cv]]
    return model_distance(ball.model, cu, cv)


def geodesics_between(
    ball: Ball, u, v, cap: int = DEFAULT_GEODESIC_CAP
) -> Tuple[List[GeodesicPath], bool]:
    """All geodesics between u and v, from the predecessor DAG of a BFS.

    Requires dist_origin(u) + dist_origin(v) <= radius, which pins every
    geodesic inside the ball.  Returns (paths, truncated_flag).
    """
    cu, cv = ball.vertex(u), ball.vertex(v)
    if ball.dist_origin(cu) + ball.dist_origin(cv) > ball.radius:
        raise ContainmentError(
            f"geodesics between {ball.model.text(cu)!r} and {ball.model.text(cv)!r} "
            f"may escape the radius-{ball.radius} ball"
        )
    dag = geodesic_dag(ball.model, cu, cv)
    raw, truncated = dag.paths(cap)
    return [GeodesicPath(tuple(p)) for p in raw], truncated


def geodesic_count(ball: Ball, u, v) -> int:
    cu, cv = ball.vertex(u), ball.vertex(v)
    if ball.dist_origin(cu) + ball.dist_origin(cv) > ball.radius:
        raise ContainmentError("geodesic count requires containment in the ball")
    return geodesic_dag(ball.model, cu, cv).path_count()


def gromov_product(ball: Ball, x, y, z) -> Fraction:
    """Gromov product of x and y at z: (d(x,z)+d(y,z)-d(x,y))/2."""
    cx, cy, cz = ball.vertex(x), ball.vertex(y), ball.vertex(z)
    return Fraction(
        distance(ball, cx, cz) + distance(ball, cy, cz) - distance(ball, cx, cy), 2
    )


_BALL_CACHE: Dict[Tuple[str, int], Ball] = {}

CACHE_ENV_VAR = "COARSEGEO_CACHE"


def _disk_cache_path(spec: str, radius: int) -> Optional[str]:
    import os

    root = os.environ.get(CACHE_ENV_VAR)
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, f"{spec.replace(':', '-')}-r{radius}.json")


def get_ball(spec: str, radius: int, budget: int = DEFAULT_VERTEX_BUDGET) -> Ball:
    """Process-wide ball cache keyed by (model spec, radius).

    When the COARSEGEO_CACHE environment variable names a directory,
    built balls are also persisted there as JSON and reloaded on demand.
    """
    key = (spec, radius)
    if key in _BALL_CACHE:
        return _BALL_CACHE[key]
    path = _disk_cache_path(spec, radius)
    ball = None
    if path:
        try:
            with open(path) as fh:
                ball = ball_from_json(json.load(fh))
        except (OSError, ValueError, KeyError):
            ball = None
    if ball is None:
        ball = build_ball(get_model(spec), radius, budget)
        if path:
            dump_ball(ball, path)
    _BALL_CACHE[key] = ball
    return ball


def ball_from_json(data: dict) -> Ball:
    model = get_model(data["model"])
    verts = [model.word(text) for text in data["vertices"]]
    index = {v: i for i, v in enumerate(verts)}
    nbrs: List[List[int]] = [[] for _ in verts]
    for i, j in data["edges"]:
        nbrs[i].append(j)
        nbrs[j].append(i)
    return Ball(model, int(data["radius"]), verts, index, nbrs, list(data["dist_origin"]))


def dump_ball(ball: Ball, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(ball.to_json(), fh, indent=1, sort_keys=True)
