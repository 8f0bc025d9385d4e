"""Graph/BFS kernels over a group's Cayley graph, computed on the fly.

Vertices are canonical words (see models.canon); edges are right
multiplication by a generator.  Everything here is exact and does not
require a prebuilt ball, so it works at any scale the word arithmetic can
reach.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Set, Tuple

from .models import GroupModel, canon, distance, geodesic_word
from .words import Word, shortlex_key


class BudgetError(RuntimeError):
    """A search exceeded its configured vertex budget."""


_NBR_CACHE: Dict[str, Dict[Word, Tuple[Word, ...]]] = {}
_NBR_CACHE_CAP = 1_500_000


def neighbors(model: GroupModel, v: Word) -> Tuple[Word, ...]:
    """Canonical neighbors of a canonical vertex, in letter order (cached)."""
    cache = _NBR_CACHE.setdefault(model.spec, {})
    hit = cache.get(v)
    if hit is None:
        hit = tuple(canon(model, v + (s,)) for s in model.letters())
        if len(cache) >= _NBR_CACHE_CAP:
            cache.clear()
        cache[v] = hit
    return hit


def ball_distances(
    model: GroupModel, center: Word, radius: int, budget: int = 2_000_000
) -> Dict[Word, int]:
    """Multi-source capped BFS; returns canonical word -> distance <= radius."""
    return near_set(model, [center], radius, budget)


def near_set(
    model: GroupModel, sources: Iterable[Word], radius: int, budget: int = 2_000_000
) -> Dict[Word, int]:
    """All vertices within `radius` of the source set, with BFS distances."""
    dist: Dict[Word, int] = {}
    frontier: List[Word] = []
    for s in sources:
        c = canon(model, s)
        if c not in dist:
            dist[c] = 0
            frontier.append(c)
    if radius <= 0:
        return dist
    for d in range(1, radius + 1):
        nxt: List[Word] = []
        for v in frontier:
            for w in neighbors(model, v):
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
                    if len(dist) > budget:
                        raise BudgetError(
                            f"near_set exceeded budget {budget} at radius {d}"
                        )
        frontier = nxt
    return dist


@dataclass
class GeodesicDag:
    """All geodesics from u to v: interval vertices layered by distance to u.

    `preds[w]` lists the predecessors of w one layer down; every maximal
    chain from u to v through the DAG is a geodesic, and every geodesic
    arises this way.
    """

    model: GroupModel
    u: Word
    v: Word
    length: int
    layers: List[List[Word]]
    preds: Dict[Word, List[Word]]

    def vertex_set(self) -> Set[Word]:
        return {w for layer in self.layers for w in layer}

    def path_count(self) -> int:
        count = {self.u: 1}
        for layer in self.layers[1:]:
            for w in layer:
                count[w] = sum(count[p] for p in self.preds[w])
        return count[self.v]

    def paths(self, cap: int = 10_000) -> Tuple[List[List[Word]], bool]:
        """Enumerate geodesics (as vertex lists u..v), capped. Returns (paths, truncated)."""
        out: List[List[Word]] = []
        truncated = False
        stack: List[List[Word]] = [[self.v]]
        while stack:
            partial = stack.pop()
            head = partial[-1]
            if head == self.u:
                out.append(list(reversed(partial)))
                if len(out) >= cap:
                    truncated = bool(stack)
                    break
                continue
            # reversed, so the stack pops predecessors in shortlex order
            for p in sorted(self.preds[head], key=shortlex_key, reverse=True):
                stack.append(partial + [p])
        return out, truncated

    def avoids(self, blocked: Set[Word]) -> bool:
        """True iff some full geodesic avoids every vertex in `blocked`."""
        if self.u in blocked or self.v in blocked:
            return False
        alive = {self.u}
        for layer in self.layers[1:]:
            nxt = {
                w
                for w in layer
                if w not in blocked and any(p in alive for p in self.preds[w])
            }
            if not nxt:
                return False
            alive = nxt
        return self.v in alive


def geodesic_dag(model: GroupModel, u: Word, v: Word, budget: int = 500_000) -> GeodesicDag:
    """Layered DAG of the geodesic interval between canonical vertices u, v."""
    u = canon(model, u)
    v = canon(model, v)
    d = distance(model, u, v)
    layers: List[List[Word]] = [[u]]
    preds: Dict[Word, List[Word]] = {u: []}
    seen = {u: 0}
    frontier = [u]
    for k in range(1, d + 1):
        nxt: Dict[Word, List[Word]] = {}
        for w in frontier:
            for z in neighbors(model, w):
                prev = seen.get(z)
                if prev is not None and prev != k:
                    continue
                if prev is None:
                    if distance(model, z, v) != d - k:
                        continue
                    seen[z] = k
                    nxt[z] = [w]
                    if len(seen) > budget:
                        raise BudgetError(f"geodesic_dag exceeded budget {budget}")
                else:
                    nxt[z].append(w)
        frontier = sorted(nxt, key=shortlex_key)
        layers.append(frontier)
        for z, ps in nxt.items():
            preds[z] = ps
    return GeodesicDag(model, u, v, d, layers, preds)


def canonical_geodesic(model: GroupModel, u: Word, v: Word) -> List[Word]:
    """Vertex sequence of the geodesic labelled by the Dehn-reduced word."""
    path = [canon(model, u)]
    cur = path[0]
    for x in geodesic_word(model, canon(model, u), canon(model, v)):
        cur = canon(model, cur + (x,))
        path.append(cur)
    return path
