"""Group models with a decidable word problem.

Two families are supported: free groups of rank >= 2 and orientable
surface groups of genus >= 2 with the one-relator presentation
[a1,b1]...[ag,bg].  The surface presentation is a Dehn presentation
(piece length 1, so C'(1/8)): repeatedly replacing a subword that is more
than half of a cyclic conjugate of the relator (or its inverse) by the
inverse of the complement terminates, and the terminal words are exactly
the geodesic words.  That gives exact group distances at any scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Sequence, Tuple

from .words import (
    Word,
    free_reduce,
    generator_names,
    inverse,
    is_cyclically_reduced,
    parse_word,
    format_word,
    shortlex_key,
)

MAX_FREE_RANK = 6
MAX_GENUS = 4


def _rotations(w: Word):
    return [w[i:] + w[:i] for i in range(len(w))]


@dataclass(frozen=True)
class GroupModel:
    """A free or surface group together with its Dehn rewriting tables."""

    kind: str  # "free" | "surface"
    rank: int  # number of generators (2g for surface of genus g)
    relators: Tuple[Word, ...]
    names: Tuple[str, ...]
    # more-than-half subword -> shorter replacement
    shorten: Dict[Word, Word] = field(compare=False, repr=False)
    # exactly-half subword -> equal-length replacement
    half_swap: Dict[Word, Word] = field(compare=False, repr=False)

    @staticmethod
    def free(rank: int) -> "GroupModel":
        if not 2 <= rank <= MAX_FREE_RANK:
            raise ValueError(f"free rank must be in [2, {MAX_FREE_RANK}]")
        names = tuple(generator_names("free", rank))
        return GroupModel("free", rank, (), names, {}, {})

    @staticmethod
    def surface(genus: int) -> "GroupModel":
        if not 2 <= genus <= MAX_GENUS:
            raise ValueError(f"genus must be in [2, {MAX_GENUS}]")
        rel: list[int] = []
        for j in range(genus):
            a, b = 2 * j + 1, 2 * j + 2
            rel += [a, b, -a, -b]
        relator = tuple(rel)
        if not is_cyclically_reduced(relator) or len(relator) != 4 * genus:
            raise AssertionError("malformed surface relator")
        n = len(relator)
        half = n // 2
        shorten: Dict[Word, Word] = {}
        swap: Dict[Word, Word] = {}
        for rot in _rotations(relator) + _rotations(inverse(relator)):
            # rot = u v with u =_G inverse(v); keys are unique because the
            # presentation has piece length 1.
            long_key = rot[: half + 1]
            swap_key = rot[:half]
            shorten[long_key] = inverse(rot[half + 1 :])
            swap[swap_key] = inverse(rot[half:])
        names = tuple(generator_names("surface", 2 * genus))
        return GroupModel("surface", 2 * genus, (relator,), names, shorten, swap)

    @staticmethod
    def parse(spec: str) -> "GroupModel":
        """Parse a model spec string: 'free:2' or 'surface:2'."""
        try:
            kind, num = spec.split(":")
            n = int(num)
        except ValueError as exc:
            raise ValueError(f"bad model spec {spec!r}") from exc
        if kind == "free":
            return GroupModel.free(n)
        if kind == "surface":
            return GroupModel.surface(n)
        raise ValueError(f"unknown model kind {kind!r}")

    @property
    def spec(self) -> str:
        if self.kind == "free":
            return f"free:{self.rank}"
        return f"surface:{self.rank // 2}"

    @property
    def genus(self) -> int:
        if self.kind != "surface":
            raise ValueError("genus only defined for surface models")
        return self.rank // 2

    def letters(self) -> list[int]:
        """All signed generator letters in shortlex order."""
        out = []
        for i in range(1, self.rank + 1):
            out.append(i)
            out.append(-i)
        return out

    def word(self, text: str) -> Word:
        return parse_word(text, self.names)

    def text(self, w: Sequence[int]) -> str:
        return format_word(w, self.names)

    def __hash__(self):
        return hash((self.kind, self.rank))


def _parse_or_copy(model, w):
    return model.word(w) if isinstance(w, str) else free_reduce(w)


def dehn_reduce(model: GroupModel, w: Sequence[int]) -> Word:
    """Shorten until no more-than-half relator subword remains.

    The result is a geodesic word for the element (free reduction alone in
    the free case).
    """
    word = free_reduce(w)
    shorten = model.shorten
    if not shorten:
        return word
    key_len = len(model.relators[0]) // 2 + 1
    changed = True
    while changed:
        changed = False
        n = len(word)
        if n < key_len:
            break
        for i in range(n - key_len + 1):
            repl = shorten.get(word[i : i + key_len])
            if repl is not None:
                word = free_reduce(word[:i] + repl + word[i + key_len :])
                changed = True
                break
    return word


def canon(model: GroupModel, w: Sequence[int]) -> Word:
    """Shortlex-least geodesic representative.

    Starting from a Dehn-reduced word, greedily apply any exactly-half
    relator swap that lowers the shortlex order.  Swap windows in a
    geodesic word overlap in at most one letter (piece length 1), so the
    descent reaches the least representative; if a swap ever exposes a
    free cancellation the word was shortenable and we restart.
    """
    word = dehn_reduce(model, w)
    swap = model.half_swap
    if not swap:
        return word
    half = len(model.relators[0]) // 2
    improved = True
    while improved:
        improved = False
        n = len(word)
        for i in range(n - half + 1):
            repl = swap.get(word[i : i + half])
            if repl is None:
                continue
            cand = free_reduce(word[:i] + repl + word[i + half :])
            if len(cand) < n:
                word = dehn_reduce(model, cand)
                improved = True
                break
            if shortlex_key(cand) < shortlex_key(word):
                word = cand
                improved = True
                break
    return word


def group_length(model: GroupModel, w: Sequence[int]) -> int:
    return len(dehn_reduce(model, w))


def is_trivial(model: GroupModel, w) -> bool:
    """Word problem: free reduction, plus Dehn shortening for surfaces."""
    return not dehn_reduce(model, _parse_or_copy(model, w))


def multiply(model: GroupModel, u, v) -> Word:
    """A reduced (geodesic) representative of the product u*v."""
    u = _parse_or_copy(model, u)
    v = _parse_or_copy(model, v)
    return dehn_reduce(model, u + v)


def normal_form(model: GroupModel, w) -> Word:
    return canon(model, _parse_or_copy(model, w))


def _strip_common_prefix(u: Word, v: Word) -> Tuple[Word, Word]:
    i = 0
    n = min(len(u), len(v))
    while i < n and u[i] == v[i]:
        i += 1
    return u[i:], v[i:]


@lru_cache(maxsize=1_000_000)
def _distance_cached(model: GroupModel, u: Word, v: Word) -> int:
    return len(dehn_reduce(model, free_reduce(inverse(u) + v)))


def distance(model: GroupModel, u: Word, v: Word) -> int:
    """Exact graph distance d(u, v) = |u^-1 v| in the Cayley graph."""
    if u == v:
        return 0
    us, vs = _strip_common_prefix(u, v)
    if us > vs:
        us, vs = vs, us
    return _distance_cached(model, us, vs)


def geodesic_word(model: GroupModel, u: Word, v: Word) -> Word:
    """A geodesic word labelling some geodesic from u to v."""
    us, vs = _strip_common_prefix(u, v)
    return dehn_reduce(model, free_reduce(inverse(us) + vs))


def geodesic_vertices(model: GroupModel, u: Word, v: Word) -> list[Word]:
    """Vertex sequence of one geodesic from u to v (words, not canonical)."""
    path = [tuple(u)]
    cur = tuple(u)
    for x in geodesic_word(model, u, v):
        cur = free_reduce(cur + (x,))
        path.append(cur)
    return path


def gromov_product(model: GroupModel, x: Word, y: Word, p: Word) -> Fraction:
    """(d(x,p) + d(y,p) - d(x,y)) / 2, an exact half-integer."""
    return Fraction(
        distance(model, x, p) + distance(model, y, p) - distance(model, x, y), 2
    )


@lru_cache(maxsize=None)
def get_model(spec: str) -> GroupModel:
    return GroupModel.parse(spec)
