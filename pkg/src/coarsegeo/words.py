"""Reduced words over a symmetric generating set.

A word is a tuple of nonzero signed integers: letter ``+i`` is the i-th
generator (1-based), ``-i`` its inverse.  The empty tuple is the identity.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence, Tuple

Word = Tuple[int, ...]

EMPTY: Word = ()

_TOKEN_RE = re.compile(r"([A-Za-z])(\d*)")


def free_reduce(letters: Iterable[int]) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat(u: Sequence[int], v: Sequence[int]) -> Word:
    """Freely reduced concatenation (exact in a free group only)."""
    return free_reduce(tuple(u) + tuple(v))


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def letter_key(x: int) -> Tuple[int, int]:
    # generator index first, inverse flag second: a < A < b < B < ...
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Sequence[int]):
    return (len(w), tuple(letter_key(x) for x in w))


def shortlex_min(words: Iterable[Sequence[int]]) -> Word:
    return tuple(min(words, key=shortlex_key))


def generator_names(kind: str, count: int) -> list[str]:
    """Printable generator names: 'a'..'z' for free models, a1,b1,.. for surface."""
    if kind == "free":
        if count > 26:
            raise ValueError("at most 26 free generators supported")
        return [chr(ord("a") + i) for i in range(count)]
    if kind == "surface":
        names = []
        for j in range(1, count // 2 + 1):
            names.append(f"a{j}")
            names.append(f"b{j}")
        return names
    raise ValueError(f"unknown kind {kind!r}")


def format_word(w: Sequence[int], names: Sequence[str]) -> str:
    toks = []
    for x in w:
        name = names[abs(x) - 1]
        toks.append(name if x > 0 else name[0].upper() + name[1:])
    return " ".join(toks)


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse 'a B2 a1' style tokens; whitespace optional, capital = inverse."""
    index = {name: i + 1 for i, name in enumerate(names)}
    letters = []
    pos = 0
    stripped = text.strip()
    while pos < len(stripped):
        if stripped[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(stripped, pos)
        if not m:
            raise ValueError(f"bad word token at {stripped[pos:]!r}")
        letter, digits = m.groups()
        name = letter.lower() + digits
        if name not in index:
            raise ValueError(f"unknown generator {name!r}")
        sign = 1 if letter.islower() else -1
        letters.append(sign * index[name])
        pos = m.end()
    return free_reduce(letters)
