"""Circle actions: standard Mobius boundary actions, perturbations, and
candidate semi-conjugacies built from matched attracting fixed points.

Angles live in [0, 1).  Mobius generators are SU(1,1) matrices acting on
the unit circle; perturbed generators compose a small piecewise-linear
homeomorphism with the exact Mobius map.  Words evaluate factor by
factor, so no resampling error accumulates along compositions.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

TWO_PI = 2.0 * math.pi


class PingPongError(RuntimeError):
    """The Schottky pad containments fail for this action."""


class FixedPointError(RuntimeError):
    """No (attracting) fixed point could be isolated."""


class InsufficientDataError(RuntimeError):
    """Too few consistent fixed-point pairs to build a semi-conjugacy."""


def frac(x):
    return np.mod(x, 1.0)


def circle_dist(x, y):
    d = np.abs(frac(x) - frac(y))
    return np.minimum(d, 1.0 - d)


def arc_contains(arc: Tuple[float, float], x: float, strict: bool = False) -> bool:
    """Is angle x inside the ccw arc (lo, hi)?  Arcs may wrap past 1."""
    lo, hi = arc
    t = frac(x - lo)
    span = frac(hi - lo)
    return (0 < t < span) if strict else (0 <= t <= span)


# -- primitive circle maps ----------------------------------------------------


class MobiusMap:
    """SU(1,1) matrix acting on the boundary circle."""

    def __init__(self, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("need a 2x2 matrix")
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > 1e-9 * scale:
            raise ValueError(f"determinant {det} is not 1")
        if abs(det - 1.0) > 0:
            m = m / np.sqrt(det)  # renormalize float drift from long products
        if (
            abs(m[1, 0] - np.conj(m[0, 1])) > 1e-9 * scale
            or abs(m[1, 1] - np.conj(m[0, 0])) > 1e-9 * scale
        ):
            raise ValueError("matrix is not in SU(1,1)")
        self.m = m

    def __call__(self, theta):
        z = np.exp(2j * np.pi * np.asarray(theta, dtype=float))
        a, b = self.m[0, 0], self.m[0, 1]
        w = (a * z + b) / (np.conj(b) * z + np.conj(a))
        return frac(np.angle(w) / TWO_PI)

    def deriv(self, theta):
        """|f'| on the circle: 1 / |conj(b) z + conj(a)|^2."""
        z = np.exp(2j * np.pi * np.asarray(theta, dtype=float))
        a, b = self.m[0, 0], self.m[0, 1]
        return 1.0 / np.abs(np.conj(b) * z + np.conj(a)) ** 2

    def inverse(self) -> "MobiusMap":
        a, b = self.m[0, 0], self.m[0, 1]
        return MobiusMap(np.array([[np.conj(a), -b], [-np.conj(b), a]]))

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(self.m @ other.m)

    @property
    def trace(self) -> float:
        return float(np.real(self.m[0, 0] + self.m[1, 1]))

    def fixed_points(self) -> Tuple[float, float]:
        """(attracting, repelling) boundary fixed angles of a hyperbolic map."""
        vals, vecs = np.linalg.eig(self.m)
        if abs(abs(vals[0]) - abs(vals[1])) < 1e-12:
            raise FixedPointError("matrix is not hyperbolic")
        order = np.argsort(-np.abs(vals))
        out = []
        for k in order:
            v = vecs[:, k]
            if abs(v[1]) < 1e-14:
                raise FixedPointError("fixed point escapes the boundary chart")
            z = v[0] / v[1]
            if abs(abs(z) - 1.0) > 1e-6:
                raise FixedPointError("eigenvector does not point at the circle")
            out.append(frac(np.angle(z) / TWO_PI))
        return out[0], out[1]


def su11_rotation(angle: float) -> MobiusMap:
    phase = np.exp(1j * np.pi * angle)
    return MobiusMap(np.array([[phase, 0], [0, np.conj(phase)]]))


def su11_translation(cosh_s: float, attracting: float = 0.0) -> MobiusMap:
    """Hyperbolic translation with axis endpoints at `attracting` and its antipode."""
    s = math.acosh(cosh_s)
    boost = MobiusMap(
        np.array([[math.cosh(s / 2), math.sinh(s / 2)], [math.sinh(s / 2), math.cosh(s / 2)]])
    )
    rot = su11_rotation(attracting)
    return rot.compose(boost).compose(rot.inverse())


class PLMap:
    """Strictly increasing piecewise-linear degree-one lift on [0, 1)."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray, exact: Optional[Callable] = None,
                 exact_inverse: Optional[Callable] = None):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
            raise ValueError("breakpoint tables must be matching 1-d arrays")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if xs[0] < 0 or xs[-1] >= 1:
            raise ValueError("breakpoints must lie in [0, 1)")
        self.xs = xs
        self.ys = ys
        self.exact = exact
        self.exact_inverse = exact_inverse

    @staticmethod
    def identity(res: int = 64) -> "PLMap":
        xs = np.linspace(0.0, 1.0, res, endpoint=False)
        return PLMap(xs, xs.copy(), exact=lambda t: np.asarray(t, dtype=float))

    @staticmethod
    def from_function(fn: Callable, res: int, exact_inverse: Optional[Callable] = None) -> "PLMap":
        xs = np.linspace(0.0, 1.0, res, endpoint=False)
        raw = np.asarray(fn(xs), dtype=float)
        lift = raw.copy()
        lift[0] = frac(lift[0])
        for i in range(1, len(lift)):
            lift[i] = lift[i - 1] + frac(lift[i] - lift[i - 1])
        if lift[-1] - lift[0] >= 1.0 or np.any(np.diff(lift) <= 0):
            raise ValueError(
                "function is not an increasing degree-one circle map at this resolution"
            )
        return PLMap(xs, lift, exact=fn, exact_inverse=exact_inverse)

    def _lift_eval(self, t):
        t = np.asarray(t, dtype=float)
        k = np.floor(t)
        u = t - k
        # wrap one node on each side: np.interp clamps outside the table
        xs = np.concatenate([[self.xs[-1] - 1.0], self.xs, [self.xs[0] + 1.0]])
        ys = np.concatenate([[self.ys[-1] - 1.0], self.ys, [self.ys[0] + 1.0]])
        return np.interp(u, xs, ys) + k

    def __call__(self, theta):
        if self.exact is not None:
            return frac(self.exact(np.asarray(theta, dtype=float)))
        return frac(self._lift_eval(theta))

    def lift(self, t):
        return self._lift_eval(t)

    def deriv(self, theta, h: float = 1e-6):
        lo = self._lift_eval(np.asarray(theta, dtype=float) - h)
        hi = self._lift_eval(np.asarray(theta, dtype=float) + h)
        return (hi - lo) / (2 * h)

    def inverse(self) -> "PLMap":
        # swap the table; roll so the new x-column increases within [0, 1)
        xs = frac(self.ys)
        order = np.argsort(xs)
        xs_sorted = xs[order]
        ys_sorted = self.xs[order].copy()
        for i in range(1, len(ys_sorted)):
            if ys_sorted[i] < ys_sorted[i - 1]:
                ys_sorted[i] += 1.0
        return PLMap(xs_sorted, ys_sorted, exact=self.exact_inverse, exact_inverse=self.exact)

    def sup_distance_to_identity(self, grid: int = 4096) -> float:
        t = np.linspace(0.0, 1.0, grid, endpoint=False)
        return float(np.max(circle_dist(self(t), t)))


class ComposedMap:
    """Composition f_k o ... o f_1 evaluated factor by factor."""

    def __init__(self, factors: Sequence):
        self.factors = list(factors)

    def __call__(self, theta):
        x = np.asarray(theta, dtype=float)
        for f in self.factors:
            x = f(x)
        return x

    def deriv(self, theta, h: float = 1e-7):
        x = np.asarray(theta, dtype=float)
        lo = self(frac(x - h))
        hi = self(frac(x + h))
        d = frac(hi - lo)
        return d / (2 * h)

    def inverse(self) -> "ComposedMap":
        return ComposedMap([f.inverse() for f in reversed(self.factors)])

    def compose(self, other) -> "ComposedMap":
        tail = other.factors if isinstance(other, ComposedMap) else [other]
        return ComposedMap(list(tail) + self.factors)


# -- group specs and actions --------------------------------------------------


@dataclass(frozen=True)
class SchottkySpec:
    """Rank-2 Schottky data: translation strength and four pad half-widths."""

    cosh_s: float = 5.0
    pad_halfwidth: float = 0.11
    centers: Tuple[float, float, float, float] = (0.0, 0.25, 0.5, 0.75)

    @property
    def kind(self) -> str:
        return "schottky"

    def generator_names(self) -> Tuple[str, ...]:
        return ("a", "b")

    def pads(self) -> Dict[str, Tuple[float, float]]:
        w = self.pad_halfwidth
        c = self.centers
        return {
            "a": (frac(c[0] - w), frac(c[0] + w)),
            "b": (frac(c[1] - w), frac(c[1] + w)),
            "A": (frac(c[2] - w), frac(c[2] + w)),
            "B": (frac(c[3] - w), frac(c[3] + w)),
        }

    def matrices(self) -> Dict[str, MobiusMap]:
        a = su11_translation(self.cosh_s, attracting=self.centers[0])
        b = su11_translation(self.cosh_s, attracting=self.centers[1])
        return {"a": a, "b": b}


@dataclass(frozen=True)
class FuchsianGenus2Spec:
    """Regular-octagon genus-2 surface group in SU(1,1).

    Opposite sides of the regular hyperbolic octagon are paired by
    translations along the four diagonals; the pairing translations have
    cosh of translation length 5 + 4 sqrt(2), and the vertex cycle gives
    the relation a b^-1 c d^-1 a^-1 b c^-1 d = 1.
    """

    cosh_s: float = 5.0 + 4.0 * math.sqrt(2.0)

    @property
    def kind(self) -> str:
        return "fuchsian2"

    def generator_names(self) -> Tuple[str, ...]:
        return ("a", "b", "c", "d")

    def matrices(self) -> Dict[str, MobiusMap]:
        gens = {}
        for k, name in enumerate(self.generator_names()):
            gens[name] = su11_translation(self.cosh_s, attracting=k / 8.0)
        return gens


def _relator_candidates(names: Sequence[str]) -> List[List[str]]:
    a, b, c, d = names
    inv = str.upper
    return [
        [a, inv(b), c, inv(d), inv(a), b, inv(c), d],
        [a, b, c, d, inv(a), inv(b), inv(c), inv(d)],
        [a, b, inv(a), inv(b), c, d, inv(c), inv(d)],
    ]


@dataclass
class CircleAction:
    """Generators (and inverses) acting on the circle, applied by word."""

    spec: object
    maps: Dict[str, object]  # name or NAME (inverse) -> circle map
    matrices: Optional[Dict[str, MobiusMap]] = None
    relator: Optional[Tuple[str, ...]] = None
    # conjugated actions keep their structure so word maps stay three deep
    conjugator: Optional[object] = None
    base: Optional["CircleAction"] = None

    def generator_names(self) -> Tuple[str, ...]:
        return self.spec.generator_names()

    def word_map(self, word: Sequence[str]):
        # word is a sequence of tokens, leftmost acting last
        if self.matrices is not None:
            return self.word_matrix(word)
        if self.conjugator is not None and self.base is not None:
            phi, phi_inv = self.conjugator
            return ComposedMap([phi_inv, self.base.word_map(word), phi])
        return ComposedMap([self.maps[tok] for tok in reversed(list(word))])

    def apply(self, word: Sequence[str], theta):
        return self.word_map(word)(np.asarray(theta, dtype=float))

    def word_matrix(self, word: Sequence[str]) -> MobiusMap:
        if self.matrices is None:
            raise ValueError("this action has no exact matrix form")
        out = None
        for tok in word:
            m = (
                self.matrices[tok]
                if tok.islower()
                else self.matrices[tok.lower()].inverse()
            )
            out = m if out is None else out.compose(m)
        if out is None:
            raise ValueError("empty word")
        return out


def _verify_schottky(action: CircleAction, spec: SchottkySpec, margin: float = 1e-6):
    pads = spec.pads()
    inv_name = {"a": "A", "b": "B", "A": "a", "B": "b"}
    for tok, pad in pads.items():
        gen = action.maps[tok]
        source = pads[inv_name[tok]]
        lo, hi = source
        # complement of the inverse pad is the ccw arc (hi, lo)
        img_lo, img_hi = float(gen(np.array([hi]))[0]), float(gen(np.array([lo]))[0])
        if not (
            arc_contains(pad, img_lo) and arc_contains(pad, img_hi)
        ):
            raise PingPongError(
                f"generator {tok!r} fails to map the complement of its "
                f"inverse pad into its pad"
            )


def standard_action(spec) -> CircleAction:
    """Realize the spec's generators as Mobius circle maps."""
    mats = spec.matrices()
    maps: Dict[str, object] = {}
    for name, m in mats.items():
        maps[name] = m
        maps[name.upper()] = m.inverse()
    action = CircleAction(spec, maps, matrices=mats)
    if spec.kind == "schottky":
        _verify_schottky(action, spec)
    else:
        found = None
        for cand in _relator_candidates(spec.generator_names()):
            m = action.word_matrix(cand).m
            if min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2)))) < 1e-9:
                found = tuple(cand)
                break
        if found is None:
            raise ValueError("no surface relation holds for these matrices")
        action.relator = found
    return action


def _noise_map(eps: float, rng: random.Random, res: int) -> PLMap:
    """Smooth degree-one bump x + eps * eta(x) with max |eta| = 1."""
    coeffs = [(rng.uniform(0.4, 1.0), rng.uniform(0, 1)) for _ in range(3)]

    def eta(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for j, (cj, phase) in enumerate(coeffs, start=1):
            out = out + cj * np.sin(TWO_PI * (j * x + phase)) / j
        return out

    def eta_prime(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for j, (cj, phase) in enumerate(coeffs, start=1):
            out = out + cj * TWO_PI * np.cos(TWO_PI * (j * x + phase))
        return out

    grid = np.linspace(0.0, 1.0, 4096, endpoint=False)
    scale = float(np.max(np.abs(eta(grid))))
    c = eps / scale
    if c * float(np.max(np.abs(eta_prime(grid)))) >= 0.9:
        raise ValueError(f"noise of size {eps} is too steep to stay a homeomorphism")

    def fn(x):
        return np.asarray(x, dtype=float) + c * eta(x)

    def fn_inverse(y):
        # Newton with the analytic derivative; the slope guard keeps it stable
        y = np.asarray(y, dtype=float)
        x = y.copy()
        for _ in range(30):
            step = (x + c * eta(x) - y) / (1.0 + c * eta_prime(x))
            x = x - step
            if float(np.max(np.abs(step))) < 1e-14:
                break
        return x

    return PLMap.from_function(fn, res, exact_inverse=fn_inverse)


def perturb(
    action: CircleAction,
    mode: str,
    eps: float,
    seed: int = 0,
    res: int = 2 ** 14,
) -> CircleAction:
    """A nearby action: per-generator noise (free specs) or a conjugation.

    Noise mode composes an eps-small homeomorphism with each generator (a
    homomorphism for free groups only); conjugation mode moves the whole
    action by phi and keeps every relation exactly.
    """
    rng = random.Random(seed)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    names = action.generator_names()
    if mode == "free":
        if action.spec.kind != "schottky":
            raise ValueError("free noise is only a homomorphism for free specs")
        maps: Dict[str, object] = {}
        for name in names:
            noise = _noise_map(eps, rng, res) if eps > 0 else PLMap.identity()
            fwd = ComposedMap([action.maps[name], noise])
            maps[name] = fwd
            maps[name.upper()] = fwd.inverse()
        out = CircleAction(action.spec, maps, matrices=None, relator=action.relator)
        _verify_schottky(out, action.spec)
        return out
    if mode == "conjugation":
        phi = _noise_map(eps, rng, res) if eps > 0 else PLMap.identity()
        phi_inv = phi.inverse()
        maps = {}
        for name in names:
            for tok, base in ((name, action.maps[name]), (name.upper(), action.maps[name.upper()])):
                maps[tok] = ComposedMap([phi_inv, base, phi])
        return CircleAction(
            action.spec,
            maps,
            matrices=None,
            relator=action.relator,
            conjugator=(phi, phi_inv),
            base=action,
        )
    raise ValueError(f"unknown perturbation mode {mode!r}")


def action_distance(a: CircleAction, b: CircleAction, grid: int = 4096) -> float:
    """Max sup-distance between corresponding generators."""
    t = np.linspace(0.0, 1.0, grid, endpoint=False)
    worst = 0.0
    for name in a.generator_names():
        worst = max(worst, float(np.max(circle_dist(a.maps[name](t), b.maps[name](t)))))
    return worst


# -- fixed points -------------------------------------------------------------


def circle_slope(h, x, dx: float = 2e-5):
    """Nonnegative difference quotient of an increasing degree-one map.

    Increments of such a map over an interval shorter than 1 lie in
    [0, 1), so the fractional part recovers them without aliasing even
    where the true slope is enormous.
    """
    x = np.asarray(x, dtype=float)
    lo = np.asarray(h(frac(x - dx)))
    hi = np.asarray(h(frac(x + dx)))
    return frac(hi - lo) / (2 * dx)


def attracting_fixed_point(
    h, seeds: int = 128, slope_cap: float = 1.0, rounds: int = 50
) -> float:
    """Attracting fixed point of a monotone circle map, by lift bisection.

    The lift displacement is sampled on a seed grid by unwrapping the
    (always < 1) increments of the map, so strong expansion cannot alias
    a repelling point into a spurious bracket.  Each downward integer
    crossing is refined by bisection at once; a root counts only when
    the local slope surrogate is below slope_cap.  Raises
    FixedPointError when no attracting crossing exists.
    """
    grid = np.linspace(0.0, 1.0, seeds + 1, endpoint=True)
    hx = np.asarray(h(frac(grid)))
    lift = np.empty_like(hx)
    lift[0] = grid[0] + frac(hx[0] - grid[0] + 0.5) - 0.5
    incr = frac(hx[1:] - hx[:-1])
    lift[1:] = lift[0] + np.cumsum(incr)
    disp = lift - grid
    if np.max(disp) - np.min(disp) < 1e-9 and np.max(np.abs(disp - np.round(disp))) < 1e-9:
        raise FixedPointError("map is within 1e-9 of the identity: no isolated fixed point")
    levels = np.round(disp)
    # downward crossing of an integer level inside [grid_i, grid_{i+1}]
    down = []
    for i in range(seeds):
        for m in (levels[i], levels[i + 1]):
            if disp[i] >= m > disp[i + 1]:
                down.append((grid[i], grid[i + 1], lift[i], hx[i], m))
                break
    if not down:
        raise FixedPointError("no attracting crossing found (rotation-like map)")
    a = np.array([d[0] for d in down])
    b = np.array([d[1] for d in down])
    lift_a = np.array([d[2] for d in down])
    h_a = np.array([d[3] for d in down])
    m = np.array([d[4] for d in down])
    for _ in range(rounds):
        mid = 0.5 * (a + b)
        h_mid = np.asarray(h(frac(mid)))
        lift_mid = lift_a + frac(h_mid - h_a)
        take = lift_mid - mid - m >= 0
        a = np.where(take, mid, a)
        lift_a = np.where(take, lift_mid, lift_a)
        h_a = np.where(take, h_mid, h_a)
        b = np.where(take, b, mid)
    xs = frac(0.5 * (a + b))
    slopes = circle_slope(h, xs)
    attracting = np.nonzero(slopes < slope_cap)[0]
    if len(attracting) == 0:
        raise FixedPointError("crossings exist but none is attracting")
    best = attracting[np.argmin(slopes[attracting])]
    return float(xs[best])


# -- word enumeration ---------------------------------------------------------


def reduced_words(names: Sequence[str], max_len: int, cyclically_reduced: bool = True):
    """Freely (and optionally cyclically) reduced words over names and inverses."""
    alphabet = list(names) + [n.upper() for n in names]

    def inverse_of(tok: str) -> str:
        return tok.lower() if tok.isupper() else tok.upper()

    def rec(word: List[str]):
        if word:
            yield tuple(word)
        if len(word) == max_len:
            return
        for tok in alphabet:
            if word and tok == inverse_of(word[-1]):
                continue
            word.append(tok)
            yield from rec(word)
            word.pop()

    for w in rec([]):
        if not cyclically_reduced or len(w) < 2 or w[0] != inverse_of(w[-1]):
            yield w


# -- semi-conjugacy -----------------------------------------------------------


class MonotoneTable:
    """Monotone nondecreasing degree-one circle map from matched pairs."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if len(xs) < 2:
            raise InsufficientDataError("need at least two matched pairs")
        order = np.argsort(xs)
        self.xs = xs[order]
        lifted = ys[order].copy()
        for i in range(1, len(lifted)):
            dip = lifted[i] - lifted[i - 1]
            if dip <= -0.5:
                lifted[i] += 1.0  # the genuine wraparound cut
            if lifted[i] < lifted[i - 1]:
                lifted[i] = lifted[i - 1]  # float noise becomes a plateau
        self.ys = lifted
        self._ext_xs = np.concatenate([[self.xs[-1] - 1.0], self.xs, [self.xs[0] + 1.0]])
        self._ext_ys = np.concatenate([[self.ys[-1] - 1.0], self.ys, [self.ys[0] + 1.0]])

    def __call__(self, theta):
        u = frac(np.asarray(theta, dtype=float))
        return frac(np.interp(u, self._ext_xs, self._ext_ys))

    def monotone_degree_one(self) -> bool:
        return bool(
            np.all(np.diff(self.xs) > 0)
            and np.all(np.diff(self.ys) >= 0)
            and (self.ys[-1] - self.ys[0]) <= 1.0 + 1e-9
        )

    def sup_distance_to_identity(self, grid: int = 4096) -> float:
        t = np.linspace(0.0, 1.0, grid, endpoint=False)
        return float(np.max(circle_dist(self(t), t)))


@dataclass
class SemiConjugacy:
    table: MonotoneTable
    matched: List[Tuple[Tuple[str, ...], float, float]]
    discarded: int
    defect: float
    distance_to_identity: float

    def __call__(self, theta):
        return self.table(theta)


def _cyclic_order_filter(
    pairs: List[Tuple[Tuple[str, ...], float, float]],
    max_starts: int = 64,
) -> Tuple[List[Tuple[Tuple[str, ...], float, float]], int]:
    """Keep a large cyclically increasing subfamily of (x, y) pairs.

    Sorted by x, a consistent family's y-column is nondecreasing except
    for one wraparound drop, so only drop positions are useful starting
    cuts; each is tried greedily and the best kept.
    """
    if len(pairs) < 3:
        return pairs, 0
    by_x = sorted(pairs, key=lambda p: p[1])
    ys = [p[2] for p in by_x]
    n = len(ys)
    drops = [i for i in range(n) if ys[i] < ys[i - 1] - 1e-12]
    starts = (drops or [0])[:max_starts]
    best_keep: List[int] = []
    for start in starts:
        keep = [start]
        last = ys[start]
        for k in range(1, n):
            idx = (start + k) % n
            val = ys[idx] if idx >= start else ys[idx] + 1.0
            if val + 1e-12 >= last:
                keep.append(idx)
                last = val
        if len(keep) > len(best_keep):
            best_keep = keep
        if len(best_keep) == n:
            break
    kept = [by_x[i] for i in sorted(best_keep)]
    return kept, n - len(kept)


def build_semiconjugacy(
    rho0: CircleAction,
    rho: CircleAction,
    word_length_cap: int,
    search_cap: Optional[int] = None,
    min_pairs: int = 8,
    trace_margin: float = 0.05,
    slope_cap: float = 0.9,
    grid: int = 4096,
) -> SemiConjugacy:
    """Match attracting fixed points of rho-words to rho0-words.

    Fixed points are searched on cyclically reduced words up to
    search_cap; a word contributes a pair (fix+ rho(w), fix+ rho0(w))
    when the standard matrix is hyperbolic beyond the trace margin and
    the perturbed fixed point carries a contraction certificate.  Every
    other word up to word_length_cap is conjugate to a searched one, and
    its fixed points come from translating matched pairs by the actions
    (fix rho(u w u^-1) = rho(u) fix rho(w), computed exactly).  Pairs
    violating cyclic order are discarded and counted; the survivors
    interpolate to a monotone degree-one candidate h, whose equivariance
    defect on the generators is measured on the grid.
    """
    names = rho0.generator_names()
    if search_cap is None:
        search_cap = min(word_length_cap, 4)
    conj_depth = max(0, (word_length_cap - search_cap + 1) // 2)
    base_pairs: List[Tuple[Tuple[str, ...], float, float]] = []
    seen_x: List[float] = []
    for w in reduced_words(names, search_cap, cyclically_reduced=True):
        try:
            m = rho0.word_matrix(w)
        except (ValueError, FixedPointError):
            continue
        if abs(m.trace) <= 2.0 + trace_margin:
            continue
        try:
            y = m.fixed_points()[0]
            fwd = rho.word_map(w)
            x = attracting_fixed_point(fwd, slope_cap=slope_cap)
        except FixedPointError:
            continue
        if any(circle_dist(x, prev) < 1e-9 for prev in seen_x):
            continue
        seen_x.append(x)
        base_pairs.append((w, float(x), float(y)))
    if len(base_pairs) < min_pairs:
        raise InsufficientDataError(
            f"only {len(base_pairs)} consistent fixed-point pairs (need {min_pairs})"
        )
    pairs = list(base_pairs)
    if conj_depth > 0:
        xs = np.array([p[1] for p in base_pairs])
        ys = np.array([p[2] for p in base_pairs])
        for u in reduced_words(names, conj_depth, cyclically_reduced=False):
            ux = np.asarray(rho.apply(u, xs))
            uy = np.asarray(rho0.apply(u, ys))
            tag = tuple(u) + ("*",)
            pairs.extend(
                (tag + (p[0] if isinstance(p[0], tuple) else (p[0],)), float(a), float(b))
                for p, a, b in zip(base_pairs, ux, uy)
            )
        pairs = _dedupe_pairs(pairs)
    kept, discarded = _cyclic_order_filter(pairs)
    if len(kept) < min_pairs:
        raise InsufficientDataError(
            f"only {len(kept)} pairs survive the cyclic-order filter"
        )
    table = MonotoneTable(
        np.array([p[1] for p in kept]), np.array([p[2] for p in kept])
    )
    words = [(n,) for n in names] + [(n.upper(),) for n in names]
    report = verify_semiconjugacy(table, rho0, rho, words, grid)
    return SemiConjugacy(
        table, kept, discarded, report.defect, report.distance_to_identity
    )


def _dedupe_pairs(pairs, tol: float = 2e-12):
    by_x = sorted(pairs, key=lambda p: p[1])
    out = []
    for p in by_x:
        if out and abs(p[1] - out[-1][1]) < tol:
            continue
        out.append(p)
    # the wraparound neighbor can also collide
    if len(out) > 1 and abs((out[0][1] + 1.0) - out[-1][1]) < tol:
        out.pop()
    return out


@dataclass(frozen=True)
class VerificationReport:
    defect: float
    distance_to_identity: float
    monotone_degree_one: bool
    words_checked: int
    grid: int


def verify_semiconjugacy(
    h,
    rho0: CircleAction,
    rho: CircleAction,
    words: Iterable[Sequence[str]],
    grid: int = 4096,
    sample_points: Optional[np.ndarray] = None,
) -> VerificationReport:
    """Measure max distance(h(rho(g) x), rho0(g) h(x)) over words and grid."""
    t = (
        np.asarray(sample_points, dtype=float)
        if sample_points is not None
        else np.linspace(0.0, 1.0, grid, endpoint=False)
    )
    hx = h(t)
    # conjugated actions share phi^-1(t) across every word
    conj = getattr(rho, "conjugator", None)
    base = getattr(rho, "base", None)
    if conj is not None and base is not None and base.matrices is not None:
        phi, phi_inv = conj
        u0 = np.asarray(phi_inv(t))

        def rho_w(w):
            return np.asarray(phi(base.word_map(w)(u0)))

    else:

        def rho_w(w):
            return np.asarray(rho.apply(w, t))

    defect = 0.0
    count = 0
    for w in words:
        count += 1
        left = h(rho_w(w))
        right = rho0.apply(w, hx)
        defect = max(defect, float(np.max(circle_dist(left, right))))
    monotone = h.monotone_degree_one() if isinstance(h, MonotoneTable) else True
    dist_id = (
        h.sup_distance_to_identity(grid)
        if hasattr(h, "sup_distance_to_identity")
        else float(np.max(circle_dist(h(t), t)))
    )
    return VerificationReport(defect, dist_id, monotone, count, len(t))


# -- minimal set --------------------------------------------------------------


def minimal_set(action: CircleAction, depth: int) -> List[List[Tuple[float, float]]]:
    """Nested pad covers of the limit set: depth-n arcs w(pad) for |w| = n.

    Returns covers for depths 1..depth; cover k+1 refines cover k by the
    ping-pong containments.
    """
    if action.spec.kind != "schottky":
        raise ValueError("minimal_set needs a Schottky action")
    spec = action.spec
    pads = spec.pads()
    inverse_of = {"a": "A", "b": "B", "A": "a", "B": "b"}
    covers: List[List[Tuple[float, float]]] = []
    # level-1 arcs are the pads themselves, indexed by their last letter
    frontier: List[Tuple[Tuple[str, ...], Tuple[float, float]]] = [
        ((tok,), pad) for tok, pad in sorted(pads.items())
    ]
    covers.append([arc for _, arc in frontier])
    for level in range(2, depth + 1):
        nxt: List[Tuple[Tuple[str, ...], Tuple[float, float]]] = []
        for word, _ in frontier:
            for tok in sorted(pads):
                if tok == inverse_of[word[-1]]:
                    continue
                new_word = word + (tok,)
                arc = _word_arc(action, new_word)
                nxt.append((new_word, arc))
        covers.append([arc for _, arc in nxt])
        frontier = nxt
    return covers


def _word_arc(action: CircleAction, word: Tuple[str, ...]) -> Tuple[float, float]:
    """Arc w_1 ... w_{n-1} (pad of w_n) under the action."""
    pad = action.spec.pads()[word[-1]]
    lo, hi = pad
    pts = np.array([lo, hi])
    for tok in reversed(word[:-1]):
        pts = np.asarray(action.maps[tok](pts))
    return (float(pts[0]), float(pts[1]))


def cover_length(cover: List[Tuple[float, float]]) -> float:
    return float(sum(frac(hi - lo) for lo, hi in cover))


def covers_nest_strictly(
    parent: List[Tuple[float, float]], child: List[Tuple[float, float]], slack: float = 1e-9
) -> bool:
    """Every child arc sits strictly inside some parent arc."""
    for lo, hi in child:
        ok = False
        for plo, phi in parent:
            if arc_contains((plo, phi), lo, strict=True) and arc_contains(
                (plo, phi), hi, strict=True
            ):
                span_child = frac(hi - lo)
                span_parent = frac(phi - plo)
                if span_child < span_parent - slack:
                    ok = True
                    break
        if not ok:
            return False
    return True
