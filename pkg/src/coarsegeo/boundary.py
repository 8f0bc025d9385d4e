"""Boundary points as eventually periodic geodesic rays.

A point is stored as (prefix, period): the ray reads prefix followed by
infinitely many copies of period.  Construction verifies that every
truncation up to a configured depth is a geodesic word, which for these
models certifies the whole ray (periodic geodesics stay geodesic).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .ball import Ball
from .models import GroupModel, distance, group_length
from .words import EMPTY, Word, free_reduce

DEFAULT_CHECK_DEPTH = 16


class RayError(ValueError):
    """The proposed (prefix, period) pair does not define a geodesic ray."""


class PrecisionError(RuntimeError):
    """A product interval was still growing at the maximum depth."""


class NotDistinctError(ValueError):
    """Two boundary points coincide (or cannot be separated at this depth)."""


@dataclass(frozen=True)
class BoundaryPoint:
    prefix: Word
    period: Word

    def __post_init__(self):
        if not self.period:
            raise RayError("period must be nonempty")

    def truncation(self, n: int) -> Word:
        """First n letters of prefix . period . period . ..."""
        if n < 0:
            raise ValueError("truncation depth must be nonnegative")
        out = list(self.prefix[:n])
        while len(out) < n:
            take = min(len(self.period), n - len(out))
            out.extend(self.period[:take])
        return tuple(out)

    def spelled(self, model: GroupModel) -> str:
        return f"{model.text(self.prefix)}|{model.text(self.period)}"


def truncate(p: BoundaryPoint, n: int) -> Word:
    return p.truncation(n)


def make_boundary_point(
    model: GroupModel,
    prefix,
    period=None,
    check_depth: int = DEFAULT_CHECK_DEPTH,
) -> BoundaryPoint:
    """Build and validate a boundary point.

    Accepts either literal syntax "prefix|period" (e.g. "|a", "a|b") or an
    explicit (prefix, period) pair of words/strings.
    """
    if period is None:
        if not isinstance(prefix, str) or "|" not in prefix:
            raise RayError(f"expected 'prefix|period' literal, got {prefix!r}")
        pre_text, per_text = prefix.split("|", 1)
        pre = model.word(pre_text)
        per = model.word(per_text)
    else:
        pre = model.word(prefix) if isinstance(prefix, str) else free_reduce(prefix)
        per = model.word(period) if isinstance(period, str) else free_reduce(period)
    point = BoundaryPoint(pre, per)
    if group_length(model, per) == 0:
        raise RayError("period is trivial in the model")
    depth = max(check_depth, len(pre) + 2 * len(per) + 2)
    for n in range(1, depth + 1):
        w = point.truncation(n)
        if group_length(model, w) != n:
            raise RayError(
                f"truncation at depth {n} is not geodesic: {model.text(w)!r}"
            )
    return point


@dataclass(frozen=True)
class ProductInterval:
    """Certified bracket [lower, upper] for a Gromov product at infinity."""

    lower: Fraction
    upper: Fraction
    depth: int
    stabilized: bool

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2


def _model_of(b: Union[Ball, GroupModel]) -> GroupModel:
    return b.model if isinstance(b, Ball) else b


def _rays_equal_to_depth(alpha: BoundaryPoint, beta: BoundaryPoint, depth: int) -> bool:
    return alpha.truncation(depth) == beta.truncation(depth)


def gromov_product_infinity(
    b: Union[Ball, GroupModel],
    p: Word,
    alpha: BoundaryPoint,
    beta: BoundaryPoint,
    depth: int,
    nu: Fraction = Fraction(0),
) -> ProductInterval:
    """Bracket the product of two boundary points at p from ray truncations.

    The reported interval is [L, L + 2 nu] with L = (max product over
    truncation pairs) - 2 nu: rays undershoot the value at infinity by at
    most 2 nu.  Raises NotDistinctError when the rays agree letterwise to
    this depth, and PrecisionError when the running maximum is still
    growing in the last period window (coinciding points look the same).
    """
    model = _model_of(b)
    if isinstance(b, Ball) and depth > b.radius:
        raise ValueError(f"depth {depth} exceeds ball radius {b.radius}")
    nu = Fraction(nu)
    if depth < 4:
        raise ValueError("depth must be at least 4")
    if _rays_equal_to_depth(alpha, beta, depth):
        raise NotDistinctError("rays agree to the requested depth: not distinct")
    steps_a = [alpha.truncation(n) for n in range(depth + 1)]
    steps_b = [beta.truncation(n) for n in range(depth + 1)]
    d_pa = [distance(model, p, w) for w in steps_a]
    d_pb = [distance(model, p, w) for w in steps_b]
    best = Fraction(0)
    best_by_level = []
    for n in range(depth + 1):
        for i, j in ((n, k) for k in range(n + 1)):
            prod = Fraction(
                d_pa[i] + d_pb[j] - distance(model, steps_a[i], steps_b[j]), 2
            )
            if prod > best:
                best = prod
        for i in range(n):
            prod = Fraction(
                d_pa[i] + d_pb[n] - distance(model, steps_a[i], steps_b[n]), 2
            )
            if prod > best:
                best = prod
        best_by_level.append(best)
    window = max(2, len(alpha.period), len(beta.period))
    stabilized = depth > window and best_by_level[depth - window] == best
    if not stabilized:
        raise PrecisionError(
            "product still growing at maximum depth: increase depth or the "
            "points are not distinct"
        )
    return ProductInterval(best - 2 * nu, best, depth, True)


@dataclass(frozen=True)
class VisualMetricParams:
    lam: float = 2.0
    k1: float = 1.0
    k2: float = 1.0
    depth: int = 12
    nu: Fraction = Fraction(0)

    def __post_init__(self):
        if not self.lam > 1:
            raise ValueError("lambda must exceed 1")
        if not 0 < self.k1 <= self.k2:
            raise ValueError("need 0 < k1 <= k2")
        if self.depth < 4:
            raise ValueError("depth must be at least 4")


@dataclass(frozen=True)
class DistanceInterval:
    lower: float
    upper: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def visual_distance(params: VisualMetricParams, product: ProductInterval) -> DistanceInterval:
    """Visual-metric bracket k1*lam^-upper <= d <= k2*lam^-lower."""
    lo = params.k1 * params.lam ** float(-product.upper)
    hi = params.k2 * params.lam ** float(-product.lower)
    return DistanceInterval(lo, hi)


def pair_distance(
    b: Union[Ball, GroupModel],
    alpha: BoundaryPoint,
    beta: BoundaryPoint,
    params: VisualMetricParams,
) -> DistanceInterval:
    prod = gromov_product_infinity(b, EMPTY, alpha, beta, params.depth, params.nu)
    return visual_distance(params, prod)


def minsep(
    t: Tuple[BoundaryPoint, BoundaryPoint, BoundaryPoint],
    params: VisualMetricParams,
    b: Union[Ball, GroupModel],
) -> float:
    """Minimum pairwise working visual distance within a boundary triple."""
    a, bb, c = t
    try:
        pairs = [
            pair_distance(b, a, bb, params),
            pair_distance(b, a, c, params),
            pair_distance(b, bb, c, params),
        ]
    except (NotDistinctError, PrecisionError) as exc:
        raise NotDistinctError(f"triple is not pairwise distinct: {exc}") from exc
    return min(d.midpoint for d in pairs)
