"""Monotone scalar maps and the constructions built from them.

* equivalence functions (increasing bijections) turn a measure into an
  equivalent one of the same kind and conjugate its transitivity operator;
* unit transformations (decreasing bijections of ``[0, 1]``) and general
  transformations built around them switch between similarity and
  dissimilarity;
* dualising a measure through a decreasing map yields a :class:`DualTriple`
  and the operator of the dual side is obtained by the same conjugation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .errors import DirectionError, DomainMismatchError, SpecParseError, TransformationError
from .measures import DEFAULT_TOL, DomainSample, Interval, Kind, Measure, interval_grid, make_measure
from .operators import TransitivityOperator, apply_elementwise

INVERSE_XTOL = 1e-12
VALIDATION_POINTS = 101
ROOT_SNAP = 8 * np.finfo(float).eps


class Direction(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class ScalarMap:
    """An invertible monotone real map ``domain -> codomain``.

    ``forward`` and ``inverse`` should accept numpy arrays; plain scalar
    callables still work, just more slowly.
    """

    forward: Callable = field(repr=False)
    inverse: Callable = field(repr=False)
    domain: Interval
    codomain: Interval
    direction: Direction
    name: str
    numeric_inverse: bool = False

    def __call__(self, z):
        return self.forward(z)

    @property
    def increasing(self) -> bool:
        return self.direction is Direction.INCREASING

    def inverted(self) -> "ScalarMap":
        """The inverse map, with domain and codomain swapped."""
        name = self.name[:-3] if self.name.endswith("^-1") else f"{self.name}^-1"
        return ScalarMap(
            self.inverse, self.forward, self.codomain, self.domain, self.direction, name, self.numeric_inverse
        )

    def image(self, interval: Interval) -> Interval:
        """Image of a sub-interval of the domain, with open/closed flags carried.

        Infinite endpoints map to the corresponding end of ``codomain``.

        Raises:
            DomainMismatchError: ``interval`` is not inside ``domain``.
        """
        if not self.domain.contains_interval(interval):
            raise DomainMismatchError(f"{interval} is not inside the domain {self.domain} of {self.name!r}")
        lo = self._endpoint(interval.lo, self.codomain.lo if self.increasing else self.codomain.hi)
        hi = self._endpoint(interval.hi, self.codomain.hi if self.increasing else self.codomain.lo)
        if self.increasing:
            return _interval(lo, hi, interval.lo_closed, interval.hi_closed)
        return _interval(hi, lo, interval.hi_closed, interval.lo_closed)

    def _endpoint(self, z: float, limit: float) -> float:
        if math.isinf(z):
            return limit
        try:
            with np.errstate(all="ignore"):
                value = float(self.forward(z))
        except (ArithmeticError, ValueError):
            return limit
        return limit if math.isnan(value) else value

    def check(self, grid: Optional[Sequence[float]] = None, tol: float = DEFAULT_TOL) -> None:
        """Validate round-trip and monotonicity on ``grid``.

        The default grid has :data:`VALIDATION_POINTS` points over ``domain``.

        Raises:
            TransformationError: a check fails; the message names the witness.
        """
        zs = np.array(interval_grid(self.domain, VALIDATION_POINTS) if grid is None else list(grid), dtype=float)
        fz = _evaluate(self.forward, zs)
        back = _evaluate(self.inverse, fz)
        bad = ~(np.abs(back - zs) <= tol * np.maximum(1.0, np.abs(zs)))
        if bad.any():
            k = int(np.argmax(bad))
            raise TransformationError(
                f"{self.name!r}: inverse(forward({zs[k]})) = {back[k]} does not round-trip"
            )
        steps = np.diff(fz)
        bad = steps <= 0 if self.increasing else steps >= 0
        if bad.any():
            k = int(np.argmax(bad))
            raise TransformationError(
                f"{self.name!r} is not {self.direction.value} between {zs[k]} and {zs[k + 1]}"
            )


def _interval(lo: float, hi: float, lo_closed: bool, hi_closed: bool) -> Interval:
    return Interval(lo, hi, lo_closed and not math.isinf(lo), hi_closed and not math.isinf(hi))


def _evaluate(fn: Callable, zs: np.ndarray) -> np.ndarray:
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(fn(zs), dtype=float)
        if out.shape == zs.shape:
            return out
    except Exception:
        pass
    return np.array([float(fn(float(z))) for z in zs])


def bisection_inverse(
    forward: Callable[[float], float],
    domain: Interval,
    direction: Direction,
    xtol: float = INVERSE_XTOL,
) -> Callable:
    """Numeric inverse of a monotone ``forward`` by bisection over ``domain``.

    Infinite ends of the domain are bracketed by doubling outward.
    """
    sign = 1.0 if direction is Direction.INCREASING else -1.0

    def inner(lo_end: float) -> float:
        return float(np.nextafter(lo_end, math.inf))

    def solve(y: float) -> float:
        y = float(y)

        def g(z):
            return sign * (float(forward(z)) - y)

        if domain.bounded_below:
            lo = domain.lo if domain.lo_closed else inner(domain.lo)
        else:
            lo = min(-1.0, domain.hi - 1.0)
            while g(lo) > 0:
                lo *= 2.0
                if lo < -1e300:
                    raise TransformationError(f"cannot bracket the preimage of {y}")
        if domain.bounded_above:
            hi = domain.hi if domain.hi_closed else float(np.nextafter(domain.hi, -math.inf))
        else:
            hi = max(1.0, domain.lo + 1.0)
            while g(hi) < 0:
                hi *= 2.0
                if hi > 1e300:
                    raise TransformationError(f"cannot bracket the preimage of {y}")
        glo, ghi = g(lo), g(hi)
        if glo == 0:
            return lo
        if ghi == 0:
            return hi
        if glo > 0 or ghi < 0:
            raise TransformationError(f"{y} is outside the range of the map")
        return bisect(g, lo, hi, xtol=xtol)

    def inverse(y):
        if np.ndim(y) == 0:
            return solve(y)
        return np.vectorize(solve, otypes=[float])(y)

    return inverse


def scalar_map(
    forward: Callable,
    domain: Interval,
    codomain: Interval,
    direction: Direction,
    name: str,
    inverse: Optional[Callable] = None,
    check: bool = True,
    tol: float = DEFAULT_TOL,
) -> ScalarMap:
    """Build a :class:`ScalarMap`, constructing a bisection inverse if needed."""
    numeric = inverse is None
    if numeric:
        inverse = bisection_inverse(forward, domain, direction)
    m = ScalarMap(forward, inverse, domain, codomain, direction, name, numeric)
    if check:
        m.check(tol=tol)
    return m


def identity_map(interval: Interval) -> ScalarMap:
    return ScalarMap(lambda z: z, lambda z: z, interval, interval, Direction.INCREASING, "id")


def linear_map(a: float, b: float) -> ScalarMap:
    if a == 0:
        raise TransformationError("lin:a:b needs a != 0")
    direction = Direction.INCREASING if a > 0 else Direction.DECREASING
    line = Interval.real_line()
    return ScalarMap(
        lambda z: a * z + b,
        lambda w: (w - b) / a,
        line, line, direction, f"lin({a:g},{b:g})",
    )


def power_map(a: float) -> ScalarMap:
    """``z -> z**a`` on the non-negative reals (positive reals when ``a < 0``)."""
    if a == 0:
        raise TransformationError("pow:a needs a != 0")
    if a > 0:
        half = Interval.from_lower(0.0)
        return ScalarMap(
            lambda z: np.power(z, a), lambda w: np.power(w, 1.0 / a), half, half, Direction.INCREASING, f"pow({a:g})"
        )
    pos = Interval(0.0, math.inf, False, False)
    return ScalarMap(
        lambda z: np.power(z, a), lambda w: np.power(w, 1.0 / a), pos, pos, Direction.DECREASING, f"pow({a:g})"
    )


def explog_map() -> ScalarMap:
    """``z -> e**z - 1`` on ``[0, inf)``, inverse ``ln(z + 1)``."""
    half = Interval.from_lower(0.0)
    return ScalarMap(np.expm1, np.log1p, half, half, Direction.INCREASING, "exp-1")


def log1p_map() -> ScalarMap:
    """``z -> ln(z + 1)`` on ``[0, inf)``."""
    return explog_map().inverted()


def log_map() -> ScalarMap:
    """Natural logarithm ``(0, inf) -> R``."""
    return ScalarMap(
        np.log, np.exp, Interval(0.0, math.inf, False, False), Interval.real_line(), Direction.INCREASING, "log"
    )


def one_minus_map(alpha: float = 1.0, extended: bool = False) -> ScalarMap:
    """``z -> (1 - z)**(1/alpha)``, a decreasing bijection of ``[0, 1]`` for ``alpha > 0``.

    Negative ``alpha`` maps ``[0, 1]`` onto ``[1, inf]`` and is only accepted
    with ``extended=True``.
    """
    if alpha == 0:
        raise TransformationError("alpha must be non-zero")
    if alpha < 0 and not extended:
        raise TransformationError("negative alpha is only accepted with extended=True")
    inv_alpha = 1.0 / alpha
    # same snapping as the Lukasiewicz family: the root magnifies rounding just above 0
    snap = 0.0 if alpha == 1 else ROOT_SNAP

    def forward(z):
        base = 1.0 - np.asarray(z, dtype=float)
        with np.errstate(divide="ignore"):
            return np.power(np.where(base > snap, base, 0.0), inv_alpha)

    def inverse(w):
        return 1.0 - np.power(w, alpha)

    unit = Interval.unit()
    if alpha > 0:
        name = "1-z" if alpha == 1 else f"(1-z)^(1/{alpha:g})"
        return ScalarMap(forward, inverse, unit, unit, Direction.DECREASING, name)
    upper = Interval(1.0, math.inf, True, False)
    return ScalarMap(forward, inverse, Interval(0.0, 1.0, False, True), upper, Direction.DECREASING,
                     f"(1-z)^(1/{alpha:g})")


def ratio_map(k: float) -> ScalarMap:
    """``z -> z / (z + k)``, an increasing bijection ``[0, inf) -> [0, 1)``."""
    if k <= 0:
        raise TransformationError("ratk:k needs k > 0")
    return ScalarMap(
        lambda z: np.asarray(z, dtype=float) / (np.asarray(z, dtype=float) + k),
        lambda w: k * np.asarray(w, dtype=float) / (1.0 - np.asarray(w, dtype=float)),
        Interval.from_lower(0.0), Interval(0.0, 1.0, True, False), Direction.INCREASING, f"z/(z+{k:g})",
    )


def parse_map(spec: str) -> ScalarMap:
    """Parse ``lin:a:b``, ``pow:a``, ``explog``, ``log1p``, ``log``,
    ``oneminus:alpha`` or ``ratk:k``."""
    head, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        nums = [float(a) for a in args]
    except ValueError as exc:
        raise SpecParseError(f"bad number in map spec {spec!r}") from exc
    try:
        if head == "lin" and len(nums) == 2:
            return linear_map(*nums)
        if head == "pow" and len(nums) == 1:
            return power_map(nums[0])
        if head == "explog" and not nums:
            return explog_map()
        if head == "log1p" and not nums:
            return log1p_map()
        if head == "log" and not nums:
            return log_map()
        if head == "oneminus" and len(nums) == 1:
            return one_minus_map(nums[0])
        if head == "ratk" and len(nums) == 1:
            return ratio_map(nums[0])
    except TransformationError as exc:
        raise SpecParseError(str(exc)) from exc
    raise SpecParseError(f"unknown map spec {spec!r}")


def _after(f: Callable, pair_fn: Callable) -> Callable:
    def fn(x, y):
        return f(float(pair_fn(x, y)))

    return fn


def apply_equivalence(m: Measure, f: ScalarMap) -> Measure:
    """``f o m``: an equivalent measure of the same kind.

    The new codomain is the image of ``m.codomain``; boundedness is re-derived
    from it rather than assumed.

    Raises:
        DirectionError: ``f`` is decreasing.
        DomainMismatchError: ``m.codomain`` is not inside ``f.domain``.
    """
    if not f.increasing:
        raise DirectionError(f"equivalence needs an increasing map, {f.name!r} is decreasing")
    codomain = f.image(m.codomain)
    return make_measure(m.kind, codomain, _after(f.forward, m.eval), f"{f.name}∘{m.name}")


def _conjugate(op: TransitivityOperator, f: ScalarMap, side: Kind, name: str) -> TransitivityOperator:
    domain = f.image(op.domain)
    forward, inverse, apply = f.forward, f.inverse, op.apply

    def conjugated(a, b):
        return forward(apply(inverse(a), inverse(b)))

    with np.errstate(all="ignore"):
        e = float(forward(op.null_element))
    if math.isinf(e) or math.isnan(e):
        e = domain.hi if side is Kind.SIMILARITY else domain.lo
    return TransitivityOperator(domain, e, conjugated, name, side)


def conjugate_operator(op: TransitivityOperator, f: ScalarMap) -> TransitivityOperator:
    """Operator of ``f o m`` given that ``m`` is ``op``-transitive.

    ``apply(a, b) = f(op(f^-1(a), f^-1(b)))`` on the image of ``op.domain``.

    Raises:
        DirectionError: ``f`` is decreasing.
        DomainMismatchError: ``op.domain`` is not inside ``f.domain``.
    """
    if not f.increasing:
        raise DirectionError(f"conjugation needs an increasing map, {f.name!r} is decreasing")
    return _conjugate(op, f, op.side, f"{f.name}[{op.name}]")


def transfer_operator(op: TransitivityOperator, f: ScalarMap) -> TransitivityOperator:
    """Operator on the dual side: ``f(op(f^-1(a), f^-1(b)))``.

    ``f`` is decreasing, so the null element moves from one end of the
    interval to the other and the operator changes side.

    Raises:
        DirectionError: ``f`` is increasing.
        DomainMismatchError: ``op.domain`` is not inside ``f.domain``.
    """
    if f.increasing:
        raise DirectionError(f"transfer needs a decreasing map, {f.name!r} is increasing")
    return _conjugate(op, f, op.side.opposite, f"{f.name}[{op.name}]")


def make_unit_transformation(
    forward: Callable,
    tol: float = DEFAULT_TOL,
    inverse: Optional[Callable] = None,
    name: str = "n",
) -> ScalarMap:
    """Validate a decreasing bijection of ``[0, 1]``.

    Checks ``n(0) = 1`` and ``n(1) = 0`` within ``tol`` and strict decrease on
    a :data:`VALIDATION_POINTS`-point grid. Without ``inverse`` a bisection
    inverse is built and the map is flagged ``numeric_inverse``.

    Raises:
        TransformationError: an endpoint or monotonicity condition fails.
    """
    unit = Interval.unit()
    at0, at1 = float(forward(0.0)), float(forward(1.0))
    if abs(at0 - 1.0) > tol or abs(at1) > tol:
        raise TransformationError(f"{name!r}: need n(0) = 1 and n(1) = 0, got n(0) = {at0}, n(1) = {at1}")
    zs = np.array(interval_grid(unit, VALIDATION_POINTS))
    fz = _evaluate(forward, zs)
    steps = np.diff(fz)
    if (steps >= 0).any():
        k = int(np.argmax(steps >= 0))
        raise TransformationError(f"{name!r} is not decreasing between {zs[k]} and {zs[k + 1]}")
    return scalar_map(forward, unit, unit, Direction.DECREASING, name, inverse=inverse, tol=tol)


@dataclass(frozen=True)
class InvolutionCheck:
    holds: bool
    counterexample: Optional[float] = None
    value: Optional[float] = None

    def __bool__(self) -> bool:
        return self.holds


def is_involutive(n: ScalarMap, grid: Sequence[float], tol: float = DEFAULT_TOL) -> InvolutionCheck:
    """True iff ``n(n(z)) = z`` within ``tol`` on every grid point.

    The counterexample is the first failing grid point and ``value`` is
    ``n(n(z))`` there.
    """
    for z in grid:
        twice = float(n.forward(n.forward(float(z))))
        if abs(twice - z) > tol:
            return InvolutionCheck(False, float(z), twice)
    return InvolutionCheck(True)


def make_general_transformation(f1: ScalarMap, n: ScalarMap, f2: ScalarMap) -> ScalarMap:
    """Compose ``f1 o n o f2`` into a decreasing map.

    ``f2`` is the increasing map carrying the input interval into ``[0, 1]``,
    ``n`` a unit transformation and ``f1`` the increasing map carrying
    ``[0, 1]`` onto the output interval. The inverse is composed from the
    parts' inverses.

    Raises:
        DirectionError: a part has the wrong direction.
        DomainMismatchError: a seam does not fit.
    """
    if not (f1.increasing and f2.increasing):
        raise DirectionError("the outer maps of a general transformation must be increasing")
    if n.increasing:
        raise DirectionError(f"{n.name!r} must be decreasing")
    if not n.domain.contains_interval(f2.codomain):
        raise DomainMismatchError(f"seam mismatch: {f2.name!r} lands in {f2.codomain}, {n.name!r} takes {n.domain}")
    inner_image = n.image(f2.codomain)
    if not f1.domain.contains_interval(inner_image):
        raise DomainMismatchError(
            f"seam mismatch: {n.name!r} lands in {inner_image}, {f1.name!r} takes {f1.domain}"
        )
    codomain = f1.image(inner_image)

    def forward(z):
        return f1.forward(n.forward(f2.forward(z)))

    def inverse(w):
        return f2.inverse(n.inverse(f1.inverse(w)))

    name = f"{f1.name}∘{n.name}∘{f2.name}"
    numeric = f1.numeric_inverse or n.numeric_inverse or f2.numeric_inverse
    return ScalarMap(forward, inverse, f2.domain, codomain, Direction.DECREASING, name, numeric)


@dataclass(frozen=True)
class DualTriple:
    """A similarity and a dissimilarity with ``d = f o s``.

    ``f`` always points from the similarity codomain to the dissimilarity
    codomain, whichever side the triple was built from. The optional
    operators record the transitivity of each side when known.
    """

    s: Measure
    d: Measure
    f: ScalarMap
    s_operator: Optional[TransitivityOperator] = None
    d_operator: Optional[TransitivityOperator] = None

    def max_deviation(self, dom: DomainSample) -> float:
        """Largest ``|d(x, y) - f(s(x, y))|`` over the sample."""
        worst = 0.0
        for x in dom:
            for y in dom:
                worst = max(worst, abs(float(self.d(x, y)) - float(self.f.forward(self.s(x, y)))))
        return worst

    def check(self, dom: DomainSample, tol: float = DEFAULT_TOL) -> bool:
        return self.max_deviation(dom) <= tol


def dualize_measure(m: Measure, f: ScalarMap, op: Optional[TransitivityOperator] = None) -> DualTriple:
    """Dualise ``m`` through the decreasing map ``f``.

    The new measure is ``f o m`` with the opposite kind and codomain equal to
    the image of ``m.codomain``. When ``op`` (the transitivity of ``m``) is
    given, its transfer through ``f`` is recorded for the new side.

    Raises:
        DirectionError: ``f`` is increasing.
        DomainMismatchError: ``m.codomain`` is not inside ``f.domain``.
    """
    if f.increasing:
        raise DirectionError(f"duality needs a decreasing map, {f.name!r} is increasing")
    codomain = f.image(m.codomain)
    dual = make_measure(m.kind.opposite, codomain, _after(f.forward, m.eval), f"{f.name}∘{m.name}")
    dual_op = transfer_operator(op, f) if op is not None else None
    if m.is_similarity:
        return DualTriple(m, dual, f, op, dual_op)
    return DualTriple(dual, m, f.inverted(), dual_op, op)


def operators_agree(op1: TransitivityOperator, op2: TransitivityOperator, grid: Sequence[float],
                    tol: float = DEFAULT_TOL) -> Optional[tuple]:
    """First grid pair where the operators differ by more than ``tol``, else None."""
    g = np.asarray(list(grid), dtype=float)
    t1 = apply_elementwise(op1.apply, g[:, None], g[None, :])
    t2 = apply_elementwise(op2.apply, g[:, None], g[None, :])
    bad = np.argwhere(~(np.abs(t1 - t2) <= tol))
    if len(bad) == 0:
        return None
    i, j = bad[0]
    return (float(g[i]), float(g[j]), float(t1[i, j]), float(t2[i, j]))
