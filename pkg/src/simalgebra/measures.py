"""Measures, codomain intervals, finite domain samples and induced preorders.

A measure is a total function on pairs of elements, tagged as a similarity
(upper bounded, larger means more alike) or a dissimilarity (lower bounded,
smaller means more alike). Verification always runs over a finite
:class:`DomainSample`.
"""

from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Generic, Iterator, Sequence, TypeVar

import numpy as np

from .errors import IntervalError, KindMismatchError, SpecParseError

E = TypeVar("E")

DEFAULT_TOL = 1e-9
DEFAULT_CAP = 10.0


class Kind(enum.Enum):
    SIMILARITY = "similarity"
    DISSIMILARITY = "dissimilarity"

    @property
    def opposite(self) -> "Kind":
        return Kind.DISSIMILARITY if self is Kind.SIMILARITY else Kind.SIMILARITY


@dataclass(frozen=True)
class Interval:
    """A real interval with open/closed flags; bounds may be infinite."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise IntervalError("interval bounds must not be NaN")
        if not self.lo < self.hi:
            raise IntervalError(f"degenerate interval: lo={self.lo} >= hi={self.hi}")
        if math.isinf(self.lo) and self.lo_closed:
            raise IntervalError("an infinite lower bound cannot be closed")
        if math.isinf(self.hi) and self.hi_closed:
            raise IntervalError("an infinite upper bound cannot be closed")

    @classmethod
    def closed(cls, lo: float, hi: float) -> "Interval":
        return cls(lo, hi, not math.isinf(lo), not math.isinf(hi))

    @classmethod
    def unit(cls) -> "Interval":
        return cls(0.0, 1.0, True, True)

    @classmethod
    def from_lower(cls, lo: float, closed: bool = True) -> "Interval":
        """``[lo, +inf)`` (or ``(lo, +inf)``)."""
        return cls(lo, math.inf, closed, False)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-math.inf, math.inf, False, False)

    @property
    def bounded_below(self) -> bool:
        return not math.isinf(self.lo)

    @property
    def bounded_above(self) -> bool:
        return not math.isinf(self.hi)

    def contains(self, value: float, tol: float = 0.0) -> bool:
        if math.isnan(value):
            return False
        if self.lo_closed:
            ok_lo = value >= self.lo - tol
        else:
            ok_lo = value > self.lo
        if self.hi_closed:
            ok_hi = value <= self.hi + tol
        else:
            ok_hi = value < self.hi
        return ok_lo and ok_hi

    def contains_interval(self, other: "Interval", tol: float = 1e-12) -> bool:
        """True when ``other`` is a subset of this interval (bounds within ``tol``)."""
        if other.lo < self.lo - tol:
            return False
        if other.hi > self.hi + tol:
            return False
        if abs(other.lo - self.lo) <= tol and other.lo_closed and not self.lo_closed:
            if not math.isinf(self.lo):
                return False
        if abs(other.hi - self.hi) <= tol and other.hi_closed and not self.hi_closed:
            if not math.isinf(self.hi):
                return False
        return True

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_fmt(self.lo)}, {_fmt(self.hi)}{right}"


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:g}"


def interval_grid(interval: Interval, points: int = 101, cap: float = DEFAULT_CAP) -> list[float]:
    """Evenly spaced sample of ``interval``, truncating infinite ends at ``cap``.

    Open endpoints are dropped from the sample.
    """
    lo, hi = interval.lo, interval.hi
    if math.isinf(lo) and math.isinf(hi):
        lo, hi = -cap, cap
    elif math.isinf(hi):
        hi = cap if cap > lo else lo + cap
    elif math.isinf(lo):
        lo = -cap if -cap < hi else hi - cap
    step = (hi - lo) / (points - 1)
    grid = [lo + k * step for k in range(points)]
    grid[-1] = hi
    if not interval.lo_closed:
        grid = grid[1:]
    if not interval.hi_closed and not math.isinf(interval.hi):
        grid = grid[:-1]
    return grid


@dataclass(frozen=True)
class Measure(Generic[E]):
    """A similarity or dissimilarity with a declared codomain.

    Build instances with :func:`make_measure`, which enforces the kind/codomain
    contract and the non-negative extremum convention.
    """

    kind: Kind
    codomain: Interval
    eval: Callable[[E, E], float]
    name: str
    shift: float = 0.0

    def __call__(self, x: E, y: E) -> float:
        return self.eval(x, y)

    @property
    def is_similarity(self) -> bool:
        return self.kind is Kind.SIMILARITY

    @property
    def extremum(self) -> float:
        """``s_max`` for similarities, ``d_min`` for dissimilarities."""
        return self.codomain.hi if self.is_similarity else self.codomain.lo

    @property
    def opposite_extremum(self) -> float:
        """``s_min`` for similarities, ``d_max`` for dissimilarities (may be infinite)."""
        return self.codomain.lo if self.is_similarity else self.codomain.hi

    def renamed(self, name: str) -> "Measure[E]":
        return Measure(self.kind, self.codomain, self.eval, name, self.shift)


def make_measure(
    kind: Kind,
    codomain: Interval,
    eval: Callable[[E, E], float],
    name: str = "m",
) -> Measure[E]:
    """Validate and build a measure.

    A similarity needs a finite upper bound and a dissimilarity a finite lower
    bound. When that extremum is negative the measure is shifted up by its
    absolute value so that ``s_max >= 0`` / ``d_min >= 0``; the shift is kept
    on the result and noted in its name.

    Raises:
        KindMismatchError: the codomain is unbounded on the side the kind needs.
    """
    if not isinstance(kind, Kind):
        raise KindMismatchError(f"unknown measure kind {kind!r}")
    if kind is Kind.SIMILARITY and not codomain.bounded_above:
        raise KindMismatchError(f"similarity {name!r} needs an upper bounded codomain, got {codomain}")
    if kind is Kind.DISSIMILARITY and not codomain.bounded_below:
        raise KindMismatchError(f"dissimilarity {name!r} needs a lower bounded codomain, got {codomain}")

    extremum = codomain.hi if kind is Kind.SIMILARITY else codomain.lo
    if extremum >= 0:
        return Measure(kind, codomain, eval, name)

    shift = abs(extremum)
    shifted = Interval(codomain.lo + shift, codomain.hi + shift, codomain.lo_closed, codomain.hi_closed)
    raw = eval

    def shifted_eval(x, y):
        return raw(x, y) + shift

    return Measure(kind, shifted, shifted_eval, f"{name}+{shift:g}", shift)


@dataclass(frozen=True)
class DomainSample(Generic[E]):
    """A finite, duplicate-free, ordered witness set for a measure's domain."""

    elements: tuple
    equality: Callable[[Any, Any], bool] = operator.eq
    label: str = ""

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise ValueError("a domain sample must be non-empty")
        if self.equality is operator.eq:
            try:
                if len(set(elements)) != len(elements):
                    raise ValueError("duplicate elements in domain sample")
                return
            except TypeError:
                pass
        for i, a in enumerate(elements):
            for b in elements[i + 1:]:
                if self.equality(a, b):
                    raise ValueError(f"duplicate elements in domain sample: {a!r}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[E]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> E:
        return self.elements[i]

    def same(self, a: E, b: E) -> bool:
        return bool(self.equality(a, b))


def real_grid(lo: float, hi: float, step: float) -> list[float]:
    """``lo + k*step`` for ``k = 0..floor((hi-lo)/step)``, in that order."""
    if step <= 0:
        raise SpecParseError("grid step must be positive")
    if hi < lo:
        raise SpecParseError("grid upper bound is below its lower bound")
    # relative slack keeps e.g. 0.3/0.1 = 2.999... from dropping the last point
    count = math.floor((hi - lo) / step * (1 + 1e-12) + 1e-12)
    return [lo + k * step for k in range(count + 1)]


def parse_domain(spec: str) -> DomainSample:
    """Parse ``real:<lo>:<hi>:<step>``, ``int:<lo>:<hi>`` or ``trees:<maxHeight>``."""
    head, _, rest = spec.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if head == "real" and len(parts) == 3:
            lo, hi, step = (float(p) for p in parts)
            return DomainSample(real_grid(lo, hi, step), label=spec)
        if head == "int" and len(parts) == 2:
            lo, hi = (int(p) for p in parts)
            if hi < lo:
                raise SpecParseError(f"empty integer range in {spec!r}")
            return DomainSample(list(range(lo, hi + 1)), label=spec)
        if head == "trees" and len(parts) == 1:
            from .trees import all_trees

            height = int(parts[0])
            if height < 0:
                raise SpecParseError("tree height must be non-negative")
            return DomainSample(all_trees(height), label=spec)
    except ValueError as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(f"bad domain spec {spec!r}: {exc}") from exc
    raise SpecParseError(f"bad domain spec {spec!r}")


@dataclass(frozen=True, eq=False)
class PairPreorder:
    """The preorder a measure induces on ordered pairs of a domain sample.

    ``pairs[i]`` is the ``i``-th ordered pair in row-major order over the
    sample; ``leq[i, j]`` is true when ``pairs[i] ⪯ pairs[j]``.
    """

    pairs: tuple
    values: np.ndarray = field(repr=False)
    leq: np.ndarray = field(repr=False)

    def holds(self, p: int, q: int) -> bool:
        return bool(self.leq[p, q])

    def comparisons(self) -> Iterator[tuple[int, int]]:
        """Index pairs ``(i, j)`` with ``pairs[i] ⪯ pairs[j]``, in row-major order."""
        for i, j in zip(*np.nonzero(self.leq)):
            yield int(i), int(j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairPreorder):
            return NotImplemented
        return self.leq.shape == other.leq.shape and bool(np.array_equal(self.leq, other.leq))

    def __hash__(self):
        return hash(self.leq.tobytes())

    def __len__(self) -> int:
        return len(self.pairs)


def induced_preorder(m: Measure, dom: DomainSample, tol: float = 0.0) -> PairPreorder:
    """Preorder on ``dom x dom`` with ``p ⪯ q`` iff ``m(p) <= m(q) + tol``.

    The default ``tol`` of zero gives a genuine (transitive) preorder; a
    positive tolerance relation need not be transitive.
    """
    pairs = tuple((x, y) for x in dom for y in dom)
    values = np.array([float(m(x, y)) for x, y in pairs], dtype=float)
    leq = values[:, None] <= values[None, :] + tol
    return PairPreorder(pairs, values, leq)


def as_sample(dom: DomainSample | Sequence) -> DomainSample:
    return dom if isinstance(dom, DomainSample) else DomainSample(tuple(dom))
