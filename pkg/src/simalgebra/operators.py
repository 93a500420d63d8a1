"""Transitivity operators, their axioms, and pointwise restrictiveness.

An operator ``tau`` on an interval ``I`` with null element ``e`` must satisfy
``tau(x, e) = x``, be non-decreasing in each argument, commutative and
associative. Similarity-side operators put ``e`` at ``sup I``;
dissimilarity-side operators put it at ``inf I``.

Every builtin ``apply`` works elementwise on numpy arrays as well as on
scalars, so sweeps over grids and triples can be vectorised.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainMismatchError, KindMismatchError, SpecParseError, UnknownNameError
from .measures import DEFAULT_CAP, DEFAULT_TOL, Interval, Kind, real_grid

AXIOMS = ("null_element", "monotonicity", "symmetry", "associativity")


def apply_elementwise(fn: Callable, a, b) -> np.ndarray:
    """Evaluate ``fn`` on broadcast arrays, falling back to a scalar loop.

    User-supplied callables written with ``math`` or builtin ``min``/``max``
    do not accept arrays; those are vectorised with :func:`numpy.vectorize`.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(a.shape, b.shape)
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(fn(a, b), dtype=float)
        if out.shape == shape:
            return out
    except Exception:
        pass
    return np.vectorize(lambda x, y: float(fn(float(x), float(y))), otypes=[float])(a, b)


@dataclass(frozen=True)
class TransitivityOperator:
    """A binary operator on ``domain`` with null element ``null_element``."""

    domain: Interval
    null_element: float
    apply: Callable = field(repr=False)
    name: str
    side: Kind

    def __post_init__(self):
        if not self.domain.contains(self.null_element, 1e-12):
            raise DomainMismatchError(
                f"null element {self.null_element} of {self.name!r} is outside {self.domain}"
            )
        expected = self.domain.hi if self.side is Kind.SIMILARITY else self.domain.lo
        if not math.isclose(self.null_element, expected, rel_tol=1e-12, abs_tol=1e-12):
            where = "sup" if self.side is Kind.SIMILARITY else "inf"
            raise KindMismatchError(
                f"{self.side.value}-side operator {self.name!r} needs e = {where} of {self.domain}, "
                f"got {self.null_element}"
            )

    def __call__(self, a, b):
        return self.apply(a, b)

    def on_grid(self, a, b) -> np.ndarray:
        return apply_elementwise(self.apply, a, b)


def _min(a, b):
    return np.minimum(a, b)


def _max(a, b):
    return np.maximum(a, b)


def _bounded_sum(a, b):
    return np.minimum(1.0, np.add(a, b))


def _sum(a, b):
    return np.add(a, b)


def _product_shifted(a, b):
    return np.multiply(a, b) + a + b


def _product(a, b):
    return np.multiply(a, b)


def _root_sum_squares(a, b):
    return np.hypot(a, b)


_SNAP_ULPS = 8


def _lukasiewicz(alpha: float) -> Callable:
    inv = 1.0 / alpha
    # cancellation noise in a^alpha + b^alpha - 1 is blown up by the root when alpha > 1
    snap = 0.0 if alpha == 1 else _SNAP_ULPS * np.finfo(float).eps

    def apply(a, b):
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = np.power(a, alpha) + np.power(b, alpha) - 1.0
            return np.power(np.where(inner > snap, inner, 0.0), inv)

    return apply


_UNIT = Interval.unit()
_NONNEG = Interval.from_lower(0.0)
_FROM_ONE = Interval.from_lower(1.0)

BUILTIN_NAMES = (
    "min",
    "max",
    "bounded_sum",
    "sum",
    "product_shifted",
    "product_on_1inf",
    "lukasiewicz_family",
    "root_sum_squares",
)


def builtin_operator(name: str, alpha: Optional[float] = None) -> TransitivityOperator:
    """Return a named operator with its conventional domain and null element.

    ``min`` and ``max`` are the unit-interval configurations used by the
    dual pair of the first worked example: ``min`` as a dissimilarity-side
    operator (``e = 0``) and ``max`` as a similarity-side one (``e = 1``).
    Neither satisfies the null-element axiom there; see
    :func:`check_operator_axioms`.

    Raises:
        UnknownNameError: ``name`` is not a builtin.
        ValueError: ``lukasiewicz_family`` without a non-zero ``alpha``.
    """
    if name == "min":
        return TransitivityOperator(_UNIT, 0.0, _min, "min", Kind.DISSIMILARITY)
    if name == "max":
        return TransitivityOperator(_UNIT, 1.0, _max, "max", Kind.SIMILARITY)
    if name == "bounded_sum":
        return TransitivityOperator(_UNIT, 0.0, _bounded_sum, "bounded_sum", Kind.DISSIMILARITY)
    if name == "sum":
        return TransitivityOperator(_NONNEG, 0.0, _sum, "sum", Kind.DISSIMILARITY)
    if name == "product_shifted":
        return TransitivityOperator(_NONNEG, 0.0, _product_shifted, "product_shifted", Kind.DISSIMILARITY)
    if name == "product_on_1inf":
        return TransitivityOperator(_FROM_ONE, 1.0, _product, "product_on_1inf", Kind.DISSIMILARITY)
    if name == "root_sum_squares":
        return TransitivityOperator(_NONNEG, 0.0, _root_sum_squares, "root_sum_squares", Kind.DISSIMILARITY)
    if name == "lukasiewicz_family":
        if alpha is None:
            raise ValueError("lukasiewicz_family needs a parameter alpha")
        if alpha == 0:
            raise ValueError("lukasiewicz_family is undefined for alpha = 0")
        return TransitivityOperator(
            _UNIT, 1.0, _lukasiewicz(float(alpha)), f"lukasiewicz_family({alpha:g})", Kind.SIMILARITY
        )
    raise UnknownNameError(f"unknown operator {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")


_SPEC_ALIASES = {
    "min": "min",
    "max": "max",
    "bsum": "bounded_sum",
    "sum": "sum",
    "prodshift": "product_shifted",
    "prod1inf": "product_on_1inf",
    "sqrtsq": "root_sum_squares",
}


def parse_operator(spec: str) -> TransitivityOperator:
    """Parse ``min``, ``max``, ``bsum``, ``sum``, ``prodshift``, ``prod1inf``,
    ``sqrtsq`` or ``luk:<alpha>``."""
    if spec in _SPEC_ALIASES:
        return builtin_operator(_SPEC_ALIASES[spec])
    head, _, arg = spec.partition(":")
    if head == "luk" and arg:
        try:
            alpha = float(arg)
        except ValueError as exc:
            raise SpecParseError(f"bad alpha in operator spec {spec!r}") from exc
        if alpha == 0:
            raise SpecParseError("luk:<alpha> needs alpha != 0")
        return builtin_operator("lukasiewicz_family", alpha)
    raise SpecParseError(f"unknown operator spec {spec!r}")


def default_grid(op: TransitivityOperator, points: int = 11, cap: float = DEFAULT_CAP) -> list[float]:
    """``points`` evenly spaced values over the closed part of ``op.domain``.

    An unbounded upper end is truncated at ``cap``.
    """
    lo = op.domain.lo
    hi = op.domain.hi if op.domain.bounded_above else (cap if cap > lo else lo + cap)
    grid = real_grid(lo, hi, (hi - lo) / (points - 1))[:points]
    grid[-1] = hi
    if not op.domain.lo_closed:
        grid = grid[1:]
    if not op.domain.hi_closed and op.domain.bounded_above:
        grid = grid[:-1]
    return grid


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    holds: bool
    checked: int
    counterexample: Optional[tuple] = None
    values: Optional[tuple] = None

    def describe(self) -> str:
        if self.holds:
            return f"{self.axiom}: ok ({self.checked} checked)"
        return f"{self.axiom}: FAILS at {self.counterexample} -> {self.values}"


@dataclass(frozen=True)
class AxiomReport:
    operator: str
    grid: tuple
    tolerance: float
    results: dict

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.results.values())

    @property
    def axioms_hold(self) -> bool:
        """True when the four defining axioms hold (closure excluded)."""
        return all(self.results[a].holds for a in AXIOMS)

    @property
    def failing(self) -> list[str]:
        return [name for name, r in self.results.items() if not r.holds]

    def __getitem__(self, axiom: str) -> AxiomResult:
        return self.results[axiom]

    def describe(self) -> str:
        lines = [f"operator {self.operator} on {len(self.grid)} grid points (tol {self.tolerance:g})"]
        lines += ["  " + r.describe() for r in self.results.values()]
        return "\n".join(lines)


def _first(mask: np.ndarray) -> Optional[tuple]:
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def check_operator_axioms(
    op: TransitivityOperator, grid: Sequence[float], tol: float = DEFAULT_TOL
) -> AxiomReport:
    """Check the four operator axioms, plus closure, over every grid tuple.

    The null element is appended to the grid if missing. Counterexamples are
    the first violation in lexicographic grid order.

    Raises:
        DomainMismatchError: a grid value lies outside ``op.domain``.
    """
    values = [float(v) for v in grid]
    for v in values:
        if not op.domain.contains(v, 1e-12):
            raise DomainMismatchError(f"grid value {v} is outside {op.domain} of {op.name!r}")
    if not any(math.isclose(v, op.null_element, rel_tol=0, abs_tol=1e-15) for v in values):
        values.append(float(op.null_element))
    g = np.array(values)
    n = len(g)
    results = {}

    at_null = op.on_grid(g, np.full(n, op.null_element))
    bad = np.abs(at_null - g) > tol
    i = _first(bad)
    results["null_element"] = AxiomResult(
        "null_element", i is None, n,
        None if i is None else (values[i[0]], op.null_element),
        None if i is None else (float(at_null[i]), values[i[0]]),
    )

    table = op.on_grid(g[:, None], g[None, :])

    ordered = g[:, None] <= g[None, :]
    bad = (table[:, :, None] > table[:, None, :] + tol) & ordered[None, :, :]
    i = _first(bad)
    results["monotonicity"] = AxiomResult(
        "monotonicity", i is None, int(n * ordered.sum()),
        None if i is None else tuple(values[k] for k in i),
        None if i is None else (float(table[i[0], i[1]]), float(table[i[0], i[2]])),
    )

    bad = np.abs(table - table.T) > tol
    i = _first(bad)
    results["symmetry"] = AxiomResult(
        "symmetry", i is None, n * n,
        None if i is None else tuple(values[k] for k in i),
        None if i is None else (float(table[i]), float(table[i[1], i[0]])),
    )

    right = op.on_grid(g[:, None, None], table[None, :, :])
    left = op.on_grid(table[:, :, None], g[None, None, :])
    bad = ~(np.abs(right - left) <= tol)
    i = _first(bad)
    results["associativity"] = AxiomResult(
        "associativity", i is None, n ** 3,
        None if i is None else tuple(values[k] for k in i),
        None if i is None else (float(right[i]), float(left[i])),
    )

    inside = np.vectorize(lambda v: op.domain.contains(float(v), tol), otypes=[bool])(table)
    i = _first(~inside)
    results["closure"] = AxiomResult(
        "closure", i is None, n * n,
        None if i is None else tuple(values[k] for k in i),
        None if i is None else (float(table[i]),),
    )
    return AxiomReport(op.name, tuple(values), tol, results)


class Restrictiveness(enum.Enum):
    MORE_RESTRICTIVE = "more_restrictive"
    LESS_RESTRICTIVE = "less_restrictive"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class RestrictivenessResult:
    """Outcome of comparing ``first`` against ``second``.

    ``stricter_at`` witnesses a grid pair where ``first`` is strictly more
    restrictive, ``looser_at`` one where it is strictly less restrictive.
    Each witness is ``(a, b, first(a, b), second(a, b))``.
    """

    relation: Restrictiveness
    first: str
    second: str
    stricter_at: Optional[tuple] = None
    looser_at: Optional[tuple] = None

    def __str__(self) -> str:
        return f"{self.first} vs {self.second}: {self.relation.value}"


def compare_restrictiveness(
    op1: TransitivityOperator,
    op2: TransitivityOperator,
    grid: Sequence[float],
    tol: float = DEFAULT_TOL,
) -> RestrictivenessResult:
    """Pointwise restrictiveness of ``op1`` relative to ``op2`` on ``grid``.

    For dissimilarity-side operators the pointwise smaller one is more
    restrictive (``d <= tau`` is harder to meet); for similarity-side
    operators the pointwise larger one is.

    Raises:
        DomainMismatchError: the operators live on different intervals or sides.
    """
    if op1.domain != op2.domain or op1.side is not op2.side:
        raise DomainMismatchError(
            f"cannot compare {op1.name!r} on {op1.domain} with {op2.name!r} on {op2.domain}"
        )
    values = [float(v) for v in grid]
    for v in values:
        if not op1.domain.contains(v, 1e-12):
            raise DomainMismatchError(f"grid value {v} is outside {op1.domain}")
    g = np.array(values)
    t1 = op1.on_grid(g[:, None], g[None, :])
    t2 = op2.on_grid(g[:, None], g[None, :])
    if op1.side is Kind.DISSIMILARITY:
        stricter, looser = t1 < t2 - tol, t1 > t2 + tol
    else:
        stricter, looser = t1 > t2 + tol, t1 < t2 - tol

    def witness(mask):
        i = _first(mask)
        if i is None:
            return None
        return (values[i[0]], values[i[1]], float(t1[i]), float(t2[i]))

    s, l = witness(stricter), witness(looser)
    if s and l:
        relation = Restrictiveness.INCOMPARABLE
    elif s:
        relation = Restrictiveness.MORE_RESTRICTIVE
    elif l:
        relation = Restrictiveness.LESS_RESTRICTIVE
    else:
        relation = Restrictiveness.EQUAL
    return RestrictivenessResult(relation, op1.name, op2.name, s, l)
