"""Ready-made measures from the worked examples, with their documented operators.

=============  ===============================================  ==========
name           measure                                          elements
=============  ===============================================  ==========
ex1.d1         |x - y| on [0, 1]                                reals
ex1.d2         min(x, y) on [0, 1]                              reals
ex1.s1:alpha   (1 - |x - y|)^(1/alpha)                          reals
ex1.s2:alpha   max((1 - x)^(1/alpha), (1 - y)^(1/alpha))        reals
ex2.s          1 - |x - y| / (|x - y| + 1)                      integers
ex3.d          e^|x - y| - 1                                    reals
ex3.dprime     |x - y|                                          reals
ex3.dsecond    (x - y)^2                                        reals
ex4.d          code-ratio tree dissimilarity                    trees
=============  ===============================================  ==========
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import SpecParseError, UnknownNameError
from .measures import Interval, Kind, Measure, make_measure
from .operators import TransitivityOperator, builtin_operator
from .transforms import (
    DualTriple,
    ScalarMap,
    conjugate_operator,
    dualize_measure,
    explog_map,
    log1p_map,
    one_minus_map,
    power_map,
)


@dataclass(frozen=True)
class CatalogEntry:
    measure: Measure
    documented_operator: Optional[TransitivityOperator]
    provenance: str
    elements: str = "real"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        op = self.documented_operator
        if op is not None and not op.domain.contains_interval(self.measure.codomain):
            raise ValueError(
                f"operator {op.name!r} on {op.domain} does not cover the codomain {self.measure.codomain}"
            )


def _check_alpha(alpha: float, extended: bool) -> float:
    if alpha == 0:
        raise ValueError("alpha must be non-zero")
    if alpha < 0 and not extended:
        raise ValueError("negative alpha is only supported with extended=True")
    return float(alpha)


def example1_d1() -> CatalogEntry:
    m = make_measure(Kind.DISSIMILARITY, Interval.unit(), lambda x, y: abs(x - y), "ex1.d1")
    return CatalogEntry(m, builtin_operator("bounded_sum"), "ex1: absolute difference on the unit interval")


def example1_d2() -> CatalogEntry:
    m = make_measure(Kind.DISSIMILARITY, Interval.unit(), lambda x, y: min(x, y), "ex1.d2")
    return CatalogEntry(
        m, builtin_operator("min"), "ex1: minimum on the unit interval",
        metadata={"reflexive": False},
    )


def example1_s1(alpha: float = 1.0, extended: bool = False) -> CatalogEntry:
    """Closed form of the similarity dual to ``ex1.d1``."""
    alpha = _check_alpha(alpha, extended)
    inv = 1.0 / alpha
    m = make_measure(
        Kind.SIMILARITY, Interval.unit(), lambda x, y: (1.0 - abs(x - y)) ** inv, f"ex1.s1:{alpha:g}"
    )
    return CatalogEntry(m, builtin_operator("lukasiewicz_family", alpha), "ex1: dual of |x - y|")


def example1_s2(alpha: float = 1.0, extended: bool = False) -> CatalogEntry:
    """Closed form of the similarity dual to ``ex1.d2``."""
    alpha = _check_alpha(alpha, extended)
    inv = 1.0 / alpha
    m = make_measure(
        Kind.SIMILARITY, Interval.unit(),
        lambda x, y: max((1.0 - x) ** inv, (1.0 - y) ** inv), f"ex1.s2:{alpha:g}",
    )
    return CatalogEntry(m, builtin_operator("max"), "ex1: dual of min(x, y)")


def example1_duals(alpha: float = 1.0, extended: bool = False) -> tuple[DualTriple, DualTriple]:
    """Dualise ``ex1.d1`` and ``ex1.d2`` through ``z -> (1 - z)^(1/alpha)``.

    Each triple carries the transferred operator on the similarity side.
    """
    alpha = _check_alpha(alpha, extended)
    f = one_minus_map(alpha, extended=extended)
    d1, d2 = example1_d1(), example1_d2()
    t1 = dualize_measure(d1.measure, f, d1.documented_operator)
    t2 = dualize_measure(d2.measure, f, d2.documented_operator)
    return t1, t2


def _ex2_eval(x, y):
    t = abs(x - y)
    return 1 - t / (t + 1)


def example2_similarity() -> CatalogEntry:
    m = make_measure(Kind.SIMILARITY, Interval(0.0, 1.0, False, True), _ex2_eval, "ex2.s")
    return CatalogEntry(
        m,
        builtin_operator("lukasiewicz_family", 1.0),
        "ex2: integer similarity from the subadditive ratio map",
        elements="int",
        metadata={
            "strongly_reflexive": True,
            "symmetric": True,
            "lower_bounded": True,
            "lower_closed": False,
            "complement_function": False,
        },
    )


@dataclass(frozen=True)
class ChainLink:
    source: str
    target: str
    map: ScalarMap


@dataclass(frozen=True)
class EquivalenceChain:
    entries: tuple
    links: tuple

    def __getitem__(self, name: str) -> CatalogEntry:
        for e in self.entries:
            if e.measure.name == name:
                return e
        raise KeyError(name)


def example3_chain() -> EquivalenceChain:
    """``e^|x-y| - 1``, ``|x-y|`` and ``(x-y)^2`` with the maps linking them.

    The operator of ``ex3.dsecond`` is derived by conjugating addition with
    ``z -> z^2``, which gives ``(sqrt(a) + sqrt(b))^2``.
    """
    half = Interval.from_lower(0.0)
    d = make_measure(Kind.DISSIMILARITY, half, lambda x, y: float(np.expm1(abs(x - y))), "ex3.d")
    dprime = make_measure(Kind.DISSIMILARITY, half, lambda x, y: abs(x - y), "ex3.dprime")
    dsecond = make_measure(Kind.DISSIMILARITY, half, lambda x, y: (x - y) ** 2, "ex3.dsecond")
    add = builtin_operator("sum")
    square = power_map(2.0)
    entries = (
        CatalogEntry(d, builtin_operator("product_shifted"), "ex3: exponential dissimilarity"),
        CatalogEntry(dprime, add, "ex3: standard metric on the reals"),
        CatalogEntry(dsecond, conjugate_operator(add, square), "ex3: squared difference"),
    )
    links = (
        ChainLink("ex3.dprime", "ex3.d", explog_map()),
        ChainLink("ex3.d", "ex3.dprime", log1p_map()),
        ChainLink("ex3.dprime", "ex3.dsecond", square),
    )
    return EquivalenceChain(entries, links)


def example4_tree() -> CatalogEntry:
    from .trees import tree_measure

    return CatalogEntry(
        tree_measure(), builtin_operator("product_on_1inf"), "ex4: structural tree dissimilarity",
        elements="tree",
    )


CATALOG_NAMES = (
    "ex1.d1", "ex1.d2", "ex1.s1:<alpha>", "ex1.s2:<alpha>", "ex2.s", "ex3.d", "ex3.dprime", "ex3.dsecond", "ex4.d",
)


def lookup(spec: str) -> CatalogEntry:
    """Resolve a catalog name such as ``ex1.d1`` or ``ex1.s1:2``.

    Raises:
        UnknownNameError: no such entry.
        SpecParseError: a malformed alpha parameter.
    """
    name, _, arg = spec.partition(":")
    if name in ("ex1.s1", "ex1.s2"):
        try:
            alpha = float(arg) if arg else 1.0
        except ValueError as exc:
            raise SpecParseError(f"bad alpha in {spec!r}") from exc
        try:
            return example1_s1(alpha) if name == "ex1.s1" else example1_s2(alpha)
        except ValueError as exc:
            raise SpecParseError(str(exc)) from exc
    if arg:
        raise SpecParseError(f"{name!r} takes no parameter")
    if name == "ex1.d1":
        return example1_d1()
    if name == "ex1.d2":
        return example1_d2()
    if name == "ex2.s":
        return example2_similarity()
    if name in ("ex3.d", "ex3.dprime", "ex3.dsecond"):
        return example3_chain()[name]
    if name == "ex4.d":
        return example4_tree()
    raise UnknownNameError(f"unknown catalog measure {spec!r}; known: {', '.join(CATALOG_NAMES)}")
