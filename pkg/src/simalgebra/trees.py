"""Structural binary trees, their natural-number codes, and a tree dissimilarity.

A tree of height ``h`` is coded on ``2**h - 1`` bits, one per position of
the complete binary tree of that height. Positions are read deepest level
first and left to right inside a level, most significant bit first, so the
root is the least significant bit and left nodes outrank right ones.

The dissimilarity compares codes by ratio, is product-transitive on
``[1, inf)``, and becomes a metric after taking logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .errors import SampleTooLargeError, SpecParseError
from .measures import DEFAULT_TOL, DomainSample, Interval, Kind, Measure, make_measure

DEFAULT_TRIPLE_CAP = 20_000_000


@dataclass(frozen=True)
class Empty:
    """The empty tree."""

    @property
    def height(self) -> int:
        return 0

    def __str__(self) -> str:
        return "#"


@dataclass(frozen=True)
class Node:
    left: "BinaryTree"
    right: "BinaryTree"
    height: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "height", 1 + max(self.left.height, self.right.height))

    def __str__(self) -> str:
        return f"({self.left}{self.right})"


BinaryTree = Union[Empty, Node]
EMPTY = Empty()
LEAF = Node(EMPTY, EMPTY)


def parse_tree(text: str) -> BinaryTree:
    """Parse ``#`` (empty) and ``(<left><right>)`` (node) notation.

    Raises:
        SpecParseError: malformed or trailing input.
    """
    pos = 0

    def parse() -> BinaryTree:
        nonlocal pos
        if pos >= len(text):
            raise SpecParseError(f"unexpected end of tree notation {text!r}")
        ch = text[pos]
        if ch == "#":
            pos += 1
            return EMPTY
        if ch == "(":
            pos += 1
            left = parse()
            right = parse()
            if pos >= len(text) or text[pos] != ")":
                raise SpecParseError(f"expected ')' at offset {pos} in {text!r}")
            pos += 1
            return Node(left, right)
        raise SpecParseError(f"unexpected {ch!r} at offset {pos} in {text!r}")

    tree = parse()
    if pos != len(text):
        raise SpecParseError(f"trailing input at offset {pos} in {text!r}")
    return tree


@dataclass(frozen=True)
class TreeCode:
    value: int
    height_used: int

    @property
    def width(self) -> int:
        return 2 ** self.height_used - 1

    @property
    def binary(self) -> str:
        """The code as a zero-padded bit string of length ``2**h - 1``."""
        return format(self.value, f"0{self.width}b") if self.width else ""


def _node_at(tree: BinaryTree, depth: int, index: int) -> bool:
    """Whether the position ``index`` (left to right) at ``depth`` is occupied."""
    for level in range(depth - 1, -1, -1):
        if isinstance(tree, Empty):
            return False
        tree = tree.right if (index >> level) & 1 else tree.left
    return isinstance(tree, Node)


def encode(tree: BinaryTree) -> TreeCode:
    h = tree.height
    value = 0
    for depth in range(h - 1, -1, -1):
        for index in range(2 ** depth):
            value = (value << 1) | _node_at(tree, depth, index)
    return TreeCode(value, h)


@lru_cache(maxsize=None)
def code(tree: BinaryTree) -> int:
    return encode(tree).value


def tree_dissimilarity(a: BinaryTree, b: BinaryTree) -> Fraction:
    """Ratio dissimilarity of two trees; always ``>= 1``, exact."""
    a_empty, b_empty = isinstance(a, Empty), isinstance(b, Empty)
    if a_empty and b_empty:
        return Fraction(1)
    if b_empty:
        return Fraction(code(a))
    if a_empty:
        return Fraction(code(b))
    da, db = code(a), code(b)
    return max(Fraction(da, db), Fraction(db, da))


@lru_cache(maxsize=None)
def _trees_up_to(height: int) -> tuple:
    if height == 0:
        return (EMPTY,)
    smaller = _trees_up_to(height - 1)
    return (EMPTY,) + tuple(Node(l, r) for l in smaller for r in smaller)


def all_trees(max_height: int) -> list:
    """Every structural binary tree of height ``<= max_height``, ordered by code."""
    if max_height < 0:
        raise ValueError("max_height must be non-negative")
    return sorted(_trees_up_to(max_height), key=code)


def count_trees(max_height: int) -> int:
    """``a(0) = 1``, ``a(h) = a(h-1)**2 + 1``."""
    n = 1
    for _ in range(max_height):
        n = n * n + 1
    return n


def tree_sample(max_height: int) -> DomainSample:
    return DomainSample(all_trees(max_height), label=f"trees:{max_height}")


def enumerated_d_max(max_height: int) -> tuple[Fraction, tuple]:
    """Largest dissimilarity over all tree pairs of height ``<= max_height``."""
    trees = all_trees(max_height)
    best, pair = Fraction(0), (EMPTY, EMPTY)
    for a in trees:
        for b in trees:
            v = tree_dissimilarity(a, b)
            if v > best:
                best, pair = v, (a, b)
    return best, pair


def tree_measure(max_height: Optional[int] = None) -> Measure:
    """The tree dissimilarity as a :class:`Measure`.

    Without a height cap the codomain is ``[1, inf)``. With one it is
    ``[1, d_max]`` where ``d_max`` is the enumerated maximum.
    """
    if max_height is None:
        codomain = Interval.from_lower(1.0)
        name = "ex4.d"
    else:
        top, _ = enumerated_d_max(max_height)
        codomain = Interval(1.0, float(top), True, True) if top > 1 else Interval.from_lower(1.0)
        name = f"ex4.d[h<={max_height}]"
    return make_measure(Kind.DISSIMILARITY, codomain, tree_dissimilarity, name)


@dataclass(frozen=True)
class DMaxReport:
    height_cap: int
    formula_value: int
    enumerated_value: Fraction
    attained_by: tuple
    discrepancy: bool

    def describe(self) -> str:
        a, b = self.attained_by
        flag = "DISCREPANCY" if self.discrepancy else "agree"
        return (
            f"H={self.height_cap}: closed-form d_max = {self.formula_value}, "
            f"enumerated d_max = {self.enumerated_value} at ({a}, {b}) [{flag}]"
        )


def d_max_with_cap(height_cap: int) -> DMaxReport:
    """Closed form ``sum_{i=0}^{2^H-1} 2^i = 2**(2**H) - 1`` next to the enumerated maximum."""
    if height_cap < 1:
        raise ValueError("height cap must be at least 1")
    formula = sum(2 ** i for i in range(2 ** height_cap))
    top, pair = enumerated_d_max(height_cap)
    return DMaxReport(height_cap, formula, top, pair, top != formula)


@dataclass
class ProductTransitivityReport:
    max_height: int
    tree_count: int
    checked: int
    violations: list
    empty_case_counts: dict

    @property
    def holds(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        status = "holds" if self.holds else f"FAILS ({len(self.violations)} violations)"
        cases = ", ".join(f"{k} empty: {v}" for k, v in sorted(self.empty_case_counts.items()))
        return (
            f"product transitivity over {self.tree_count} trees (height <= {self.max_height}), "
            f"{self.checked} triples: {status}; {cases}"
        )


def _triples_guard(n: int, cap: int) -> None:
    if n ** 3 > cap:
        raise SampleTooLargeError(f"{n} trees give {n ** 3} triples, above the cap of {cap}")


def verify_product_transitivity(
    max_height: int, cap_triples: int = DEFAULT_TRIPLE_CAP, max_violations: int = 10
) -> ProductTransitivityReport:
    """Check ``d(A, B) <= d(A, C) * d(C, B)`` exactly over every ordered triple.

    Triples are also tallied by how many of ``A, B, C`` are empty so every
    case of the piecewise definition is seen to be exercised.

    Raises:
        SampleTooLargeError: the triple count exceeds ``cap_triples``.
    """
    if max_height < 1:
        raise ValueError("max_height must be at least 1")
    trees = all_trees(max_height)
    n = len(trees)
    _triples_guard(n, cap_triples)
    d = [[tree_dissimilarity(a, b) for b in trees] for a in trees]
    empty = [isinstance(t, Empty) for t in trees]
    violations = []
    cases = {0: 0, 1: 0, 2: 0, 3: 0}
    for i in range(n):
        for k in range(n):
            dik = d[i][k]
            for j in range(n):
                cases[empty[i] + empty[j] + empty[k]] += 1
                if d[i][j] > dik * d[k][j] and len(violations) < max_violations:
                    violations.append((trees[i], trees[k], trees[j], d[i][j], dik * d[k][j]))
    return ProductTransitivityReport(max_height, n, n ** 3, violations, cases)


def product_mask(max_height: int) -> list:
    """Exact pass/fail of the product inequality for every ``(A, C, B)`` triple."""
    trees = all_trees(max_height)
    d = [[tree_dissimilarity(a, b) for b in trees] for a in trees]
    n = len(trees)
    return [[[d[i][j] <= d[i][k] * d[k][j] for j in range(n)] for k in range(n)] for i in range(n)]


@dataclass
class Metrization:
    """Log-space tree dissimilarity, its conjugated operator and the checks on it."""

    measure: Measure
    operator: object
    reports: list

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.reports)


def metricize(max_height: int, tol: float = DEFAULT_TOL) -> Metrization:
    """Apply ``log`` to the tree dissimilarity and verify the result is a metric.

    The operator is obtained by conjugating the product operator through
    ``log``, which turns it into addition. Reflexivity, strong reflexivity,
    symmetry and the resulting triangle inequality are checked over every
    tree of height ``<= max_height``. Strong reflexivity fails on the pair
    (empty tree, root-only tree), both of which sit at distance zero.
    """
    from .operators import builtin_operator
    from .transforms import apply_equivalence, conjugate_operator, log_map
    from .verify import verify_reflexivity, verify_strong_reflexivity, verify_symmetry, verify_transitivity

    if max_height < 1:
        raise ValueError("max_height must be at least 1")
    log = log_map()
    base = tree_measure()
    logged = apply_equivalence(base, log).renamed("log∘ex4.d")
    op = conjugate_operator(builtin_operator("product_on_1inf"), log)
    dom = tree_sample(max_height)
    reports = [
        verify_reflexivity(logged, dom, tol),
        verify_strong_reflexivity(logged, dom, tol),
        verify_symmetry(logged, dom, tol),
        verify_transitivity(logged, op, dom, tol),
    ]
    return Metrization(logged, op, reports)
