import itertools
from fractions import Fraction

import numpy as np
import pytest

from simalgebra import SampleTooLargeError, SpecParseError
from simalgebra.trees import (
    EMPTY,
    LEAF,
    Node,
    all_trees,
    code,
    count_trees,
    d_max_with_cap,
    encode,
    metricize,
    parse_tree,
    product_mask,
    tree_dissimilarity,
    tree_measure,
    tree_sample,
    verify_product_transitivity,
)
from simalgebra.verify import transitivity_mask, verify_strong_reflexivity, verify_symmetry


def oracle_code(text):
    """Code from the notation string, via explicit position paths.

    Positions of the complete tree of height ``h`` are listed deepest level
    first, left to right; the first listed position is the most significant bit.
    """
    occupied = set()

    def walk(s, i, path):
        if s[i] == "#":
            return i + 1
        occupied.add(path)
        i = walk(s, i + 1, path + "0")
        i = walk(s, i, path + "1")
        return i + 1

    walk(text, 0, "")
    if not occupied:
        return 0
    h = max(len(p) for p in occupied) + 1
    order = ["".join(bits) for depth in range(h - 1, -1, -1) for bits in itertools.product("01", repeat=depth)]
    return int("".join("1" if p in occupied else "0" for p in order), 2)


class TestCoding:
    @pytest.mark.parametrize(
        "text,value",
        [("#", 0), ("(##)", 1), ("((##)#)", 5), ("(#(##))", 3), ("((##)(##))", 7)],
    )
    def test_small_codes(self, text, value):
        assert code(parse_tree(text)) == value
        assert oracle_code(text) == value

    def test_binary_width(self):
        c = encode(parse_tree("((##)#)"))
        assert c.binary == "101"
        assert c.width == 3

    def test_matches_oracle_up_to_height_three(self):
        for t in all_trees(3):
            assert code(t) == oracle_code(str(t))

    def test_injective_up_to_height_four(self):
        trees = all_trees(4)
        assert len(trees) == count_trees(4) == 677
        assert len({code(t) for t in trees}) == len(trees)

    def test_counts(self):
        assert [count_trees(h) for h in range(5)] == [1, 2, 5, 26, 677]
        assert [len(all_trees(h)) for h in range(4)] == [1, 2, 5, 26]

    @pytest.mark.parametrize("text", ["", "(", "(#", "(##", "x", "(##)#", "((#)#)"])
    def test_parse_errors(self, text):
        with pytest.raises(SpecParseError):
            parse_tree(text)

    def test_round_trip_notation(self):
        for t in all_trees(3):
            assert parse_tree(str(t)) == t


class TestDissimilarity:
    def test_examples(self):
        assert tree_dissimilarity(EMPTY, EMPTY) == 1
        assert tree_dissimilarity(LEAF, LEAF) == 1
        assert tree_dissimilarity(EMPTY, LEAF) == 1
        left = Node(LEAF, EMPTY)
        assert tree_dissimilarity(left, EMPTY) == 5
        assert tree_dissimilarity(left, Node(EMPTY, LEAF)) == Fraction(5, 3)

    def test_symmetric_and_at_least_one(self):
        trees = all_trees(3)
        for a in trees:
            for b in trees:
                d = tree_dissimilarity(a, b)
                assert d >= 1
                assert d == tree_dissimilarity(b, a)

    def test_only_empty_and_root_collide(self):
        """Off-diagonal ``d = 1`` happens exactly for the empty tree against the root-only tree."""
        trees = all_trees(3)
        collisions = {(str(a), str(b)) for a in trees for b in trees if a != b and tree_dissimilarity(a, b) == 1}
        assert collisions == {("#", "(##)"), ("(##)", "#")}

    def test_strong_reflexivity_report_names_the_collision(self):
        report = verify_strong_reflexivity(tree_measure(), tree_sample(2))
        assert not report.holds
        assert {c.inputs for c in report.counterexamples} == {("#", "(##)"), ("(##)", "#")}

    def test_symmetry_report(self):
        assert verify_symmetry(tree_measure(), tree_sample(3)).holds


class TestProductTransitivity:
    @pytest.mark.parametrize("height,triples", [(1, 8), (2, 125), (3, 17576)])
    def test_holds_exhaustively(self, height, triples):
        report = verify_product_transitivity(height)
        assert report.checked == triples
        assert report.holds, report.describe()

    def test_every_case_of_the_definition_is_exercised(self):
        cases = verify_product_transitivity(2).empty_case_counts
        assert cases == {0: 64, 1: 48, 2: 12, 3: 1}

    def test_oracle_agrees(self):
        trees = all_trees(2)
        for a, c, b in itertools.product(trees, repeat=3):
            assert tree_dissimilarity(a, b) <= tree_dissimilarity(a, c) * tree_dissimilarity(c, b)

    def test_cap(self):
        with pytest.raises(SampleTooLargeError):
            verify_product_transitivity(3, cap_triples=1000)

    def test_log_space_mask_matches_product_mask(self):
        from simalgebra.operators import builtin_operator
        from simalgebra.transforms import apply_equivalence, conjugate_operator, log_map

        log = log_map()
        logged = apply_equivalence(tree_measure(), log)
        op = conjugate_operator(builtin_operator("product_on_1inf"), log)
        fast = transitivity_mask(logged, op, tree_sample(3))
        exact = np.array(product_mask(3))
        assert np.array_equal(fast, exact)


class TestMetrization:
    def test_log_metric(self):
        result = metricize(2)
        by_name = {r.property: r for r in result.reports}
        assert by_name["reflexivity"].holds
        assert by_name["symmetry"].holds
        assert by_name["transitivity"].holds
        assert by_name["transitivity"].details["operator"].startswith("log")
        assert not by_name["strong_reflexivity"].holds
        assert not result.holds

    def test_log_operator_is_addition(self):
        op = metricize(1).operator
        assert op(np.log(2.0), np.log(3.0)) == pytest.approx(np.log(6.0))


class TestDMax:
    @pytest.mark.parametrize("cap,formula,enumerated", [(1, 3, 1), (2, 15, 7), (3, 255, 127)])
    def test_formula_against_enumeration(self, cap, formula, enumerated):
        report = d_max_with_cap(cap)
        assert report.formula_value == formula
        assert report.enumerated_value == enumerated
        assert report.discrepancy
        assert str(formula) in report.describe() and str(enumerated) in report.describe()

    def test_capped_measure_codomain(self):
        assert tree_measure(2).codomain.hi == 7.0
