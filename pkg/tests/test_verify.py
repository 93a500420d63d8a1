import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oracle_transitivity_failures
from simalgebra import (
    DomainMismatchError,
    FullReport,
    Interval,
    Kind,
    KindMismatchError,
    SampleTooLargeError,
    builtin_operator,
    compute_complements,
    full_report,
    make_measure,
    parse_domain,
    verify_boundedness_and_closedness,
    verify_equivalence,
    verify_reflexivity,
    verify_strong_reflexivity,
    verify_symmetry,
    verify_transitivity,
)
from simalgebra.catalog import example2_similarity, example3_chain
from simalgebra.verify import transitivity_mask

UNIT = Interval.unit()
HALF = Interval.from_lower(0.0)


def dist(codomain=HALF):
    return make_measure(Kind.DISSIMILARITY, codomain, lambda x, y: abs(x - y), "abs")


class TestSimpleProperties:
    def test_reflexivity(self):
        assert verify_reflexivity(dist(), [0, 1, 2]).holds
        report = verify_reflexivity(make_measure(Kind.DISSIMILARITY, UNIT, min, "min"), [0.0, 0.5])
        assert not report.holds
        assert report.counterexamples[0].inputs == (0.5, 0.5)

    def test_strong_reflexivity(self):
        assert verify_strong_reflexivity(dist(), [0, 1, 2]).holds
        flat = make_measure(Kind.DISSIMILARITY, HALF, lambda x, y: abs(x - y) // 2, "halved")
        report = verify_strong_reflexivity(flat, [0, 1, 2])
        assert not report.holds
        assert report.counterexamples[0].inputs == (0, 1)

    def test_symmetry(self):
        assert verify_symmetry(dist(), range(5)).holds
        skew = make_measure(Kind.DISSIMILARITY, HALF, lambda x, y: max(x - y, 0), "skew")
        report = verify_symmetry(skew, [0, 1])
        assert not report.holds
        assert report.counterexamples[0].inputs == (0, 1)

    def test_boundedness_and_closedness_on_unit(self):
        bounded, closed = verify_boundedness_and_closedness(dist(UNIT), [0.0, 0.5, 1.0])
        assert bounded.holds
        assert closed.holds and closed.semidecidable
        assert closed.details["attained_by"] == [0.0, 1.0]

    def test_unattained_lower_bound(self):
        e = example2_similarity()
        bounded, closed = verify_boundedness_and_closedness(e.measure, parse_domain("int:-5:5"))
        assert bounded.holds
        assert not closed.holds and closed.semidecidable
        assert closed.details["closest_value"] == pytest.approx(1 / 11)

    def test_out_of_range_values(self):
        liar = make_measure(Kind.DISSIMILARITY, UNIT, lambda x, y: abs(x - y), "liar")
        bounded, _ = verify_boundedness_and_closedness(liar, [0, 2])
        assert not bounded.holds


class TestComplements:
    def test_unit_interval_complements(self):
        cmap, report = compute_complements(dist(UNIT), [0.0, 0.5, 1.0])
        assert cmap.sets == ((1.0,), (), (0.0,))
        assert not report.holds and report.semidecidable

    def test_two_points_are_unitary(self):
        cmap, report = compute_complements(dist(UNIT), [0.0, 1.0])
        assert cmap.unitary
        assert report.holds
        assert report.details["self_excluded"]

    def test_unbounded_codomain_has_no_complements(self):
        cmap, _ = compute_complements(dist(), [0, 1, 2])
        assert cmap.empty


class TestTransitivity:
    def test_triangle_inequality(self):
        report = verify_transitivity(dist(), builtin_operator("sum"), range(-3, 4))
        assert report.holds
        assert report.checked_count == 343

    def test_squared_difference_against_root_sum_squares(self):
        sq = example3_chain()["ex3.dsecond"].measure
        report = verify_transitivity(sq, builtin_operator("root_sum_squares"), [0, 1, 2])
        assert not report.holds
        c = report.counterexamples[0]
        assert c.inputs == (0, 1, 2)
        assert (c.lhs, c.rhs) == (4.0, pytest.approx(math.sqrt(2)))

    def test_side_mismatch(self):
        with pytest.raises(KindMismatchError):
            verify_transitivity(dist(UNIT), builtin_operator("max"), [0.0, 1.0])

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatchError):
            verify_transitivity(dist(), builtin_operator("bounded_sum"), [0.0, 1.0])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(0, 6), min_size=1, max_size=6, unique=True),
           st.sampled_from(["min", "bounded_sum"]))
    def test_counterexamples_match_the_oracle(self, xs, opname):
        pts = [x / 6 for x in xs]
        m = make_measure(Kind.DISSIMILARITY, UNIT, lambda x, y: abs(x - y) ** 2, "sq")
        op = builtin_operator(opname)
        report = verify_transitivity(m, op, pts)
        oracle = oracle_transitivity_failures(m, op, pts)
        assert report.holds == (not oracle)
        assert [c.inputs for c in report.counterexamples] == [tuple(t) for t in oracle[:10]]
        for c in report.counterexamples:
            x, z, y = c.inputs
            assert m(x, y) > op(m(x, z), m(z, y)) + 1e-9

    def test_failures_persist_on_larger_grids(self):
        sq = example3_chain()["ex3.dsecond"].measure
        op = builtin_operator("root_sum_squares")
        small = verify_transitivity(sq, op, range(0, 3))
        large = verify_transitivity(sq, op, range(-3, 6))
        assert not small.holds and not large.holds

    def test_mask_agrees_with_report(self):
        m = dist(UNIT)
        op = builtin_operator("min")
        dom = [0.0, 0.5, 1.0]
        mask = transitivity_mask(m, op, dom)
        assert mask.sum() == 27 - len(oracle_transitivity_failures(m, op, dom))


class TestEquivalence:
    def test_chain(self):
        chain = example3_chain()
        dom = parse_domain("real:-2:2:0.5")
        assert verify_equivalence(chain["ex3.d"].measure, chain["ex3.dsecond"].measure, dom).holds

    def test_non_equivalent(self):
        bent = make_measure(Kind.DISSIMILARITY, HALF, lambda x, y: abs(x * x - y * y), "bent")
        report = verify_equivalence(dist(), bent, [0, 1, 2])
        assert not report.holds
        assert len(report.counterexamples[0].inputs) == 4

    def test_cap(self):
        with pytest.raises(SampleTooLargeError):
            verify_equivalence(dist(), dist(), range(30))

    def test_kind_mismatch(self):
        s = make_measure(Kind.SIMILARITY, UNIT, lambda x, y: 1 - abs(x - y))
        with pytest.raises(KindMismatchError):
            verify_equivalence(dist(UNIT), s, [0.0, 1.0])


class TestFullReport:
    def test_example_two(self):
        e = example2_similarity()
        report = full_report(e.measure, parse_domain("int:-4:4"), e.documented_operator)
        assert report.holds
        assert [r.property for r in report.reports] == [
            "reflexivity", "strong_reflexivity", "symmetry", "boundedness", "closedness", "complementarity",
            "transitivity",
        ]

    def test_subset_and_unknown(self):
        report = full_report(dist(), [0, 1], properties=["symmetry"])
        assert [r.property for r in report.reports] == ["symmetry"]
        with pytest.raises(ValueError):
            full_report(dist(), [0, 1], properties=["colour"])

    def test_json_round_trip(self):
        sq = example3_chain()["ex3.dsecond"].measure
        report = full_report(sq, parse_domain("int:0:2"), builtin_operator("root_sum_squares"))
        text = report.to_json()
        again = FullReport.from_json(text)
        assert again.to_dict() == report.to_dict() == json.loads(text)
        assert not again.holds

    def test_json_round_trip_with_trees(self):
        from simalgebra.trees import tree_measure, tree_sample

        report = full_report(tree_measure(), tree_sample(1), builtin_operator("product_on_1inf"))
        assert FullReport.from_json(report.to_json()).to_dict() == report.to_dict()

    def test_describe(self):
        text = full_report(dist(), [0, 1]).describe()
        assert "PASS" in text and "UNATTAINED" in text
