import json
import subprocess
import sys

import pytest

from simalgebra import FullReport
from simalgebra.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerify:
    def test_example_two_holds(self, capsys):
        code, out, _ = run(capsys, "verify", "--measure", "ex2.s", "--domain", "int:-10:10", "--op", "luk:1")
        assert code == EXIT_OK
        assert "UNATTAINED" in out and "closedness" in out

    def test_bounded_sum_triangle(self, capsys):
        code, _, _ = run(capsys, "verify", "--measure", "ex1.d1", "--domain", "real:0:1:0.1", "--op", "bsum")
        assert code == EXIT_OK

    def test_violation_exit_and_json(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--measure", "ex3.dsecond", "--domain", "int:0:2", "--op", "sqrtsq", "--format", "json"
        )
        assert code == EXIT_VIOLATION
        report = FullReport.from_json(out)
        assert report.to_dict() == json.loads(out)
        trans = report["transitivity"]
        assert trans.counterexamples[0].inputs == (0, 1, 2)
        assert trans.counterexamples[0].lhs == 4.0

    def test_documented_operator_by_default(self, capsys):
        code, out, _ = run(capsys, "verify", "--measure", "ex3.dsecond", "--domain", "int:-5:5", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["reports"][-1]["details"]["operator"] == "pow(2)[sum]"

    def test_equiv_flag(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--measure", "ex3.dprime", "--domain", "int:-3:3", "--equiv", "explog",
            "--properties", "transitivity", "--format", "json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["measure"] == "exp-1∘ex3.dprime"

    def test_transform_flag(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--measure", "ex1.d1", "--domain", "real:0:1:0.25", "--transform", "oneminus:2",
            "--format", "json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["kind"] == "similarity"

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--measure", "ex1.d1", "--domain", "real:0:1"],
            ["verify", "--measure", "nope"],
            ["verify", "--measure", "ex1.d1", "--op", "luk:x"],
            ["verify", "--measure", "ex1.d1", "--domain", "trees:2"],
            ["verify", "--measure", "ex1.d1", "--properties", "colour"],
            ["verify", "--measure", "ex1.d1", "--transform", "explog"],
            ["verify", "--measure", "ex2.s", "--domain", "int:-300:300", "--cap-triples", "1000"],
            ["verify"],
            [],
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_USAGE
        assert err


class TestDualize:
    def test_lukasiewicz_transfer_and_round_trip(self, capsys):
        code, out, _ = run(
            capsys, "dualize", "--measure", "ex1.d1", "--transform", "oneminus:1", "--roundtrip", "--format", "json",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["roundtrip_max_deviation"] == 0.0
        assert payload["operator"]["null_element"] == 1.0
        grid = payload["operator"]["grid"]
        for a, row in zip(grid, payload["operator"]["table"]):
            for b, v in zip(grid, row):
                assert v == max(a + b - 1, 0)

    def test_needs_transform(self, capsys):
        assert run(capsys, "dualize", "--measure", "ex1.d1")[0] == EXIT_USAGE


class TestTree:
    def test_code(self, capsys):
        code, out, _ = run(capsys, "tree", "code", "((##)#)")
        assert (code, out.strip()) == (EXIT_OK, "5 101")

    def test_dissim(self, capsys):
        assert run(capsys, "tree", "dissim", "#", "#")[1].strip() == "1"
        assert run(capsys, "tree", "dissim", "((##)#)", "(#(##))")[1].strip() == "5/3"

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "tree", "verify", "--max-height", "2", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["checked"] == 125

    def test_metricize_reports_strong_reflexivity_failure(self, capsys):
        code, out, _ = run(capsys, "tree", "metricize", "--max-height", "2", "--format", "json")
        assert code == EXIT_VIOLATION
        reports = {r["property"]: r for r in json.loads(out)["reports"]}
        assert reports["transitivity"]["holds"]
        assert not reports["strong_reflexivity"]["holds"]

    def test_dmax(self, capsys):
        code, out, _ = run(capsys, "tree", "dmax", "--max-height", "2", "--format", "json")
        payload = json.loads(out)
        assert (payload["formula_value"], payload["enumerated_value"], payload["discrepancy"]) == (15, 7, True)

    @pytest.mark.parametrize("argv", [["tree", "code", "(#"], ["tree", "verify", "--max-height", "0"], ["tree"]])
    def test_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == EXIT_USAGE


class TestOperatorCommands:
    def test_axioms_failure_names_axiom(self, capsys):
        code, out, _ = run(capsys, "axioms", "--op", "min", "--format", "json")
        assert code == EXIT_VIOLATION
        assert json.loads(out)["failing"] == ["null_element"]

    def test_axioms_pass(self, capsys):
        assert run(capsys, "axioms", "--op", "sum")[0] == EXIT_OK

    def test_compare(self, capsys):
        code, out, _ = run(capsys, "compare", "--op", "sum", "--other", "prodshift")
        assert code == EXIT_OK
        assert "more_restrictive" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "simalgebra", "tree", "code", "((##)(##))"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "7 111"
