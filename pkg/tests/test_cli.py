import hashlib
import json
import subprocess
import sys

import pytest

from qwlsmith import fixtures
from qwlsmith.cli import (
    EXIT_INTERNAL,
    EXIT_NOT_EQUIVALENT,
    EXIT_OK,
    EXIT_OUT_OF_SCOPE,
    EXIT_PARSE,
    main,
)

GOLDEN_EXIT = {"Equivalent": EXIT_OK, "NotEquivalent": EXIT_NOT_EQUIVALENT, "OutOfScope": EXIT_OUT_OF_SCOPE}


META = {n: json.loads(fixtures.path(n).read_text()).get("meta", {}) for n in fixtures.names()}
GOLDEN = [n for n, m in META.items() if "expected_verdict" in m]


def fx(name):
    return str(fixtures.path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def structured(capsys, *argv):
    code, out, _ = run(capsys, "--format", "structured", *argv)
    return code, json.loads(out)


class TestAnalyze:
    def test_worked(self, capsys):
        code, rep = structured(capsys, "analyze", fx("worked"))
        assert code == EXIT_OK
        orders = rep["results"]["orders"]
        assert [o["d"] for o in orders[:2]] == ["1", "x1*x2 - x1 - x2^2 + x2"]
        assert all(o["unit_ideal"] for o in orders)
        assert rep["results"]["rank"] == 3

    def test_identity(self, capsys):
        _, rep = structured(capsys, "analyze", fx("identity"))
        assert all(o["d"] == "1" for o in rep["results"]["orders"])

    def test_diag(self, capsys):
        _, rep = structured(capsys, "analyze", fx("diag_x1_x2"))
        first = rep["results"]["orders"][0]
        assert not first["unit_ideal"] and first["reduced_minors"] == ["x1", "x2"]

    def test_max_k(self, capsys):
        _, rep = structured(capsys, "analyze", fx("worked"), "--max-k", "1")
        assert len(rep["results"]["orders"]) == 1

    def test_text(self, capsys):
        code, out, _ = run(capsys, "analyze", fx("identity"))
        assert code == EXIT_OK and "rank: 3" in out


class TestDecide:
    def test_worked(self, capsys):
        code, rep = structured(capsys, "decide", fx("worked"))
        assert code == EXIT_OK
        res = rep["results"]
        assert res["verdict"] == "Equivalent"
        assert res["smith_diagonal"] == ["1", "x1*x2 - x1 - x2^2 + x2",
                                         "x1*x2^2 - 2*x1*x2 + x1 - x2^3 + 2*x2^2 - x2"]
        assert res["qwl_shape"] == {"f1": "x2", "p": 2, "f2": "1", "q": 3, "unit": "1"}

    def test_negative(self, capsys):
        code, rep = structured(capsys, "decide", fx("diag_x1_x2"))
        assert code == EXIT_NOT_EQUIVALENT and rep["results"]["verdict"] == "NotEquivalent"

    def test_out_of_scope(self, capsys):
        code, rep = structured(capsys, "decide", fx("nonqwl"))
        assert code == EXIT_OUT_OF_SCOPE and rep["results"]["qwl_shape"] is None

    def test_zero_matrix(self, capsys):
        code, _, err = run(capsys, "decide", fx("zero"))
        assert code == EXIT_PARSE and "zero matrix" in err

    @pytest.mark.parametrize("name", GOLDEN)
    def test_golden(self, capsys, name):
        meta = META[name]
        code, rep = structured(capsys, "decide", fx(name))
        assert rep["results"]["verdict"] == meta["expected_verdict"]
        assert code == GOLDEN_EXIT[meta["expected_verdict"]]

    def test_deterministic(self, capsys):
        reports = []
        for _ in range(2):
            _, rep = structured(capsys, "decide", fx("worked"))
            rep.pop("timings")
            reports.append(json.dumps(rep, sort_keys=True))
        assert reports[0] == reports[1]

    def test_digest(self, capsys):
        _, rep = structured(capsys, "decide", fx("identity"))
        assert rep["input_sha256"] == hashlib.sha256(fixtures.path("identity").read_bytes()).hexdigest()

    def test_order_before_subcommand(self, capsys):
        _, rep = structured(capsys, "--order", "grevlex", "decide", fx("worked"))
        assert rep["command"][2:4] == ["--order", "grevlex"]
        _, rep2 = structured(capsys, "decide", fx("worked"), "--order", "grevlex")
        assert rep["results"]["verdict"] == rep2["results"]["verdict"] == "Equivalent"

    def test_global_flag_kept(self, capsys):
        # a flag given before the subcommand survives subparser defaults
        code, out, _ = run(capsys, "--format", "structured", "decide", fx("identity"))
        assert json.loads(out)["results"]["verdict"] == "Equivalent"


class TestSmith:
    def test_document(self, capsys):
        code, out, _ = run(capsys, "smith", fx("worked"))
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["rows"][1][1] == "x1*x2 - x1 - x2^2 + x2"
        assert doc["rows"][0][1] == "0"

    def test_not_equivalent(self, capsys):
        code, out, _ = run(capsys, "smith", fx("diag_x1_x2"))
        assert code == EXIT_NOT_EQUIVALENT and "NotEquivalent" in out


class TestVerify:
    def args(self, u="worked_witness_U", d="worked_witness_D", v="worked_witness_V"):
        return ["verify", fx("worked"), "--u", fx(u), "--d", fx(d), "--v", fx(v)]

    def test_valid(self, capsys):
        code, out, _ = run(capsys, *self.args())
        assert code == EXIT_OK and "witness_valid: True" in out

    def test_wrong_factor(self, capsys):
        code, _, _ = run(capsys, *self.args(v="worked_U1"))
        assert code == EXIT_NOT_EQUIVALENT

    def test_shape_mismatch(self, capsys):
        code, _, err = run(capsys, *self.args(d="diag_x1_x2"))
        assert code == EXIT_PARSE and "error" in err


class TestPolynomialCommands:
    def test_gb_unit(self, capsys):
        assert run(capsys, "gb", "{x1, 1-x1}")[:2] == (EXIT_OK, "{1}\n")

    def test_gb_lex(self, capsys):
        code, out, _ = run(capsys, "gb", "{x1*x2-1, x1^2-x2}", "--order", "lex")
        assert out.strip() == "{x1 - x2^2, x2^3 - 1}"

    def test_gb_file(self, capsys, tmp_path):
        path = tmp_path / "ideal.txt"
        path.write_text("x1*x2 - 1\nx1^2 - x2\n")
        assert run(capsys, "gb", str(path))[1].strip() == "{x1 - x2^2, x2^3 - 1}"

    def test_gb_zero(self, capsys):
        assert run(capsys, "gb", "{0}")[1].strip() == "{0}"

    def test_gcd(self, capsys):
        assert run(capsys, "gcd", "(x1-x2)*(x2-1)", "(x2-1)^2")[:2] == (EXIT_OK, "x2 - 1\n")

    def test_gcd_vars(self, capsys):
        code, out, _ = run(capsys, "gcd", "a*b", "b^2", "--vars", "b,a")
        assert out.strip() == "b"

    def test_gcd_both_zero(self, capsys):
        assert run(capsys, "gcd", "0", "0")[0] == EXIT_PARSE


class TestErrors:
    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"variables": ["x"], "rows": [["x +"]]}')
        code, _, err = run(capsys, "decide", str(bad))
        assert code == EXIT_PARSE and "rows[0][0]" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "decide", str(tmp_path / "missing.json"))[0] == EXIT_PARSE

    def test_bad_flag(self, capsys):
        assert run(capsys, "decide")[0] == EXIT_PARSE
        assert run(capsys, "--order", "deglex", "gb", "{x1}")[0] == EXIT_PARSE

    def test_budget_exhausted(self, capsys, monkeypatch):
        monkeypatch.setenv("QWLSMITH_MAX_PAIRS", "1")
        code, _, err = run(capsys, "gb", "{x1^2 + x2*x3, x2^2 - x1*x3, x3^2 + x1*x2 - 1}", "--order", "grevlex")
        assert code == EXIT_INTERNAL and "error" in err

    def test_help(self, capsys):
        assert run(capsys, "--help")[0] == EXIT_OK


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qwlsmith", "gcd", "x1*x2", "x2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "x2"
