"""Tests for the command-line interface."""

import json

import pytest

from epsk.cli import build_parser, run
from epsk.config.settings import EXIT_CODES, GOLDEN_DIR, MODELS_DIR

IP = "=> (C -> exists x. A(x)) -> exists x. C -> A(x)"


@pytest.fixture
def out(tmp_path):
    return ["--out", str(tmp_path)]


def json_report(capsys):
    return json.loads(capsys.readouterr().out)


class TestCheck:
    """Test class for the check command."""

    def test_accepted(self, out):
        assert run(["check", str(GOLDEN_DIR / "and_comm.json")] + out) == EXIT_CODES["ok"]

    def test_rejected(self, out, capsys):
        code = run(["check", str(GOLDEN_DIR / "ip_invalid.json"), "--format", "json"] + out)
        assert code == EXIT_CODES["failed"]
        report = json_report(capsys)
        assert report["status"] == "failed"
        assert report["violations"][0]["code"] == "MissingDefinednessPremise"

    def test_natural_deduction_file(self, out):
        assert run(["check", str(GOLDEN_DIR / "nj_exdef.json")] + out) == EXIT_CODES["ok"]

    def test_missing_file(self, tmp_path, out):
        assert run(["check", str(tmp_path / "absent.json")] + out) == EXIT_CODES["usage"]


class TestSearchCommands:
    """Test class for prove, refute and decide."""

    def test_prove_writes_the_derivation(self, tmp_path, out):
        assert run(["prove", "A & B => B & A"] + out) == EXIT_CODES["ok"]
        assert len(list(tmp_path.glob("prove-*.proof.json"))) == 1

    def test_decide_writes_the_countermodel(self, tmp_path, out, capsys):
        assert run(["decide", IP, "--format", "json"] + out) == EXIT_CODES["failed"]
        report = json_report(capsys)
        assert report["verdict"] == "refuted"
        assert report["world"] == "w0"
        assert len(list(tmp_path.glob("decide-*.model.json"))) == 1

    def test_exhausted(self, out):
        code = run(["prove", "=> A | ~A", "--steps", "50"] + out)
        assert code == EXIT_CODES["exhausted"]

    def test_ipc_flag(self, out):
        assert run(["prove", "=> (exists x. C -> A(x)) -> C -> exists x. A(x)",
                    "--calculus", "ipc"] + out) == EXIT_CODES["ok"]


class TestModelCommands:
    """Test class for eval, validate-model and extend-model."""

    def test_eval(self, out, capsys):
        code = run(["eval", str(MODELS_DIR / "two_world.json"),
                    "P(eps x. P(x)) -> exists x. P(x)", "--format", "json"] + out)
        assert code == EXIT_CODES["ok"]
        assert json_report(capsys)["worlds"] == {"w0": False, "w1": True}

    def test_validate(self, out):
        path = str(MODELS_DIR / "ip_countermodel.json")
        assert run(["validate-model", path] + out) == EXIT_CODES["ok"]

    def test_extend(self, tmp_path, out):
        code = run(["extend-model", str(MODELS_DIR / "ip_countermodel.json"),
                    "--term", "eps x. C -> A(x)"] + out)
        assert code == EXIT_CODES["ok"]
        assert (tmp_path / "ip_countermodel.extended.json").exists()
        assert run(["validate-model", str(tmp_path / "ip_countermodel.extended.json")]
                   + out) == EXIT_CODES["ok"]

    def test_extend_needs_an_eps_term(self, out):
        code = run(["extend-model", str(MODELS_DIR / "ip_countermodel.json"),
                    "--term", "c"] + out)
        assert code == EXIT_CODES["usage"]


class TestOtherCommands:
    """Test class for translate and axiom."""

    def test_translate(self, tmp_path, out):
        code = run(["translate", str(GOLDEN_DIR / "and_comm.json"), "--to", "nj"] + out)
        assert code == EXIT_CODES["ok"]
        written = tmp_path / "and_comm.nj.json"
        assert run(["check", str(written)] + out) == EXIT_CODES["ok"]

    def test_axiom(self, out, capsys):
        code = run(["axiom", "(exists x. P(x)) -> P(eps x. P(x))", "--format", "json"] + out)
        assert code == EXIT_CODES["ok"]
        assert json_report(capsys)["check"]["ok"] is True

    def test_not_an_axiom(self, out):
        assert run(["axiom", "A -> A"] + out) == EXIT_CODES["failed"]


class TestUsage:
    """Test class for usage errors."""

    def test_no_command(self, capsys):
        assert run([]) == EXIT_CODES["usage"]

    def test_unknown_choice(self):
        with pytest.raises(SystemExit) as info:
            run(["decide", "A", "--calculus", "classical"])
        assert info.value.code == EXIT_CODES["usage"]

    def test_bound_below_one(self, out):
        assert run(["decide", "A", "--depth", "0"] + out) == EXIT_CODES["usage"]

    def test_parse_error(self, out):
        assert run(["decide", "A & & B"] + out) == EXIT_CODES["usage"]

    def test_parser_lists_every_command(self):
        parser = build_parser()
        choices = parser._subparsers._group_actions[0].choices
        assert set(choices) == {"check", "prove", "refute", "decide", "eval", "validate-model",
                                "translate", "extend-model", "conserve", "axiom"}
