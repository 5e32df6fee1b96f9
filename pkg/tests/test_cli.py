"""Unit tests for the malg CLI."""

import json

import jsonschema
import pytest

from malg.cli import EXIT_CAP, EXIT_FAIL, EXIT_PASS, EXIT_USAGE, create_parser, get_version, main, show_splash
from malg.paths import get_fixture, get_schema_file
from malg.structfile import loads

A = str(get_fixture("counterexample-a"))
B = str(get_fixture("counterexample-b"))

CONST_ONE = "format 1\nkind morphism\n0 -> 1\n1 -> 1\n"
IDENTITY = "format 1\nkind morphism\n0 -> 0\n1 -> 1\n"


@pytest.fixture
def p_a_file(tmp_path):
    """P(A) written by the functor command."""
    out = tmp_path / "p_a.malg"
    assert main(["functor", "p", A, "-o", str(out)]) == EXIT_PASS
    return out


class TestCreateParser:
    """Tests for create_parser."""

    def test_has_subcommands(self):
        parser = create_parser()
        action = [a for a in parser._subparsers._group_actions if hasattr(a, "choices")][0]
        assert set(action.choices) == {
            "validate", "functor", "check-hom", "enumerate", "roundtrip", "adjunction",
            "monad", "demo", "eval", "generate", "config",
        }

    def test_check_hom_defaults(self):
        parsed = create_parser().parse_args(["check-hom", "h.malg", "a.malg", "b.malg"])
        assert parsed.contract == "hom"
        assert parsed.cap is None
        assert parsed.json is False

    def test_global_options(self):
        parsed = create_parser().parse_args(["--cap", "9", "--seed", "4", "--json", "monad", "a.malg"])
        assert (parsed.cap, parsed.seed, parsed.json) == (9, 4, True)

    def test_config_set_args(self):
        parsed = create_parser().parse_args(["config", "set", "map_cap", "10"])
        assert parsed.config_action == "set"
        assert (parsed.key, parsed.value) == ("map_cap", "10")


class TestMain:
    """Exit codes and output of the subcommands."""

    def test_no_args_returns_zero(self):
        assert main([]) == EXIT_PASS

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_version(self):
        with pytest.raises(SystemExit) as exc:
            create_parser().parse_args(["--version"])
        assert exc.value.code == 0
        assert get_version()

    def test_demo_counterexample(self, capsys):
        assert main(["--json", "demo", "counterexample"]) == EXIT_PASS
        report = json.loads(capsys.readouterr().out)
        assert report["status"] == "pass"
        assert report["counts"]["multialgebra isomorphisms"] == 0
        assert report["counts"]["plain isomorphisms"] == 2
        assert report["counts"]["ordered isomorphisms"] == 0

    def test_demo_relabelled_base_path(self, tmp_path, capsys):
        """The demo reads any two-element pair with the counterexample tables."""
        header = "format 1\nkind multialgebra\nelements p q\nsignature s/1\n"
        (tmp_path / "counterexample_a.malg").write_text(header + "s(p) = {q}\ns(q) = {q}\n", encoding="utf-8")
        (tmp_path / "counterexample_b.malg").write_text(
            header + "s(p) = {p,q}\ns(q) = {p,q}\n", encoding="utf-8")
        assert main(["--json", "demo", "counterexample", "--base-path", str(tmp_path)]) == EXIT_PASS
        report = json.loads(capsys.readouterr().out)
        assert report["counts"]["plain isomorphisms"] == 2
        assert "plain iso h: {p} -> {p}, {q} -> {p,q}, {p,q} -> {q}" in report["notes"]
        plain = [v for v in report["verdicts"] if v["check"] == "plain iso P=(A) -> P=(B) exists"][0]
        assert plain["checked"] == 6

    def test_demo_text(self, capsys):
        assert main(["demo", "counterexample"]) == EXIT_PASS
        assert "PASS" in capsys.readouterr().out

    def test_validate_powerset(self):
        assert main(["validate", str(get_fixture("powerset-3"))]) == EXIT_PASS

    def test_validate_antichain_fails(self, capsys):
        """No maximum: the report names the clause and exits 1."""
        assert main(["--json", "validate", str(get_fixture("antichain"))]) == EXIT_FAIL
        verdict = json.loads(capsys.readouterr().out)["verdicts"][0]
        assert verdict["clause"] == "1: maximum"

    def test_validate_partial_and_ordered(self, p_a_file):
        assert main(["validate", str(get_fixture("partial-choice"))]) == EXIT_PASS
        assert main(["validate", str(p_a_file)]) == EXIT_PASS

    def test_parse_error(self, write_file, capsys):
        path = write_file("bad.malg", "format 1\nkind multialgebra\nelements 0\nsignature s/1\ns(0) = {}\n")
        assert main(["validate", str(path)]) == EXIT_USAGE
        err = capsys.readouterr().err
        assert err.startswith("Error: ")
        assert "line 5" in err

    def test_missing_file(self, tmp_path):
        assert main(["validate", str(tmp_path / "nope.malg")]) == EXIT_USAGE

    def test_cap_exceeded(self, capsys):
        """Four maps A -> B against a cap of three."""
        assert main(["--cap", "3", "enumerate", A, B]) == EXIT_CAP
        assert "Error:" in capsys.readouterr().err

    def test_functor_roundtrip_files(self, p_a_file, tmp_path):
        back = tmp_path / "a_again.malg"
        assert main(["functor", "a", str(p_a_file), "-o", str(back)]) == EXIT_PASS
        assert "{0}" in back.read_text()
        assert main(["functor", "a", A]) == EXIT_USAGE

    def test_functor_stdout(self, capsys):
        assert main(["functor", "p", A]) == EXIT_PASS
        out = capsys.readouterr().out
        assert "kind ordered-algebra" in out

    def test_roundtrip(self, p_a_file):
        assert main(["roundtrip", A]) == EXIT_PASS
        assert main(["roundtrip", str(p_a_file)]) == EXIT_PASS

    def test_check_hom(self, write_file):
        const = write_file("const.malg", CONST_ONE)
        ident = write_file("id.malg", IDENTITY)
        assert main(["check-hom", str(const), A, A]) == EXIT_PASS
        assert main(["check-hom", str(ident), B, A]) == EXIT_FAIL
        assert main(["check-hom", "--contract", "mm", str(ident), A, B]) == EXIT_PASS

    def test_check_hom_set_valued_needs_mm(self, write_file):
        path = write_file("sv.malg", "format 1\nkind morphism\n0 -> {0,1}\n1 -> {1}\n")
        assert main(["check-hom", str(path), A, B]) == EXIT_USAGE
        assert main(["check-hom", "--contract", "mm", str(path), A, B]) == EXIT_PASS

    def test_enumerate(self, capsys):
        assert main(["--json", "enumerate", A, B]) == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["counts"]["morphisms"] == 4
        assert main(["--json", "enumerate", "--mode", "iso", A, B]) == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["counts"]["morphisms"] == 0

    def test_enumerate_ordered(self, p_a_file, capsys):
        assert main(["--json", "enumerate", "--contract", "ordered", str(p_a_file), str(p_a_file)]) == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["counts"]["morphisms"] >= 1
        assert main(["enumerate", "--contract", "ordered", "--mode", "full",
                     str(p_a_file), str(p_a_file)]) == EXIT_USAGE

    def test_adjunction(self, p_a_file):
        assert main(["adjunction", str(p_a_file), B]) == EXIT_PASS

    def test_monad(self, capsys):
        assert main(["--json", "monad", A]) == EXIT_PASS
        checks = [v["check"] for v in json.loads(capsys.readouterr().out)["verdicts"]]
        assert "eta/epsilon naturality" in checks

    def test_eval(self, capsys):
        assert main(["--json", "eval", "--term", "s(s(x))", "--val", "x=0", B]) == EXIT_PASS
        verdicts = json.loads(capsys.readouterr().out)["verdicts"]
        assert verdicts[0]["check"] == "term bridge"
        assert verdicts[1]["detail"].endswith("= {0,1}")

    def test_eval_term_file(self, write_file, capsys):
        term = write_file("twice.malg", "format 1\nkind term\nsignature s/1\nterm s(s(x))\n")
        assert main(["--json", "eval", "--term-file", str(term), "--val", "x=0", B]) == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["verdicts"][1]["detail"].endswith("= {0,1}")

    def test_eval_term_is_never_a_path(self, tmp_path, monkeypatch, capsys):
        """--term text that happens to name a file is still parsed as a term."""
        monkeypatch.chdir(tmp_path)
        (tmp_path / "x").write_text("not a structure file\n", encoding="utf-8")
        assert main(["--json", "eval", "--term", "x", "--val", "x=1", A]) == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["verdicts"][-1]["detail"] == "x = {1}"

    def test_eval_term_and_term_file_exclusive(self, write_file):
        term = write_file("t.malg", "format 1\nkind term\nsignature s/1\nterm s(x)\n")
        assert main(["eval", "--term", "s(x)", "--term-file", str(term), "--val", "x=0", A]) == EXIT_USAGE
        assert main(["eval", "--val", "x=0", A]) == EXIT_USAGE

    def test_eval_beyond_powerset_cap(self, capsys):
        """Past powerset_cap the P bridge is skipped and the evaluation still reported."""
        assert main(["config", "set", "powerset_cap", "2"]) == EXIT_PASS
        nmatrix = str(get_fixture("nmatrix"))
        assert main(["--json", "eval", "--term", "neg(x)", "--val", "x=f", nmatrix]) == EXIT_PASS
        report = json.loads(capsys.readouterr().out)
        assert [v["check"] for v in report["verdicts"]] == ["eval"]
        assert report["verdicts"][0]["detail"] == "neg(x) = {t}"
        assert any(n.startswith("term bridge skipped") for n in report["notes"])

    def test_eval_unbound_variable(self):
        assert main(["eval", "--term", "s(x)", A]) == EXIT_USAGE

    def test_eval_ordered(self, p_a_file, capsys):
        assert main(["--json", "eval", "--term", "s(x)", "--val", "x={0,1}", str(p_a_file)]) == EXIT_PASS
        assert json.loads(capsys.readouterr().out)["verdicts"][0]["detail"].endswith("= {1}")

    def test_generate(self, capsys):
        assert main(["--seed", "3", "generate", "multialgebra", "--size", "2", "--signature", "s/1,f/2"]) == 0
        m = loads(capsys.readouterr().out)
        assert m.size == 2
        assert [s.name for s in m.signature] == ["s", "f"]

    def test_generate_bad_signature(self):
        assert main(["generate", "ordered", "--signature", "s"]) == EXIT_USAGE

    def test_config_runs(self):
        assert main(["config"]) == EXIT_PASS

    def test_config_set_and_get(self, capsys):
        assert main(["config", "set", "map_cap", "3"]) == EXIT_PASS
        assert main(["config", "get", "map_cap"]) == EXIT_PASS
        assert "3" in capsys.readouterr().out

    def test_configured_cap_applies(self):
        """A stored map_cap is picked up by later commands."""
        main(["config", "set", "map_cap", "3"])
        assert main(["enumerate", A, B]) == EXIT_CAP
        assert main(["config", "reset"]) == EXIT_PASS
        assert main(["enumerate", A, B]) == EXIT_PASS

    def test_config_list(self):
        assert main(["config", "list"]) == EXIT_PASS

    def test_config_set_invalid_key(self, capsys):
        assert main(["config", "set", "bad_key", "value"]) == EXIT_USAGE
        assert "Invalid config key" in capsys.readouterr().err


class TestShowSplash:
    """Tests for splash screen."""

    def test_splash_runs(self):
        show_splash("0.4.0")


class TestJsonReports:
    """--json output of real commands against the bundled report schema."""

    @pytest.fixture
    def schema(self):
        return json.loads(get_schema_file().read_text(encoding="utf-8"))

    @pytest.mark.parametrize("args, code", [
        (["validate", str(get_fixture("powerset-3"))], EXIT_PASS),
        (["validate", str(get_fixture("antichain"))], EXIT_FAIL),
        (["demo", "counterexample"], EXIT_PASS),
        (["enumerate", A, B], EXIT_PASS),
        (["monad", A], EXIT_PASS),
        (["roundtrip", A], EXIT_PASS),
        (["eval", "--term", "s(s(x))", "--val", "x=0", B], EXIT_PASS),
    ])
    def test_matches_schema(self, schema, capsys, args, code):
        assert main(["--json", *args]) == code
        report = json.loads(capsys.readouterr().out)
        jsonschema.validate(instance=report, schema=schema)
        assert report["status"] == ("pass" if code == EXIT_PASS else "fail")

    def test_failing_check_hom_matches_schema(self, schema, write_file, capsys):
        ident = write_file("id.malg", IDENTITY)
        assert main(["--json", "check-hom", str(ident), B, A]) == EXIT_FAIL
        report = json.loads(capsys.readouterr().out)
        jsonschema.validate(instance=report, schema=schema)
        assert report["verdicts"][-1]["witness"]
