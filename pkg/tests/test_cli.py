import json

from autfn.cli import main
from autfn.runner import bundled_corpus_dir

CORPUS = bundled_corpus_dir()
ROSE = str(CORPUS / "rose-five-rotation.scn")


class TestScenarioCommands:
    def test_parse_summary(self, capsys):
        assert main(["parse", ROSE]) == 0
        out = capsys.readouterr().out
        assert "rank 5" in out

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.scn"
        bad.write_text("rank 4\naut f { x1 -> x9 }")
        assert main(["parse", str(bad)]) == 1
        assert "x9" in capsys.readouterr().err

    def test_run_single_file(self, capsys):
        assert main(["run", ROSE]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out

    def test_run_json(self, capsys):
        assert main(["run", ROSE, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert all(
            set(rec) == {"scenario", "assertion", "status", "detail", "anchor"}
            for rec in payload
        )

    def test_run_failure_exit_code(self, tmp_path, capsys):
        f = tmp_path / "f.scn"
        f.write_text("rank 2\nassert I(1) == id\n")
        assert main(["run", str(f)]) == 1

    def test_replay_directory(self, tmp_path, capsys):
        (tmp_path / "one.scn").write_text(
            "# anchor: a\nrank 2\nassert P(1,2)^2 == id\n"
        )
        assert main(["replay", str(tmp_path)]) == 0
        assert "1 passed" in capsys.readouterr().out

    def test_lint_bundled(self, capsys):
        assert main(["lint"]) == 0
        assert "known anchors" in capsys.readouterr().out


class TestExpressionCommands:
    def test_compose(self, capsys):
        assert main(["compose", "--rank", "3", "L(1,2) * L(1,2)"]) == 0
        assert "x2^2 x1" in capsys.readouterr().out

    def test_apply(self, capsys):
        assert main(["apply", "--rank", "4", "C(1,2)", "x1 x3"]) == 0
        assert capsys.readouterr().out.strip() == "x2 x1 x2^-1 x3"

    def test_order_with_caps(self, capsys):
        assert main(["order", "--rank", "3", "--cap-power", "8", "C(1,2)"]) == 0
        assert "unbounded" in capsys.readouterr().out

    def test_inner_exit_codes(self, capsys):
        assert main(["inner", "--rank", "3", "C(1,2) * C(2,1)"]) == 1
        assert main(["inner", "--rank", "1", "id"]) == 0

    def test_abelianize_matrix_format(self, capsys):
        assert main(["abelianize", "--rank", "3", "L(1,2)"]) == 0
        assert capsys.readouterr().out.strip() == "1 0 0; 1 1 0; 0 0 1"

    def test_abelianize_mod(self, capsys):
        assert main(["abelianize", "--rank", "2", "I(1)", "--mod", "3"]) == 0
        assert capsys.readouterr().out.strip() == "2 0; 0 1"

    def test_det(self, capsys):
        assert main(["det", "--rank", "4", "I(2)"]) == 0
        assert capsys.readouterr().out.strip() == "-1"


class TestRealizeAndClosure:
    def test_realize_prints_action(self, capsys):
        assert main([
            "realize", str(CORPUS / "conjugacy-shift-rank-four.scn"),
            "--gaut", "rot", "--delta", "s1", "--basis", "B",
        ]) == 0
        out = capsys.readouterr().out
        assert "x1 -> x2" in out
        assert "x4 x1 x4^-1" in out

    def test_closure_json_schema(self, capsys):
        assert main([
            "closure", "--n", "3", "--mod", "4", "--k", "2", "--r", "1",
            "--power", "2",
        ]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"op", "n", "modulus", "order", "result", "elapsed_ms"}
        assert payload["order"] == 256
