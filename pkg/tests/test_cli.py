import json

import pytest
from click.testing import CliRunner

from nimlang import llm_fallback as llm, ontology as ont
from nimlang.cli import EXIT_INPUT, EXIT_ONTOLOGY, EXIT_PROVIDER, main, seed_ontology_path
from conftest import DATA, MSG_1, MSG_2, MSG_OOV, golden, make_mandi_provider


@pytest.fixture
def runner():
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:  # newer click separates streams by default
        return CliRunner()


class TestCompile:
    def test_elem_golden(self, runner):
        result = runner.invoke(main, ["compile", "--format", "elem", MSG_1])
        assert result.exit_code == 0
        assert result.output.rstrip("\n") == golden("golden_elem_1.txt")

    def test_json_determinism(self, runner):
        a = runner.invoke(main, ["compile", MSG_2])
        b = runner.invoke(main, ["compile", MSG_2])
        assert a.exit_code == b.exit_code == 0
        assert a.stdout_bytes == b.stdout_bytes
        assert json.loads(a.output)["version"] == 1

    def test_tty_format(self, runner):
        result = runner.invoke(main, ["compile", "--format", "tty", MSG_1])
        assert "[SC:location]" in result.output

    def test_tty_expand(self, runner):
        result = runner.invoke(main, ["compile", "--format", "tty", "--expand", MSG_2])
        assert "day(+1)" in result.output

    def test_stdin(self, runner):
        result = runner.invoke(main, ["compile", "--format", "elem"], input=MSG_2)
        assert result.exit_code == 0
        assert result.output.rstrip("\n") == golden("golden_elem_2.txt")

    def test_empty_input_exit_2(self, runner):
        result = runner.invoke(main, ["compile", "   "])
        assert result.exit_code == EXIT_INPUT
        assert "error [input]" in result.stderr

    def test_too_long_exit_2(self, runner):
        result = runner.invoke(main, ["compile", " ".join(["word"] * 25)])
        assert result.exit_code == EXIT_INPUT

    def test_oov_without_fallback_exit_3(self, runner):
        result = runner.invoke(main, ["compile", "--no-fallback", MSG_OOV])
        assert result.exit_code == EXIT_PROVIDER
        assert "mandi" in result.stderr

    def test_oov_with_transcript(self, runner):
        result = runner.invoke(main, [
            "compile", "--format", "elem",
            "--transcript", str(DATA / "mandi_transcript.json"), MSG_OOV])
        assert result.exit_code == 0
        assert "-<cw>MANDI</cw>" in result.output
        assert "--- <st>commercial</st>" in result.output

    def test_transcript_miss_exit_3(self, runner, tmp_path):
        empty = tmp_path / "empty.json"
        empty.write_text("[]")
        result = runner.invoke(main, [
            "compile", "--transcript", str(empty), MSG_OOV])
        assert result.exit_code == EXIT_PROVIDER

    def test_ablate_text(self, runner):
        result = runner.invoke(main, ["compile", "--ablate-text", MSG_1])
        doc = json.loads(result.output)
        kinds = [s["kind"] for s in doc["segments"]]
        assert kinds == ["ideograph"] * 3

    def test_update_ontology_persists(self, runner, tmp_path):
        work = tmp_path / "ont.json"
        o = ont.load_ontology(seed_ontology_path())
        ont.save_ontology(o, work)
        result = runner.invoke(main, [
            "compile", "--ontology", str(work), "--update-ontology",
            "--transcript", str(DATA / "mandi_transcript.json"), MSG_OOV])
        assert result.exit_code == 0
        updated = ont.load_ontology(work)
        assert updated.version == o.version + 1
        assert ont.lookup(updated, "mandi", ont.NOUN) is not None


class TestOntologyCommands:
    def test_validate_seed(self, runner):
        result = runner.invoke(main, ["ontology", "validate"])
        assert result.exit_code == 0
        assert "ok" in result.output

    def test_validate_corrupted_exit_4(self, runner, tmp_path, seed_ontology):
        doc = ont.to_document(seed_ontology)
        doc["concepts"][0]["sc"] = "ghost"
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(doc))
        result = runner.invoke(main, ["ontology", "validate", "--path", str(p)])
        assert result.exit_code == EXIT_ONTOLOGY
        assert "dangling-sc" in result.output

    def test_stats(self, runner):
        result = runner.invoke(main, ["ontology", "stats"])
        doc = json.loads(result.output)
        assert doc["noun"]["classes"] == 6
        assert doc["verb"]["classes"] == 3

    def test_insert_and_export(self, runner, tmp_path, seed_ontology):
        work = tmp_path / "ont.json"
        ont.save_ontology(seed_ontology, work)
        concept = tmp_path / "c.json"
        concept.write_text(json.dumps({
            "lemma": "mandi", "pos": "noun", "sc": "location", "st": "commercial",
            "explication": [{"sv": "purpose", "sm": ["business"]}],
            "provenance": "llm_admitted",
        }))
        result = runner.invoke(main, ["ontology", "insert", "--path", str(work),
                                      "--concept", str(concept)])
        assert result.exit_code == 0
        before = work.read_bytes()
        result = runner.invoke(main, ["ontology", "export", "--path", str(work)])
        assert result.exit_code == 0
        assert work.read_bytes() == before  # canonical form is stable

    def test_insert_duplicate_exit_4(self, runner, tmp_path, seed_ontology):
        work = tmp_path / "ont.json"
        ont.save_ontology(seed_ontology, work)
        concept = tmp_path / "c.json"
        concept.write_text(json.dumps({
            "lemma": "market", "pos": "noun", "sc": "location", "st": "commercial",
            "explication": [{"sv": "purpose", "sm": ["business"]}],
        }))
        result = runner.invoke(main, ["ontology", "insert", "--path", str(work),
                                      "--concept", str(concept)])
        assert result.exit_code == EXIT_ONTOLOGY


class TestEvalCommands:
    def test_meteor(self, runner):
        result = runner.invoke(main, ["eval", "meteor", "going to market", "going to market"])
        assert json.loads(result.output)["meteor"] == pytest.approx(1.0)

    def test_lcr(self, runner):
        result = runner.invoke(main, ["eval", "lcr", "--c1", "0.57", "--c5", "0.81"])
        assert json.loads(result.output)["lcr"] == pytest.approx(0.3789, abs=1e-4)

    def test_lcr_bad_baseline_exit_2(self, runner):
        result = runner.invoke(main, ["eval", "lcr", "--c1", "0", "--c5", "0.8"])
        assert result.exit_code == EXIT_INPUT

    def test_comp(self, runner, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text("participant_id,day,message_id,interpretation,reference\n"
                     "p1,1,m1,going to market,going to market\n")
        result = runner.invoke(main, ["eval", "comp", "--records", str(p), "--day", "1"])
        assert json.loads(result.output)["comprehensibility"] == pytest.approx(1.0)

    def test_comp_missing_day_exit_2(self, runner, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text("participant_id,day,message_id,interpretation,reference\n"
                     "p1,1,m1,a,a\n")
        result = runner.invoke(main, ["eval", "comp", "--records", str(p), "--day", "9"])
        assert result.exit_code == EXIT_INPUT

    def test_mia(self, runner, tmp_path):
        p = tmp_path / "q.csv"
        p.write_text("item_id,association,certainty,suitability\n"
                     "i1,valid,9,8\ni2,valid,8,9\ni3,invalid,2,3\ni4,missing,0,0\n")
        result = runner.invoke(main, ["eval", "mia", "--responses", str(p)])
        doc = json.loads(result.output)
        assert doc["hr"] == 0.5
        assert doc["far"] == 0.25

    def test_stats(self, runner, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("score\n2\n4\n4\n4\n5\n5\n7\n9\n")
        result = runner.invoke(main, ["eval", "stats", "--csv", str(p), "--column", "score"])
        doc = json.loads(result.output)
        assert doc["mean"] == 5.0
        assert doc["sd"] == pytest.approx(2.0)

    def test_stats_bad_column_exit_2(self, runner, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("score\n1\n")
        result = runner.invoke(main, ["eval", "stats", "--csv", str(p), "--column", "nope"])
        assert result.exit_code == EXIT_INPUT
