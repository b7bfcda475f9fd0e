"""
Tests for the complement-miner command line
"""

import json
import os

import pytest
from typer.testing import CliRunner

from complement_miner import __version__
from complement_miner.cli import app
from complement_miner.config import ENV_PREFIX
from complement_miner.corpus import load_corpus, load_extractions, load_knowledge, save_corpus
from complement_miner.model import Review
from complement_miner.synthetic import generate_reviews
from tests.fixture_corpus import CATEGORY

POSSESSIVE_PATH = "(work, V) -nmod:cmprel-> (CETT, N) -nmod:poss-> (my, PRP$)"

CONLLU = """\
# review_id = r1
# product_id = stand-a
# category = Tablet Stand
1\tIt\tit\tPRON\tPRP\t_\t2\tnsubj\t_\t_
2\tworks\twork\tVERB\tVBZ\t_\t0\troot\t_\t_
3\twith\twith\tADP\tIN\t_\t5\tcase\t_\t_
4\tmy\tmy\tPRON\tPRP$\t_\t5\tnmod:poss\t_\t_
5\tphone\tphone\tNOUN\tNN\t_\t2\tobl\t_\t_

"""


@pytest.fixture
def runner(monkeypatch):
    for name in list(os.environ):
        if name.startswith(ENV_PREFIX):
            monkeypatch.delenv(name)
    return CliRunner()


@pytest.fixture
def phone_corpus(tmp_path, phone_sentence):
    path = tmp_path / "phone.jsonl"
    save_corpus([Review("r1", "stand-a", CATEGORY, (phone_sentence,))], path)
    return path


class TestGlobalOptions:
    """Test the top-level options"""

    def test_version(self, runner):
        """Test --version prints the package version"""
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_bad_config_file(self, runner, tmp_path):
        """Test a broken config file exits with code 1"""
        config = tmp_path / "bad.yaml"
        config.write_text("sedes: [fit]\n", encoding="utf-8")
        result = runner.invoke(app, ["--config", str(config), "paths"])
        assert result.exit_code == 1
        assert "unknown settings sedes" in result.output


class TestExpandCommand:
    """Test the expand subcommand"""

    def test_fixture_bundle(self, runner, fixture_files, fixture_knowledge):
        """Test expanding the fixture corpus writes the hand-counted bundle"""
        out = fixture_files["dir"] / "knowledge.json"
        result = runner.invoke(app, ["expand", "--corpus", str(fixture_files["corpus"]), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "Tablet Stand: 5 candidate entities, 4 domain-specific verbs from 50 reviews" in result.output
        assert "Expansion time" in result.output
        assert load_knowledge(out) == fixture_knowledge

    def test_provenance_and_seeds(self, runner, fixture_files):
        """Test --seeds and --provenance reach the expansion"""
        out = fixture_files["dir"] / "knowledge.json"
        args = ["expand", "--corpus", str(fixture_files["corpus"]), "--out", str(out)]
        result = runner.invoke(app, [*args, "--seeds", "fit", "--provenance"])
        assert result.exit_code == 0, result.output
        dk = load_knowledge(out)
        assert dict(dk.cce) == {"ipad": 3}
        assert dk.cce_sources["ipad"] == ("fx-010:0", "fx-011:0", "fx-012:0")

    def test_sample(self, runner, fixture_files):
        """Test --sample limits the reviews used"""
        out = fixture_files["dir"] / "knowledge.json"
        args = ["expand", "--corpus", str(fixture_files["corpus"]), "--out", str(out), "--sample", "10"]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        assert load_knowledge(out).source_review_count == 10

    def test_unknown_category(self, runner, fixture_files):
        """Test an absent category gives empty knowledge"""
        out = fixture_files["dir"] / "knowledge.json"
        args = ["expand", "--corpus", str(fixture_files["corpus"]), "--out", str(out), "--category", "Stylus"]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        dk = load_knowledge(out)
        assert (dk.domain, len(dk.cce), dk.source_review_count) == ("Stylus", 0, 0)

    def test_missing_corpus(self, runner, tmp_path):
        """Test a missing corpus file exits with code 1"""
        result = runner.invoke(
            app, ["expand", "--corpus", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "k.json")]
        )
        assert result.exit_code == 1
        assert "Error" in result.output


class TestExtractAndEvaluate:
    """Test extract and evaluate together"""

    def extract(self, runner, fixture_files, *extra):
        out = fixture_files["dir"] / "pred.jsonl"
        args = ["extract", "--corpus", str(fixture_files["corpus"]), "--out", str(out), *extra]
        return runner.invoke(app, args), out

    def test_basic(self, runner, fixture_files):
        """Test basic mode writes 45 records"""
        result, out = self.extract(runner, fixture_files)
        assert result.exit_code == 0, result.output
        assert "45 extractions (basic)" in result.output
        assert len(load_extractions(out)) == 45

    def test_knowledge_needs_bundle(self, runner, fixture_files):
        """Test knowledge mode without --knowledge is a usage error"""
        result, _ = self.extract(runner, fixture_files, "--mode", "knowledge")
        assert result.exit_code == 2

    def test_knowledge_mode(self, runner, fixture_files):
        """Test expand then extract in knowledge mode"""
        bundle = fixture_files["dir"] / "knowledge.json"
        runner.invoke(app, ["expand", "--corpus", str(fixture_files["corpus"]), "--out", str(bundle)])
        result, out = self.extract(runner, fixture_files, "--mode", "knowledge", "--knowledge", str(bundle))
        assert result.exit_code == 0, result.output
        assert len(load_extractions(out)) == 32

    def test_disable_path(self, runner, fixture_files):
        """Test --disable-path leaves paths 5 and 6 out of basic mode"""
        result, out = self.extract(runner, fixture_files, "--disable-path", "5", "--disable-path", "6")
        assert result.exit_code == 0, result.output
        assert "31 extractions (basic)" in result.output
        assert {r.extraction.path_id for r in load_extractions(out)} <= {"1", "2", "3", "4"}

    def test_disable_unknown_path(self, runner, fixture_files):
        """Test disabling an unknown path id exits with code 1"""
        result, _ = self.extract(runner, fixture_files, "--disable-path", "42")
        assert result.exit_code == 1
        assert "unknown built-in path ids 42" in result.output

    def test_baselines(self, runner, fixture_files):
        """Test both baselines run"""
        for mode in ("baseline-my", "baseline-np"):
            result, out = self.extract(runner, fixture_files, "--mode", mode)
            assert result.exit_code == 0, result.output
            assert {r.extraction.path_id for r in load_extractions(out)} <= {"my", "np"}

    def test_evaluate_fixture(self, runner, fixture_files):
        """Test the report of basic mode on the fixture"""
        _, pred = self.extract(runner, fixture_files)
        report = fixture_files["dir"] / "report.json"
        args = ["evaluate", "--pred", str(pred), "--gold", str(fixture_files["gold"]), "--out", str(report)]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        assert "Matching mode: equality" in result.output
        overall = [line for line in result.output.splitlines() if line.startswith("| overall")]
        assert len(overall) == 1
        assert "0.844" in overall[0] and "0.974" in overall[0] and "0.905" in overall[0]
        data = json.loads(report.read_text(encoding="utf-8"))
        assert (data["overall"]["tp"], data["overall"]["fp"], data["overall"]["fn"]) == (38, 7, 1)
        assert set(data["per_product"]) == {"stand-a", "stand-b"}

    def test_evaluate_overall_only(self, runner, fixture_files):
        """Test --overall-only drops the product rows"""
        _, pred = self.extract(runner, fixture_files)
        args = ["evaluate", "--pred", str(pred), "--gold", str(fixture_files["gold"]), "--overall-only"]
        result = runner.invoke(app, [*args, "--mode", "containment"])
        assert result.exit_code == 0, result.output
        assert "Matching mode: containment" in result.output
        assert "stand-a" not in result.output

    def test_evaluate_empty_predictions(self, runner, fixture_files):
        """Test no predictions give zero precision and recall"""
        pred = fixture_files["dir"] / "empty.jsonl"
        pred.write_text("", encoding="utf-8")
        report = fixture_files["dir"] / "report.json"
        args = ["evaluate", "--pred", str(pred), "--gold", str(fixture_files["gold"]), "-o", str(report)]
        assert runner.invoke(app, args).exit_code == 0
        data = json.loads(report.read_text(encoding="utf-8"))
        assert data["overall"]["precision"] == 0 and data["overall"]["recall"] == 0


class TestMatchCommand:
    """Test the match subcommand"""

    def test_dsl_path(self, runner, phone_corpus):
        """Test a DSL path on the "It works with my phone" sentence"""
        result = runner.invoke(app, ["match", "--sentence-file", str(phone_corpus), "--path", POSSESSIVE_PATH])
        assert result.exit_code == 0, result.output
        assert f"🔎 {POSSESSIVE_PATH}" in result.output
        assert "CETT=5 (phone)" in result.output
        assert "📊 1 matches" in result.output

    def test_catalog_path(self, runner, phone_corpus):
        """Test a catalog path binds both tags"""
        args = ["match", "--sentence-file", str(phone_corpus), "--path-id", "1"]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        assert "CETT=5 (phone)  VERB=2 (works)" in result.output

    def test_explain(self, runner, phone_corpus):
        """Test --explain prints the rule per attribute"""
        args = ["match", "--sentence-file", str(phone_corpus), "--path", POSSESSIVE_PATH, "--explain"]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        assert "segment 2:" in result.output
        assert "lemmatized word" in result.output
        assert "nmod:cmprel macro" in result.output

    def test_sentence_filter(self, runner, phone_corpus):
        """Test --sentence-id skips other sentences"""
        args = ["match", "--sentence-file", str(phone_corpus), "--path-id", "1", "--sentence-id", "r2:0"]
        result = runner.invoke(app, args)
        assert "📊 0 matches" in result.output

    def test_syntax_error(self, runner, phone_corpus):
        """Test a malformed path exits with code 1 and a caret"""
        result = runner.invoke(app, ["match", "--sentence-file", str(phone_corpus), "--path", "(work V) -dobj-> (CETT, N)"])
        assert result.exit_code == 1
        assert "      ^" in result.output

    def test_unknown_path_id(self, runner, phone_corpus):
        """Test an unknown catalog id exits with code 1"""
        result = runner.invoke(app, ["match", "--sentence-file", str(phone_corpus), "--path-id", "42"])
        assert result.exit_code == 1
        assert "unknown path id" in result.output

    def test_path_and_id_exclusive(self, runner, phone_corpus):
        """Test exactly one of --path and --path-id is required"""
        result = runner.invoke(app, ["match", "--sentence-file", str(phone_corpus)])
        assert result.exit_code == 2


class TestCorpusCommands:
    """Test convert, sample, sweep and paths"""

    def test_convert(self, runner, tmp_path):
        """Test a CoNLL-U file converts to a corpus"""
        source = tmp_path / "in.conllu"
        source.write_text(CONLLU, encoding="utf-8")
        out = tmp_path / "out.jsonl"
        result = runner.invoke(app, ["convert", str(source), "--out", str(out)])
        assert result.exit_code == 0, result.output
        (review,) = load_corpus(out)
        assert review.sentences[0].text() == "It works with my phone"

    def test_sample(self, runner, fixture_files):
        """Test the same seed writes the same sample"""
        outs = [fixture_files["dir"] / f"sample{i}.jsonl" for i in (1, 2)]
        for out in outs:
            args = ["sample", "--corpus", str(fixture_files["corpus"]), "--category", CATEGORY, "-n", "10", "--seed", "4", "--out", str(out)]
            result = runner.invoke(app, args)
            assert result.exit_code == 0, result.output
        assert outs[0].read_bytes() == outs[1].read_bytes()
        assert len(load_corpus(outs[0])) == 10

    def test_sweep(self, runner, tmp_path):
        """Test the sweep table has one row per size"""
        corpus = tmp_path / "synthetic.jsonl"
        save_corpus(generate_reviews(60, seed=3), corpus)
        result = runner.invoke(app, ["sweep", "--corpus", str(corpus), "--sizes", "10,30,60"])
        assert result.exit_code == 0, result.output
        rows = [line for line in result.output.splitlines() if line.startswith("|") and "size" not in line and "---" not in line]
        assert [row.split("|")[1].strip() for row in rows] == ["10", "30", "60"]

    def test_sweep_bad_sizes(self, runner, fixture_files):
        """Test non-numeric sizes are a usage error"""
        result = runner.invoke(app, ["sweep", "--corpus", str(fixture_files["corpus"]), "--sizes", "ten"])
        assert result.exit_code == 2

    def test_paths(self, runner):
        """Test the catalog listing"""
        result = runner.invoke(app, ["paths"])
        assert result.exit_code == 0, result.output
        assert "(VERB, V) -nmod:cmprel-> (CETT, N)" in result.output
        assert "(fit|work, V)" in result.output

    def test_paths_with_config(self, runner, tmp_path):
        """Test extra paths from a config file are listed"""
        config = tmp_path / "settings.yaml"
        config.write_text(
            "extra_paths:\n  - {id: subject, dsl: '(CETT, N) <-nsubj- (VERB, V)'}\n", encoding="utf-8"
        )
        result = runner.invoke(app, ["-c", str(config), "paths"])
        assert result.exit_code == 0, result.output
        assert "subject" in result.output


class TestEnvironmentFallbacks:
    """Test commands configured from COMPLEMENT_MINER_* variables alone"""

    def test_extract_and_evaluate(self, runner, fixture_files):
        """Test extract then evaluate with no flags at all"""
        pred = fixture_files["dir"] / "pred.jsonl"
        env = {
            "COMPLEMENT_MINER_CORPUS": str(fixture_files["corpus"]),
            "COMPLEMENT_MINER_OUT": str(pred),
            "COMPLEMENT_MINER_EXTRACT_MODE": "basic",
            "COMPLEMENT_MINER_DISABLED_PATHS": "5,6",
        }
        result = runner.invoke(app, ["extract"], env=env)
        assert result.exit_code == 0, result.output
        assert len(load_extractions(pred)) == 31

        env = {
            "COMPLEMENT_MINER_PRED": str(pred),
            "COMPLEMENT_MINER_GOLD": str(fixture_files["gold"]),
            "COMPLEMENT_MINER_MATCH_MODE": "containment",
            "COMPLEMENT_MINER_PER_PRODUCT": "false",
        }
        result = runner.invoke(app, ["evaluate"], env=env)
        assert result.exit_code == 0, result.output
        assert "Matching mode: containment" in result.output
        assert "stand-a" not in result.output

    def test_match(self, runner, phone_corpus):
        """Test match reads the sentence file and path id from the environment"""
        env = {
            "COMPLEMENT_MINER_SENTENCE_FILE": str(phone_corpus),
            "COMPLEMENT_MINER_PATH_ID": "1",
            "COMPLEMENT_MINER_EXPLAIN": "1",
        }
        result = runner.invoke(app, ["match"], env=env)
        assert result.exit_code == 0, result.output
        assert "CETT=5 (phone)  VERB=2 (works)" in result.output
        assert "segment 1:" in result.output

    def test_flag_beats_environment(self, runner, fixture_files):
        """Test a flag wins over its variable"""
        pred = fixture_files["dir"] / "pred.jsonl"
        env = {"COMPLEMENT_MINER_CORPUS": str(fixture_files["corpus"]), "COMPLEMENT_MINER_OUT": "unused.jsonl"}
        result = runner.invoke(app, ["extract", "--out", str(pred)], env=env)
        assert result.exit_code == 0, result.output
        assert len(load_extractions(pred)) == 45

    def test_empty_seeds(self, runner, fixture_files):
        """Test an empty seed list is reported as a configuration error"""
        out = fixture_files["dir"] / "pred.jsonl"
        args = ["extract", "--corpus", str(fixture_files["corpus"]), "--out", str(out)]
        result = runner.invoke(app, args, env={"COMPLEMENT_MINER_SEEDS": ""})
        assert result.exit_code == 1
        assert "'seeds' needs at least one verb" in result.output
        assert not out.exists()
