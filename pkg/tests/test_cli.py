"""End-to-end runs of the command-line pipeline."""

import csv
import json
from types import SimpleNamespace

import pytest

from colorlex.cli import main
from colorlex.config import (
    ConfigError,
    config_hash,
    header_line,
    load_config,
    with_overrides,
)
from colorlex.corpus import read_clean_rounds
from colorlex.informativeness import read_word_infos

EXPECTED_FILES = (
    "clean_rounds.tsv",
    "rejects.tsv",
    "ingest.json",
    "word_info.tsv",
    "fit_all.txt",
    "fit_all.json",
    "fit_repeated.txt",
    "fit_repeated.json",
    "simulation.tsv",
    "simulation.json",
    "stimuli.tsv",
    "stimuli.json",
    "plot_denotations.svg",
    "plot_ease_vs_iw.svg",
)


def run_pipeline(config, out):
    steps = (
        ["ingest"],
        ["info"],
        ["regress", "--subset", "all"],
        ["regress", "--subset", "repeated"],
        ["simulate"],
        ["stimuli"],
        ["plot", "--kind", "denotations"],
        ["plot", "--kind", "ease_vs_iw"],
    )
    for step in steps:
        code = main(["--config", str(config), "--out", str(out)] + step)
        assert code == 0, f"step {step} failed"


@pytest.fixture(scope="module")
def pipeline(fixture_corpus, tmp_path_factory) -> SimpleNamespace:
    out = tmp_path_factory.mktemp("cli") / "out"
    run_pipeline(fixture_corpus.config, out)
    cfg = with_overrides(load_config(fixture_corpus.config), None, str(out))
    return SimpleNamespace(out=out, cfg=cfg, corpus=fixture_corpus)


class TestPipeline:
    def test_all_outputs_written(self, pipeline):
        for name in EXPECTED_FILES:
            assert (pipeline.out / name).exists(), name

    def test_ingest_report(self, pipeline):
        payload = json.loads((pipeline.out / "ingest.json").read_text())
        assert payload["n_raw"] == pipeline.corpus.n_raw
        assert payload["n_rejected"] == pipeline.corpus.n_rejects
        with open(pipeline.out / "clean_rounds.tsv") as handle:
            rounds = read_clean_rounds(handle)
        assert payload["n_clean"] == len(rounds)
        assert payload["n_chips"] == len({r.target_key for r in rounds})

    def test_headers_consistent(self, pipeline):
        expected = header_line(pipeline.cfg)
        for name in EXPECTED_FILES:
            if name.endswith(".json") or name.endswith(".svg"):
                continue
            first = (pipeline.out / name).read_text().splitlines()[0]
            assert first == expected, name

    def test_json_provenance(self, pipeline):
        digest = config_hash(pipeline.cfg)
        for name in EXPECTED_FILES:
            if not name.endswith(".json"):
                continue
            payload = json.loads((pipeline.out / name).read_text())
            assert payload["_config"] == digest, name
            assert payload["_seed"] == pipeline.corpus.seed, name

    def test_svg_provenance(self, pipeline):
        comment = header_line(pipeline.cfg).lstrip("# ")
        for name in ("plot_denotations.svg", "plot_ease_vs_iw.svg"):
            text = (pipeline.out / name).read_text()
            assert text.startswith("<?xml")
            assert comment in text

    def test_word_info_sorted(self, pipeline):
        with open(pipeline.out / "word_info.tsv") as handle:
            infos = read_word_infos(handle)
        scores = [w.i_w for w in infos]
        assert len(infos) > 5
        assert scores == sorted(scores, reverse=True)

    def test_fit_reports(self, pipeline):
        for subset in ("all", "repeated"):
            payload = json.loads(
                (pipeline.out / f"fit_{subset}.json").read_text()
            )
            assert payload["subset"] == subset
            assert payload["ols"]["method"] == "ols"
            assert payload["random_intercept"]["method"] == \
                "random_intercept"
            # harder contexts elicit more informative words
            assert payload["ols"]["slope"] < 0
            assert payload["random_intercept"]["slope"] < 0
            text = (pipeline.out / f"fit_{subset}.txt").read_text()
            assert "(ols)" in text
            assert "(random_intercept)" in text

    def test_simulation_outputs(self, pipeline):
        payload = json.loads((pipeline.out / "simulation.json").read_text())
        results = payload["results"]
        assert set(results) == {"actual", "general_only", "specific_only"}
        actual = results["actual"]
        general = results["general_only"]
        specific = results["specific_only"]
        assert actual["accuracy"] >= general["accuracy"]
        assert actual["accuracy"] >= specific["accuracy"]
        assert general["i_l"] <= actual["i_l"] <= specific["i_l"]
        lines = (pipeline.out / "simulation.tsv").read_text().splitlines()
        assert len(lines) == 5
        assert [l.split("\t")[0] for l in lines[2:]] == \
            ["actual", "general_only", "specific_only"]

    def test_stimuli_outputs(self, pipeline):
        payload = json.loads((pipeline.out / "stimuli.json").read_text())
        assert payload["n"] == 100
        assert payload["bins"] == 10
        assert sum(payload["report"]["bin_counts"]) == 100
        lines = (pipeline.out / "stimuli.tsv").read_text().splitlines()
        assert len(lines) == 102

    def test_ingest_rerun_is_stable(self, pipeline):
        before = (pipeline.out / "clean_rounds.tsv").read_bytes()
        code = main(["--config", str(pipeline.corpus.config),
                     "--out", str(pipeline.out), "ingest"])
        assert code == 0
        assert (pipeline.out / "clean_rounds.tsv").read_bytes() == before


class TestOverrides:
    def test_seed_changes_header_and_hash(self, fixture_corpus, tmp_path):
        out = tmp_path / "o"
        assert main(["--config", str(fixture_corpus.config),
                     "--out", str(out), "--seed", "99", "ingest"]) == 0
        first = (out / "clean_rounds.tsv").read_text().splitlines()[0]
        assert first.endswith("seed=99")
        base = load_config(fixture_corpus.config)
        assert config_hash(with_overrides(base, 99, None)) != \
            config_hash(base)

    def test_out_dir_created(self, fixture_corpus, tmp_path):
        out = tmp_path / "deeply" / "nested" / "dir"
        assert main(["--config", str(fixture_corpus.config),
                     "--out", str(out), "ingest"]) == 0
        assert (out / "clean_rounds.tsv").exists()

    def test_negative_seed_rejected(self, fixture_corpus, tmp_path, capsys):
        code = main(["--config", str(fixture_corpus.config),
                     "--out", str(tmp_path / "o"), "--seed", "-3", "ingest"])
        assert code == 2
        assert "seed" in capsys.readouterr().err

    def test_spellmap_recovers_misspellings(self, fixture_corpus, tmp_path):
        plain_out = tmp_path / "plain"
        fixed_out = tmp_path / "fixed"
        assert main(["--config", str(fixture_corpus.config),
                     "--out", str(plain_out), "ingest"]) == 0
        assert main(["--config", str(fixture_corpus.config_spellmap),
                     "--out", str(fixed_out), "ingest"]) == 0

        def blue_count(path):
            with open(path / "clean_rounds.tsv") as handle:
                return sum(1 for r in read_clean_rounds(handle)
                           if r.word == "blue")

        assert blue_count(fixed_out) > blue_count(plain_out)


class TestErrorHandling:
    def test_missing_config(self, tmp_path, capsys):
        code = main(["--config", str(tmp_path / "none.ini"), "ingest"])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_config_key(self, fixture_corpus, tmp_path, capsys):
        bad = tmp_path / "bad.ini"
        bad.write_text(f"[run]\ninput = {fixture_corpus.csv}\nshout = yes\n")
        code = main(["--config", str(bad), "--out", str(tmp_path / "o"),
                     "ingest"])
        assert code == 2
        assert "shout" in capsys.readouterr().err

    def test_unknown_config_section(self, fixture_corpus, tmp_path, capsys):
        bad = tmp_path / "bad.ini"
        bad.write_text(f"[run]\ninput = {fixture_corpus.csv}\n[plotting]\n")
        code = main(["--config", str(bad), "--out", str(tmp_path / "o"),
                     "ingest"])
        assert code == 2
        assert "plotting" in capsys.readouterr().err

    def test_missing_column_names_it(self, tmp_path, capsys):
        src = tmp_path / "narrow.csv"
        src.write_text("game_id,round_index,utterance\n")
        cfg = tmp_path / "run.ini"
        cfg.write_text(f"[run]\ninput = {src}\n")
        code = main(["--config", str(cfg), "--out", str(tmp_path / "o"),
                     "ingest"])
        assert code == 2
        assert "listener_correct" in capsys.readouterr().err

    def test_stage_order_enforced(self, fixture_corpus, tmp_path, capsys):
        code = main(["--config", str(fixture_corpus.config),
                     "--out", str(tmp_path / "fresh"), "info"])
        assert code == 2
        assert "ingest" in capsys.readouterr().err
        code = main(["--config", str(fixture_corpus.config),
                     "--out", str(tmp_path / "fresh2"), "simulate"])
        assert code == 2

    def test_unknown_plot_word(self, pipeline, capsys):
        code = main(["--config", str(pipeline.corpus.config),
                     "--out", str(pipeline.out),
                     "plot", "--kind", "denotations", "--words", "sparkle"])
        assert code == 2
        err = capsys.readouterr().err
        assert "sparkle" in err
        assert "blue" in err  # lists what is available

    def test_bad_stimulus_split(self, pipeline, capsys):
        code = main(["--config", str(pipeline.corpus.config),
                     "--out", str(pipeline.out),
                     "stimuli", "--n", "7", "--bins", "10"])
        assert code == 2
        assert "divide" in capsys.readouterr().err


class TestDegenerateCorpora:
    @pytest.fixture()
    def failed_only(self, tmp_path):
        src = tmp_path / "failed.csv"
        with open(src, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["game_id", "round_index", "utterance",
                 "target_h", "target_s", "target_l",
                 "distractor1_h", "distractor1_s", "distractor1_l",
                 "distractor2_h", "distractor2_s", "distractor2_l",
                 "listener_correct", "speaker_id"]
            )
            for i in range(5):
                writer.writerow(
                    ["g1", i, "blue", 230, 80, 50, 0, 80, 50, 60, 80, 50,
                     "false", "s1"]
                )
        cfg = tmp_path / "run.ini"
        cfg.write_text(f"[run]\ninput = {src}\nmin_count = 1\n")
        out = tmp_path / "o"
        assert main(["--config", str(cfg), "--out", str(out), "ingest"]) == 0
        assert main(["--config", str(cfg), "--out", str(out), "info"]) == 0
        return SimpleNamespace(cfg=cfg, out=out)

    def test_empty_plots_still_render(self, failed_only):
        for kind in ("denotations", "ease_vs_iw"):
            code = main(["--config", str(failed_only.cfg),
                         "--out", str(failed_only.out),
                         "plot", "--kind", kind])
            assert code == 0
        text = (failed_only.out / "plot_denotations.svg").read_text()
        assert "no data" in text

    def test_simulation_needs_referents(self, failed_only, capsys):
        code = main(["--config", str(failed_only.cfg),
                     "--out", str(failed_only.out), "simulate"])
        assert code == 2
        assert "referent" in capsys.readouterr().err


class TestConfigParsing:
    def test_tab_delimiter_alias(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[run]\ninput = x.tsv\ndelimiter = tab\n")
        assert load_config(cfg).delimiter == "\t"

    def test_language_default_min_count(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[run]\ninput = x.csv\nlanguage = Chinese\n")
        loaded = load_config(cfg)
        assert loaded.language == "chinese"
        assert loaded.min_count == 5

    def test_unknown_language_needs_min_count(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[run]\ninput = x.csv\nlanguage = klingon\n")
        with pytest.raises(ConfigError, match="min_count"):
            load_config(cfg)
        cfg.write_text(
            "[run]\ninput = x.csv\nlanguage = klingon\nmin_count = 4\n"
        )
        assert load_config(cfg).min_count == 4

    def test_schema_section_round_trip(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text(
            "[run]\ninput = x.csv\n"
            "[schema]\nutterance = contents\nspeaker_id =\n"
        )
        loaded = load_config(cfg)
        assert loaded.schema["utterance"] == "contents"
        assert loaded.schema["speaker_id"] is None
        assert loaded.schema["game_id"] == "game_id"

    def test_hash_ignores_out_dir(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[run]\ninput = x.csv\nout = somewhere\n")
        a = load_config(cfg)
        assert config_hash(a) == config_hash(with_overrides(a, None, "else"))
        assert config_hash(a) != config_hash(with_overrides(a, 123, None))
