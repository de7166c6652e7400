import json
from pathlib import Path

import pytest

from corpuscompare import terms
from corpuscompare.cli import main


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Fixture corpora plus ingested clean files shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cliwork")
    assert main(["fixture", "--out", str(root / "fixture"), "--seed", "7", "--size", "400"]) == 0
    for which, tag in (("fall", "fall2020"), ("spring", "spring2021")):
        code = main(
            [
                "ingest",
                "--input",
                str(root / "fixture" / f"corpus_{which}.jsonl"),
                "--tag",
                tag,
                "--out",
                str(root / f"{tag}.clean.jsonl"),
            ]
        )
        assert code == 0
    return root


def test_unknown_subcommand_exits_1(capsys):
    assert main(["frobnicate"]) == 1
    assert "Usage" in capsys.readouterr().err


def test_missing_input_exits_2_naming_path(capsys):
    code = main(["ingest", "--input", "/nonexistent/raw.jsonl", "--tag", "x", "--out", "/tmp/o"])
    assert code == 2
    assert "/nonexistent/raw.jsonl" in capsys.readouterr().err


def test_stats_command(workdir, capsys):
    code = main(
        [
            "stats",
            "--clean",
            str(workdir / "fall2020.clean.jsonl"),
            "--clean",
            str(workdir / "spring2021.clean.jsonl"),
            "--out-base",
            str(workdir / "stats"),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "Number of tweets" in out
    assert (workdir / "stats.csv").exists()
    assert (workdir / "stats.json").exists()


def test_terms_rank_and_diff(workdir):
    rank_csv = workdir / "rank.csv"
    assert (
        main(
            [
                "terms",
                "rank",
                "--clean",
                str(workdir / "fall2020.clean.jsonl"),
                "--kind",
                "hashtag",
                "--out",
                str(rank_csv),
            ]
        )
        == 0
    )
    records = terms.records_from_csv(rank_csv.read_text())
    assert records and records[0].kind == "hashtag"

    diff_csv = workdir / "diff.csv"
    assert (
        main(
            [
                "terms",
                "diff",
                "--clean-a",
                str(workdir / "fall2020.clean.jsonl"),
                "--clean-b",
                str(workdir / "spring2021.clean.jsonl"),
                "--kind",
                "hashtag",
                "--top-n",
                "5",
                "--out",
                str(diff_csv),
            ]
        )
        == 0
    )
    deltas = terms.deltas_from_csv(diff_csv.read_text())
    keys = [d.group_key for d in deltas]
    assert len(keys) == len(set(keys))


def test_terms_track_requires_set(workdir, capsys):
    code = main(
        [
            "terms",
            "track",
            "--clean-a",
            str(workdir / "fall2020.clean.jsonl"),
            "--clean-b",
            str(workdir / "spring2021.clean.jsonl"),
        ]
    )
    assert code == 1


def test_embed_cluster_flow_deterministic(workdir):
    """cluster fit twice with the same seed writes identical model files."""
    clean = str(workdir / "fall2020.clean.jsonl")
    model_bin = workdir / "emb.bin"
    args = [
        "embed",
        "train",
        "--clean",
        clean,
        "--out",
        str(model_bin),
        "--dim",
        "12",
        "--epochs",
        "2",
        "--bucket-count",
        "4096",
        "--seed",
        "42",
    ]
    assert main(args) == 0
    vec_bin = workdir / "emb.vec"
    assert main(["embed", "apply", "--clean", clean, "--model", str(model_bin), "--out", str(vec_bin)]) == 0

    out1 = workdir / "cl1.json"
    out2 = workdir / "cl2.json"
    for out in (out1, out2):
        code = main(
            [
                "cluster",
                "fit",
                "--vectors",
                str(vec_bin),
                "--k",
                "5",
                "--seed",
                "42",
                "--out",
                str(out),
            ]
        )
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()

    sample_out = workdir / "sample.json"
    assert (
        main(
            [
                "cluster",
                "sample",
                "--model",
                str(out1),
                "--cluster",
                "0",
                "--n",
                "10",
                "--seed",
                "1",
                "--out",
                str(sample_out),
            ]
        )
        == 0
    )
    payload = json.loads(sample_out.read_text())
    assert payload["cluster"] == 0 and payload["post_ids"]


def test_cluster_sample_bad_index_exits_2(workdir, capsys):
    # reuse model from the deterministic test
    model = workdir / "cl1.json"
    code = main(
        ["cluster", "sample", "--model", str(model), "--cluster", "99", "--n", "5", "--seed", "1"]
    )
    assert code == 2


def test_sentiment_commands(workdir):
    clean = str(workdir / "fall2020.clean.jsonl")
    fig_csv = workdir / "figures.csv"
    assert main(["sentiment", "figures", "--clean", clean, "--out", str(fig_csv)]) == 0
    assert fig_csv.read_text().splitlines()[0] == "figure,positive,negative,neutral,total"

    ext_json = workdir / "ext.json"
    assert (
        main(
            [
                "sentiment",
                "extremes",
                "--clean",
                clean,
                "--figure",
                "biden",
                "--polarity",
                "positive",
                "--n",
                "3",
                "--seed",
                "1",
                "--out",
                str(ext_json),
            ]
        )
        == 0
    )
    json.loads(ext_json.read_text())


def test_report_commands(workdir):
    diff_csv = workdir / "diff.csv"
    bump = workdir / "bump.svg"
    assert main(["report", "bump", "--deltas", str(diff_csv), "--top-n", "5", "--out", str(bump)]) == 0
    assert bump.read_text().startswith("<svg")
    bars = workdir / "bars.svg"
    assert main(["report", "bars", "--deltas", str(diff_csv), "--out", str(bars)]) == 0
    assert bars.read_text().startswith("<svg")


def test_report_tables_requires_input(workdir):
    assert main(["report", "tables", "--out-base", str(workdir / "t")]) == 1


def test_pipeline_run_produces_report_dir(workdir, tmp_path):
    config = tmp_path / "cfg.toml"
    config.write_text(
        f"""
[corpus_a]
path = "{workdir / 'fixture' / 'corpus_fall.jsonl'}"
tag = "fall2020"
k = 5

[corpus_b]
path = "{workdir / 'fixture' / 'corpus_spring.jsonl'}"
tag = "spring2021"
k = 5

[embed]
dim = 12
epochs = 2
bucket_count = 4096

[run]
seed = 42
threads = 1
""",
        encoding="utf-8",
    )
    out = tmp_path / "run"
    assert main(["pipeline", "run", "--config", str(config), "--out", str(out)]) == 0

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 42
    assert len(manifest["inputs_sha256"]) == 2

    shared = terms.deltas_from_csv((out / "terms" / "shared_change.csv").read_text())
    by_key = {d.group_key: d for d in shared}
    assert by_key["mandate"].pp_change == pytest.approx(1.0, abs=0.05)
    assert by_key["curfew"].pp_change == pytest.approx(-1.0, abs=0.05)
    for name in (
        "figures/bump_hashtags.svg",
        "figures/bars_orgs.svg",
        "embed/fall2020.model.bin",
        "cluster/spring2021.model.json",
        "sentiment/fall2020.figures.csv",
        "stats/stats.txt",
    ):
        assert (out / name).exists(), name


def test_pipeline_missing_config_exits_2():
    assert main(["pipeline", "run", "--config", "/nope.toml", "--out", "/tmp/x"]) == 2
