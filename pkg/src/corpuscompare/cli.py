"""Command-line interface: subcommands per analytics stage plus the full two-corpus pipeline."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import sys
from pathlib import Path

import click

from . import annotate as annotate_mod
from . import cluster as cluster_mod
from . import embed as embed_mod
from . import fixtures as fixtures_mod
from . import ingest as ingest_mod
from . import report as report_mod
from . import sentiment as sentiment_mod
from . import terms as terms_mod
from . import textprep
from .config import PipelineConfig, load_config
from .ingest import DataError

PACKAGE_VERSION = "0.1.0"


@click.group()
def cli():
    """Comparative corpus analytics over two time-separated post datasets."""


# --- ingest ---


@cli.command("ingest")
@click.option("--input", "input_path", required=True, help="raw JSONL corpus")
@click.option("--tag", required=True, help="dataset tag, e.g. fall2020")
@click.option("--out", "out_path", required=True, help="clean-post JSONL output")
@click.option("--report", "report_path", default=None, help="filter report JSON output")
@click.option("--keyword-filter/--no-keyword-filter", default=False, help="apply the bundled collection phrases")
def ingest_cmd(input_path, tag, out_path, report_path, keyword_filter):
    """Load, filter, and normalize a raw corpus."""
    phrases = textprep.collection_phrases() if keyword_filter else None
    loaded = ingest_mod.load_corpus(input_path, tag, keyword_filter=phrases)
    survivors, report = ingest_mod.filter_cascade(loaded.posts)
    clean = ingest_mod.normalize_corpus(survivors, tag)
    ingest_mod.write_clean_posts(clean, out_path)
    payload = report.to_dict()
    payload["skipped_lines"] = loaded.skipped_count
    payload["normalized"] = len(clean)
    if report_path:
        Path(report_path).write_text(json.dumps(payload, sort_keys=True, indent=1), encoding="utf-8")
    click.echo(json.dumps(payload, sort_keys=True))


@cli.command("stats")
@click.option("--clean", "clean_paths", multiple=True, required=True, help="clean-post JSONL (repeatable)")
@click.option("--out-base", default=None, help="write <base>.csv/.txt/.json")
def stats_cmd(clean_paths, out_base):
    """Corpus statistics in the dataset-statistics table shape."""
    stats = []
    for path in clean_paths:
        posts = ingest_mod.read_clean_posts(path)
        stats.append(ingest_mod.corpus_stats(posts))
    text = report_mod.stats_text_table(stats)
    if out_base:
        base = Path(out_base)
        base.parent.mkdir(parents=True, exist_ok=True)
        Path(f"{base}.csv").write_text(report_mod.stats_to_csv(stats), encoding="utf-8")
        Path(f"{base}.txt").write_text(text, encoding="utf-8")
        Path(f"{base}.json").write_text(
            json.dumps([s.to_dict() for s in stats], sort_keys=True, indent=1), encoding="utf-8"
        )
    click.echo(text, nl=False)


# --- terms ---


@cli.group("terms")
def terms_group():
    """Keyword/hashtag ranking and cross-corpus trend analytics."""


def _load_records(path, kind, grouping):
    posts = ingest_mod.read_clean_posts(path)
    table = terms_mod.GroupingTable.from_file(grouping) if grouping else terms_mod.GroupingTable.default()
    return terms_mod.term_prevalence(posts, kind, table)


@terms_group.command("rank")
@click.option("--clean", "clean_path", required=True)
@click.option("--kind", type=click.Choice(["keyword", "hashtag"]), default="keyword")
@click.option("--grouping", default=None, help="grouping table TSV (default: bundled)")
@click.option("--out", "out_path", default=None)
def terms_rank(clean_path, kind, grouping, out_path):
    """Rank terms by tweet frequency."""
    records = _load_records(clean_path, kind, grouping)
    payload = terms_mod.records_to_csv(records)
    _write_or_echo(payload, out_path)


@terms_group.command("diff")
@click.option("--clean-a", required=True)
@click.option("--clean-b", required=True)
@click.option("--kind", type=click.Choice(["keyword", "hashtag"]), default="keyword")
@click.option("--top-n", default=30, show_default=True)
@click.option("--grouping", default=None)
@click.option("--out", "out_path", default=None)
def terms_diff(clean_a, clean_b, kind, top_n, grouping, out_path):
    """Rank movement between two corpora."""
    records_a = _load_records(clean_a, kind, grouping)
    records_b = _load_records(clean_b, kind, grouping)
    deltas = terms_mod.rank_diff(records_a, records_b, top_n)
    _write_or_echo(terms_mod.deltas_to_csv(deltas), out_path)


@terms_group.command("track")
@click.option("--clean-a", required=True)
@click.option("--clean-b", required=True)
@click.option("--set", "term_set", type=click.Choice(["orgs", "emotion"]), default=None)
@click.option("--terms", "term_list", default=None, help="comma-separated group keys")
@click.option("--grouping", default=None)
@click.option("--out", "out_path", default=None)
def terms_track(clean_a, clean_b, term_set, term_list, grouping, out_path):
    """Prevalence deltas for a fixed keyword set."""
    if term_list:
        tracked = tuple(t.strip() for t in term_list.split(",") if t.strip())
    elif term_set == "orgs":
        tracked = terms_mod.ORGANIZATION_TERMS
    elif term_set == "emotion":
        tracked = terms_mod.EMOTION_TERMS
    else:
        raise click.UsageError("provide --set or --terms")
    records_a = _load_records(clean_a, "keyword", grouping)
    records_b = _load_records(clean_b, "keyword", grouping)
    deltas = terms_mod.track_term_set(records_a, records_b, tracked)
    _write_or_echo(terms_mod.deltas_to_csv(deltas), out_path)


# --- embed ---


@cli.group("embed")
def embed_group():
    """Subword embedding training and post vectorization."""


def _embed_config(dim, window, negatives, epochs, min_count, bucket_count, learning_rate, seed):
    return embed_mod.EmbedConfig(
        dim=dim,
        window=window,
        negatives=negatives,
        epochs=epochs,
        min_count=min_count,
        bucket_count=bucket_count,
        learning_rate=learning_rate,
        seed=seed,
    )


@embed_group.command("train")
@click.option("--clean", "clean_path", required=True)
@click.option("--out", "out_path", required=True)
@click.option("--dim", default=25, show_default=True)
@click.option("--window", default=5, show_default=True)
@click.option("--negatives", default=5, show_default=True)
@click.option("--epochs", default=5, show_default=True)
@click.option("--min-count", default=5, show_default=True)
@click.option("--bucket-count", default=1 << 21, show_default=True)
@click.option("--learning-rate", default=0.025, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--engine", type=click.Choice(["auto", "fast", "numpy"]), default="auto")
@click.option("--threads", default=1, show_default=True, help="1 = deterministic")
def embed_train(clean_path, out_path, dim, window, negatives, epochs, min_count, bucket_count, learning_rate, seed, engine, threads):
    """Train a subword embedding model on a clean corpus."""
    posts = ingest_mod.read_clean_posts(clean_path)
    streams = textprep.streams_from_posts(posts)
    cfg = _embed_config(dim, window, negatives, epochs, min_count, bucket_count, learning_rate, seed)
    model = embed_mod.train(streams, cfg, engine=engine, workers=threads)
    embed_mod.save_model(model, out_path)
    click.echo(
        json.dumps(
            {"vocab_size": len(model.vocab), "epoch_losses": model.epoch_losses, "engine": engine},
            sort_keys=True,
        )
    )


@embed_group.command("apply")
@click.option("--clean", "clean_path", required=True)
@click.option("--model", "model_path", required=True)
@click.option("--out", "out_path", required=True)
def embed_apply(clean_path, model_path, out_path):
    """Mean-pool post vectors for every embeddable post."""
    posts = ingest_mod.read_clean_posts(clean_path)
    model = embed_mod.load_model(model_path)
    vectors = embed_mod.embed_corpus(posts, model)
    embed_mod.save_doc_vectors(vectors, out_path)
    click.echo(json.dumps({"embedded": len(vectors), "skipped": len(posts) - len(vectors)}))


# --- cluster ---


@cli.group("cluster")
def cluster_group():
    """k-means over post vectors and cluster sampling."""


@cluster_group.command("fit")
@click.option("--vectors", "vectors_path", required=True)
@click.option("--k", required=True, type=int)
@click.option("--seed", default=42, show_default=True)
@click.option("--n-init", default=10, show_default=True)
@click.option("--max-iter", default=300, show_default=True)
@click.option("--tol", default=1e-4, show_default=True)
@click.option("--out", "out_path", required=True)
def cluster_fit(vectors_path, k, seed, n_init, max_iter, tol, out_path):
    """Fit seeded k-means and persist the model as JSON."""
    vectors = embed_mod.load_doc_vectors(vectors_path)
    model = cluster_mod.kmeans(vectors, k=k, seed=seed, n_init=n_init, max_iter=max_iter, tol=tol)
    model.save(out_path)
    click.echo(json.dumps({"k": k, "inertia": model.inertia, "iterations": model.iterations_run}))


@cluster_group.command("sample")
@click.option("--model", "model_path", required=True)
@click.option("--cluster", "cluster_index", required=True, type=int)
@click.option("--n", default=100, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--out", "out_path", default=None)
def cluster_sample(model_path, cluster_index, n, seed, out_path):
    """Sample post ids from one cluster."""
    model = cluster_mod.ClusterModel.load(model_path)
    try:
        sample = cluster_mod.sample_cluster(model, cluster_index, n=n, seed=seed)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    _write_or_echo(cluster_mod.sample_to_json(sample), out_path)


# --- sentiment ---


@cli.group("sentiment")
def sentiment_group():
    """Lexicon sentiment scoring, figure reports, extreme samples."""


@sentiment_group.command("score")
@click.option("--clean", "clean_path", required=True)
@click.option("--out", "out_path", default=None)
def sentiment_score(clean_path, out_path):
    """Per-post compound score, bucket, and extreme flag as CSV."""
    posts = ingest_mod.read_clean_posts(clean_path)
    lexicon = sentiment_mod.SentimentLexicon.load()
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["post_id", "compound", "bucket", "extreme"])
    for p in posts:
        r = sentiment_mod.score_post(p, lexicon)
        w.writerow([r.post_id, repr(r.compound), r.bucket, r.extreme])
    _write_or_echo(buf.getvalue(), out_path)


@sentiment_group.command("figures")
@click.option("--clean", "clean_path", required=True)
@click.option("--figures", "figure_list", default="biden,trump,fauci", show_default=True)
@click.option("--out", "out_path", default=None)
def sentiment_figures(clean_path, figure_list, out_path):
    """Bucket ratios for posts mentioning each figure."""
    posts = ingest_mod.read_clean_posts(clean_path)
    lexicon = sentiment_mod.SentimentLexicon.load()
    figures = [f.strip() for f in figure_list.split(",") if f.strip()]
    reports = sentiment_mod.figure_report(posts, figures, lexicon)
    _write_or_echo(report_mod.figures_to_csv(reports), out_path)


@sentiment_group.command("extremes")
@click.option("--clean", "clean_path", required=True)
@click.option("--figure", required=True)
@click.option("--polarity", type=click.Choice(["positive", "negative"]), required=True)
@click.option("--n", default=10, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--out", "out_path", default=None)
def sentiment_extremes(clean_path, figure, polarity, n, seed, out_path):
    """Sample posts with |compound| beyond 0.9 mentioning a figure."""
    posts = ingest_mod.read_clean_posts(clean_path)
    lexicon = sentiment_mod.SentimentLexicon.load()
    sample = sentiment_mod.extreme_samples(posts, figure, polarity, n, seed, lexicon)
    payload = json.dumps(
        [{"post_id": p.id, "text": p.normalized_text} for p in sample], sort_keys=True, indent=1
    )
    _write_or_echo(payload, out_path)


# --- annotate ---


@cli.group("annotate")
def annotate_group():
    """Human labeling service."""


@annotate_group.command("serve")
@click.option("--clean", "clean_path", required=True)
@click.option("--model", "model_path", required=True)
@click.option("--store", "store_path", required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8077, show_default=True)
@click.option("--static", "static_dir", default=None, help="serve a built UI from this directory")
def annotate_serve(clean_path, model_path, store_path, host, port, static_dir):
    """Serve the /v1 labeling API until interrupted."""
    posts = ingest_mod.read_clean_posts(clean_path)
    model = cluster_mod.ClusterModel.load(model_path)
    store = annotate_mod.AnnotationStore(store_path)
    try:
        annotate_mod.serve(store, model, posts, host=host, port=port, static_dir=static_dir)
    except ValueError as exc:
        raise DataError(str(exc)) from exc


# --- report ---


@cli.group("report")
def report_group():
    """Render figures and tables from analytics outputs."""


@report_group.command("bump")
@click.option("--deltas", "deltas_path", required=True, help="rank-delta CSV")
@click.option("--top-n", default=30, show_default=True)
@click.option("--label-a", default="A")
@click.option("--label-b", default="B")
@click.option("--title", default="Rank movement")
@click.option("--out", "out_path", required=True)
def report_bump(deltas_path, top_n, label_a, label_b, title, out_path):
    """Bump chart SVG from a rank-diff CSV."""
    deltas = terms_mod.deltas_from_csv(_read_text(deltas_path))
    svg = report_mod.bump_chart(deltas, top_n, label_a=label_a, label_b=label_b, title=title)
    Path(out_path).write_text(svg, encoding="utf-8")
    click.echo(out_path)


@report_group.command("bars")
@click.option("--deltas", "deltas_path", required=True)
@click.option("--mode", type=click.Choice(["pp", "relative"]), default="pp", show_default=True)
@click.option("--title", default="Prevalence change")
@click.option("--out", "out_path", required=True)
def report_bars(deltas_path, mode, title, out_path):
    """Signed horizontal bars from a delta CSV."""
    deltas = terms_mod.deltas_from_csv(_read_text(deltas_path))
    svg = report_mod.change_bars(deltas, mode=mode, title=title)
    Path(out_path).write_text(svg, encoding="utf-8")
    click.echo(out_path)


@report_group.command("tables")
@click.option("--stats", "stats_json", default=None, help="stats JSON from the stats command")
@click.option("--annotations", "annotations_path", default=None, help="annotation log JSONL")
@click.option("--dataset", default=None, help="dataset tag for --annotations")
@click.option("--figures", "figures_csv", default=None, help="figure-report CSV")
@click.option("--out-base", required=True)
def report_tables(stats_json, annotations_path, dataset, figures_csv, out_base):
    """Emit CSV + aligned-text tables."""
    if not any((stats_json, annotations_path, figures_csv)):
        raise click.UsageError("provide --stats, --annotations, or --figures")
    base = Path(out_base)
    base.parent.mkdir(parents=True, exist_ok=True)
    if stats_json:
        raw = json.loads(_read_text(stats_json))
        stats = [_stats_from_dict(d) for d in raw]
        Path(f"{base}.stats.csv").write_text(report_mod.stats_to_csv(stats), encoding="utf-8")
        Path(f"{base}.stats.txt").write_text(report_mod.stats_text_table(stats), encoding="utf-8")
    if annotations_path:
        store = annotate_mod.AnnotationStore(annotations_path)
        table = store.prevalence(dataset)
        Path(f"{base}.prevalence.csv").write_text(report_mod.prevalence_to_csv(table), encoding="utf-8")
        Path(f"{base}.prevalence.txt").write_text(report_mod.prevalence_text_table(table), encoding="utf-8")
    if figures_csv:
        reports = report_mod.figures_from_csv(_read_text(figures_csv))
        Path(f"{base}.figures.csv").write_text(report_mod.figures_to_csv(reports), encoding="utf-8")
        Path(f"{base}.figures.txt").write_text(report_mod.figures_text_table(reports), encoding="utf-8")
    click.echo(str(base))


def _stats_from_dict(d: dict) -> ingest_mod.CorpusStats:
    def cat(c):
        return ingest_mod.CategoryCounts(
            n=c["n"],
            unique_users=c["unique_users"],
            hashtags_total=c["hashtags_total"],
            hashtags_unique=c["hashtags_unique"],
        )

    return ingest_mod.CorpusStats(
        dataset_tag=d["dataset_tag"],
        retweets=cat(d["retweets"]),
        nonretweets=cat(d["nonretweets"]),
        total=cat(d["total"]),
    )


# --- fixture ---


@cli.command("fixture")
@click.option("--out", "out_dir", required=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--size", default=5000, show_default=True, help="posts per corpus")
def fixture_cmd(out_dir, seed, size):
    """Generate the synthetic two-corpus fixture."""
    paths = fixtures_mod.generate_fixture(out_dir, seed=seed, posts_per_corpus=size)
    click.echo(json.dumps({"corpus_a": str(paths.corpus_a), "corpus_b": str(paths.corpus_b), "planted": str(paths.planted)}))


# --- pipeline ---


@cli.group("pipeline")
def pipeline_group():
    """End-to-end comparative runs."""


@pipeline_group.command("run")
@click.option("--config", "config_path", required=True)
@click.option("--out", "out_dir", required=True)
@click.option("--seed", default=None, type=int, help="override the config seed")
@click.option("--threads", default=None, type=int, help="override config threads (1 = deterministic)")
def pipeline_run(config_path, out_dir, seed, threads):
    """Run the full comparative pipeline over two corpora."""
    cfg = load_config(config_path)
    if seed is not None:
        cfg.seed = seed
    if threads is not None:
        cfg.threads = threads
    run_pipeline(cfg, Path(out_dir))
    click.echo(str(out_dir))


def run_pipeline(cfg: PipelineConfig, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for sub in ("ingest", "stats", "terms", "figures", "embed", "cluster", "sentiment"):
        (out / sub).mkdir(exist_ok=True)

    grouping = terms_mod.GroupingTable.default()
    lexicon = sentiment_mod.SentimentLexicon.load()
    phrases = textprep.collection_phrases() if cfg.keyword_filter else None

    corpora = {}
    stats_list = []
    input_digests = {}
    for spec in (cfg.corpus_a, cfg.corpus_b):
        path = Path(spec.path)
        input_digests[str(spec.path)] = _sha256_file(path)
        loaded = ingest_mod.load_corpus(path, spec.tag, keyword_filter=phrases)
        survivors, freport = ingest_mod.filter_cascade(loaded.posts)
        clean = ingest_mod.normalize_corpus(survivors, spec.tag)
        corpora[spec.tag] = clean
        ingest_mod.write_clean_posts(clean, out / "ingest" / f"{spec.tag}.clean.jsonl")
        payload = freport.to_dict()
        payload["skipped_lines"] = loaded.skipped_count
        payload["normalized"] = len(clean)
        (out / "ingest" / f"{spec.tag}.filter.json").write_text(
            json.dumps(payload, sort_keys=True, indent=1), encoding="utf-8"
        )
        stats_list.append(ingest_mod.corpus_stats(clean))

    (out / "stats" / "stats.csv").write_text(report_mod.stats_to_csv(stats_list), encoding="utf-8")
    (out / "stats" / "stats.txt").write_text(report_mod.stats_text_table(stats_list), encoding="utf-8")
    (out / "stats" / "stats.json").write_text(
        json.dumps([s.to_dict() for s in stats_list], sort_keys=True, indent=1), encoding="utf-8"
    )

    tag_a, tag_b = cfg.corpus_a.tag, cfg.corpus_b.tag
    records = {}
    for tag in (tag_a, tag_b):
        for kind in ("keyword", "hashtag"):
            recs = terms_mod.term_prevalence(corpora[tag], kind, grouping)
            records[(tag, kind)] = recs
            (out / "terms" / f"{kind}s_{tag}.csv").write_text(
                terms_mod.records_to_csv(recs), encoding="utf-8"
            )

    for kind in ("keyword", "hashtag"):
        deltas = terms_mod.rank_diff(records[(tag_a, kind)], records[(tag_b, kind)], cfg.top_n)
        (out / "terms" / f"rank_diff_{kind}s.csv").write_text(
            terms_mod.deltas_to_csv(deltas), encoding="utf-8"
        )
        (out / "figures" / f"bump_{kind}s.svg").write_text(
            report_mod.bump_chart(
                deltas, cfg.top_n, label_a=tag_a, label_b=tag_b, title=f"Top {kind}s"
            ),
            encoding="utf-8",
        )

    shared = terms_mod.shared_keyword_change(
        records[(tag_a, "keyword")], records[(tag_b, "keyword")], cfg.min_prevalence
    )
    (out / "terms" / "shared_change.csv").write_text(terms_mod.deltas_to_csv(shared), encoding="utf-8")
    (out / "figures" / "bars_shared.svg").write_text(
        report_mod.change_bars(shared, title="Shared keyword change"), encoding="utf-8"
    )

    emotion_records_a = [r for r in records[(tag_a, "keyword")]]
    emotion = terms_mod.track_term_set(
        emotion_records_a, records[(tag_b, "keyword")], terms_mod.EMOTION_TERMS
    )
    emotion = [d for d in emotion if max(d.prevalence_a, d.prevalence_b) >= cfg.emotion_min_prevalence]
    (out / "terms" / "emotion_change.csv").write_text(terms_mod.deltas_to_csv(emotion), encoding="utf-8")
    (out / "figures" / "bars_emotion.svg").write_text(
        report_mod.change_bars(emotion, title="Emotion keyword change"), encoding="utf-8"
    )

    orgs = terms_mod.track_term_set(
        records[(tag_a, "keyword")], records[(tag_b, "keyword")], terms_mod.ORGANIZATION_TERMS
    )
    (out / "terms" / "orgs_change.csv").write_text(terms_mod.deltas_to_csv(orgs), encoding="utf-8")
    (out / "figures" / "bars_orgs.svg").write_text(
        report_mod.change_bars(orgs, title="Organization keyword change"), encoding="utf-8"
    )

    stops = textprep.english_stopwords()
    extra = textprep.task_stopwords()
    for tag in (tag_a, tag_b):
        streams = [
            textprep.TokenStream(post_id=p.id, tokens=tuple(terms_mod.keyword_tokens(p, stops, extra)))
            for p in corpora[tag]
        ]
        streams = [s for s in streams if s.tokens]
        tfidf = terms_mod.fit_tfidf(streams, max_features=cfg.max_features)
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["feature", "idf"])
        for feat, idf in zip(tfidf.vocabulary, tfidf.idf):
            w.writerow([feat, repr(float(idf))])
        (out / "terms" / f"tfidf_{tag}.csv").write_text(buf.getvalue(), encoding="utf-8")

    embed_cfg = embed_mod.EmbedConfig(
        dim=cfg.dim,
        window=cfg.window,
        negatives=cfg.negatives,
        epochs=cfg.epochs,
        min_count=cfg.min_count,
        subword_min=cfg.subword_min,
        subword_max=cfg.subword_max,
        bucket_count=cfg.bucket_count,
        learning_rate=cfg.learning_rate,
        seed=cfg.seed,
    )
    for spec in (cfg.corpus_a, cfg.corpus_b):
        tag = spec.tag
        streams = textprep.streams_from_posts(corpora[tag])
        model = embed_mod.train(streams, embed_cfg, engine="auto", workers=cfg.threads)
        embed_mod.save_model(model, out / "embed" / f"{tag}.model.bin")
        vectors = embed_mod.embed_corpus(corpora[tag], model)
        embed_mod.save_doc_vectors(vectors, out / "embed" / f"{tag}.vectors.bin")

        cmodel = cluster_mod.kmeans(
            vectors,
            k=spec.k,
            seed=cfg.seed,
            n_init=cfg.n_init,
            max_iter=cfg.max_iter,
            tol=cfg.tol,
        )
        cmodel.save(out / "cluster" / f"{tag}.model.json")
        samples = {
            str(c): list(cluster_mod.sample_cluster(cmodel, c, n=cfg.sample_n, seed=cfg.seed).post_ids)
            for c in range(spec.k)
        }
        (out / "cluster" / f"{tag}.samples.json").write_text(
            json.dumps(samples, sort_keys=True, indent=1), encoding="utf-8"
        )

        reports = sentiment_mod.figure_report(corpora[tag], list(cfg.figures), lexicon)
        (out / "sentiment" / f"{tag}.figures.csv").write_text(
            report_mod.figures_to_csv(reports), encoding="utf-8"
        )
        (out / "sentiment" / f"{tag}.figures.txt").write_text(
            report_mod.figures_text_table(reports), encoding="utf-8"
        )
        extremes = {}
        for figure in cfg.figures:
            extremes[figure] = {
                polarity: [
                    p.id
                    for p in sentiment_mod.extreme_samples(
                        corpora[tag], figure, polarity, cfg.extreme_n, cfg.seed, lexicon
                    )
                ]
                for polarity in ("positive", "negative")
            }
        (out / "sentiment" / f"{tag}.extremes.json").write_text(
            json.dumps(extremes, sort_keys=True, indent=1), encoding="utf-8"
        )

    manifest = {
        "package_version": PACKAGE_VERSION,
        "config_sha256": cfg.digest(),
        "config": cfg.to_dict(),
        "inputs_sha256": input_digests,
        "seed": cfg.seed,
        "threads": cfg.threads,
        "fast_kernel": embed_mod.HAVE_FAST_KERNEL,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=1), encoding="utf-8")


def _sha256_file(path: Path) -> str:
    try:
        return hashlib.sha256(path.read_bytes()).hexdigest()
    except OSError as exc:
        raise DataError(f"cannot read input file: {path}") from exc


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read file: {path}") from exc


def _write_or_echo(payload: str, out_path) -> None:
    if out_path:
        p = Path(out_path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(payload, encoding="utf-8")
        click.echo(str(out_path))
    else:
        click.echo(payload, nl=False)


def main(argv=None) -> int:
    """Entry point with the documented exit codes: 0 ok, 1 usage, 2 data error."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except (DataError, OSError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
