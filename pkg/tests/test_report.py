import re
import xml.etree.ElementTree as ET

from corpuscompare import annotate, ingest, report, sentiment, terms


def delta(key, rank_a=None, rank_b=None, pa=0.0, pb=0.0):
    return terms.RankDelta(
        group_key=key,
        rank_a=rank_a,
        rank_b=rank_b,
        prevalence_a=pa,
        prevalence_b=pb,
        pp_change=100.0 * (pb - pa),
        rel_change=(pb - pa) / pa if pa > 0 else None,
    )


def svg_lines(svg):
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    return [el.attrib for el in root.iter(f"{ns}line")]


def svg_rects(svg):
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    return [el.attrib for el in root.iter(f"{ns}rect")]


# --- bump chart ---


def test_bump_chart_crossing_lines():
    deltas = [delta("one", 1, 2, 0.2, 0.1), delta("two", 2, 1, 0.1, 0.2)]
    svg = report.bump_chart(deltas, top_n=2)
    lines = svg_lines(svg)
    assert len(lines) == 2
    (l1, l2) = sorted(lines, key=lambda l: float(l["y1"]))
    # one goes down, the other up: the segments cross
    assert float(l1["y1"]) < float(l2["y1"])
    assert float(l1["y2"]) > float(l2["y2"])


def test_bump_chart_one_sided_entry():
    deltas = [delta("gone", 1, None, 0.2, 0.0)]
    svg = report.bump_chart(deltas, top_n=5)
    assert "1. gone" in svg
    assert svg_lines(svg) == []


def test_bump_chart_empty_is_valid_svg():
    svg = report.bump_chart([], top_n=10)
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")


def test_bump_chart_deterministic():
    deltas = [delta("a", 1, 3, 0.3, 0.1), delta("b", 2, 1, 0.2, 0.4)]
    assert report.bump_chart(deltas, 5) == report.bump_chart(deltas, 5)


def test_bump_chart_escapes_markup():
    deltas = [delta("a<b&c", 1, 1, 0.1, 0.1)]
    svg = report.bump_chart(deltas, 5)
    ET.fromstring(svg)  # parses despite hostile key


# --- change bars ---


def test_change_bars_zero_deltas():
    deltas = [delta("flat", pa=0.02, pb=0.02)]
    svg = report.change_bars(deltas)
    rects = svg_rects(svg)
    assert len(rects) == 1
    assert float(rects[0]["width"]) == 0.0


def test_change_bars_opposite_directions():
    deltas = [delta("up", pa=0.02, pb=0.04), delta("down", pa=0.04, pb=0.02)]
    svg = report.change_bars(deltas)
    rects = svg_rects(svg)
    assert len(rects) == 2
    fills = {r["fill"] for r in rects}
    assert len(fills) == 2  # one positive, one negative color
    # ordered by prevalence_a descending: 'down' (0.04) renders first
    assert svg.index(">down<") < svg.index(">up<")


def test_change_bars_byte_identical():
    deltas = [delta("k", pa=0.01, pb=0.03)]
    assert report.change_bars(deltas) == report.change_bars(deltas)


def test_change_bars_relative_mode_handles_none():
    deltas = [delta("new", pa=0.0, pb=0.02)]
    svg = report.change_bars(deltas, mode="relative")
    assert "n/a" in svg


def test_change_bars_bad_mode():
    import pytest

    with pytest.raises(ValueError):
        report.change_bars([], mode="nope")


# --- tables ---


def _stats():
    return ingest.CorpusStats(
        dataset_tag="fall2020",
        retweets=ingest.CategoryCounts(2, 2, 1, 1),
        nonretweets=ingest.CategoryCounts(3, 3, 4, 2),
        total=ingest.CategoryCounts(5, 4, 5, 3),
    )


def test_stats_csv_roundtrip():
    csv_text = report.stats_to_csv([_stats()])
    rows = report.stats_from_csv(csv_text)
    assert rows[2] == {
        "dataset_tag": "fall2020",
        "category": "total",
        "tweets": 5,
        "unique_users": 4,
        "hashtags_total": 5,
        "hashtags_unique": 3,
    }


def test_prevalence_table_shape():
    counts = {"blatantly refuse": 3, "covid-19 is common flu": 1}
    table = annotate.PrevalenceTable.from_counts(counts, annotate.LabelTaxonomy())
    csv_text = report.prevalence_to_csv(table)
    header = csv_text.splitlines()[0]
    assert header == "label,count,percentage"
    rows = report.prevalence_from_csv(csv_text)
    assert {r["label"]: r["count"] for r in rows}["blatantly refuse"] == 3
    text = report.prevalence_text_table(table)
    assert "Total" in text and "4" in text


def test_empty_figures_header_only():
    csv_text = report.figures_to_csv([])
    assert csv_text.strip() == "figure,positive,negative,neutral,total"


def test_figures_roundtrip():
    reports = [
        sentiment.FigureReport(figure="biden", positive=0.49, negative=0.26, neutral=0.25, total=100),
        sentiment.FigureReport(figure="trump", positive=0.4, negative=0.31, neutral=0.29, total=6088),
    ]
    back = report.figures_from_csv(report.figures_to_csv(reports))
    assert back == reports
    text = report.figures_text_table(reports)
    assert "6,088" in text
    assert text.splitlines()[0].startswith("Figure")


def test_stats_text_pairs_two_corpora():
    a = _stats()
    b = ingest.CorpusStats(
        dataset_tag="spring2021",
        retweets=ingest.CategoryCounts(20, 20, 10, 5),
        nonretweets=ingest.CategoryCounts(30, 25, 40, 8),
        total=ingest.CategoryCounts(50, 40, 50, 10),
    )
    text = report.stats_text_table([a, b])
    total_line = [l for l in text.splitlines() if l.startswith("Total")][0]
    assert "5 / 50" in total_line
