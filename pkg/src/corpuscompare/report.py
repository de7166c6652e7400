"""Deterministic figure/table emitters: bump charts, change bars, CSV and aligned text tables."""

from __future__ import annotations

import csv
import io
from typing import Sequence

from .annotate import PrevalenceTable
from .ingest import CorpusStats
from .sentiment import FigureReport
from .terms import RankDelta

ROW_HEIGHT = 22
FONT = "font-family:monospace;font-size:12px"


def _svg_open(width: int, height: int, title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<style>text{{{FONT}}}</style>",
        f'<text x="{width / 2:.1f}" y="16" text-anchor="middle" font-weight="bold">{_esc(title)}</text>',
    ]


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def bump_chart(
    deltas: Sequence[RankDelta],
    top_n: int,
    label_a: str = "A",
    label_b: str = "B",
    title: str = "Rank movement",
) -> str:
    """Two ranked columns with lines connecting keys present in both top-n lists."""
    width = 640
    max_rank = 0
    for d in deltas:
        for r in (d.rank_a, d.rank_b):
            if r is not None and r <= top_n:
                max_rank = max(max_rank, r)
    height = 60 + max_rank * ROW_HEIGHT if max_rank else 80

    parts = _svg_open(width, height, title)
    left_x = 40.0
    right_x = width - 40.0
    line_x1 = 230.0
    line_x2 = width - 230.0
    top = 44.0

    def y_of(rank: int) -> float:
        return top + (rank - 1) * ROW_HEIGHT

    parts.append(f'<text x="{left_x:.1f}" y="{top - 14:.1f}">{_esc(label_a)}</text>')
    parts.append(
        f'<text x="{right_x:.1f}" y="{top - 14:.1f}" text-anchor="end">{_esc(label_b)}</text>'
    )

    for d in sorted(deltas, key=lambda d: d.group_key):
        in_a = d.rank_a is not None and d.rank_a <= top_n
        in_b = d.rank_b is not None and d.rank_b <= top_n
        if in_a:
            y = y_of(d.rank_a)
            parts.append(
                f'<text x="{left_x:.1f}" y="{y:.1f}">{d.rank_a}. {_esc(d.group_key)}</text>'
            )
        if in_b:
            y = y_of(d.rank_b)
            parts.append(
                f'<text x="{right_x:.1f}" y="{y:.1f}" text-anchor="end">'
                f"{d.rank_b}. {_esc(d.group_key)}</text>"
            )
        if in_a and in_b:
            y1 = y_of(d.rank_a) - 4
            y2 = y_of(d.rank_b) - 4
            parts.append(
                f'<line x1="{line_x1:.1f}" y1="{y1:.1f}" x2="{line_x2:.1f}" y2="{y2:.1f}" '
                'stroke="#777" stroke-width="1"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def change_bars(deltas: Sequence[RankDelta], mode: str = "pp", title: str = "Prevalence change") -> str:
    """Horizontal signed bars per key, ordered by prevalence in the first corpus."""
    if mode not in ("pp", "relative"):
        raise ValueError(f"mode must be 'pp' or 'relative', got {mode!r}")
    ordered = sorted(deltas, key=lambda d: (-d.prevalence_a, d.group_key))
    values: list[tuple[str, float | None]] = []
    for d in ordered:
        values.append((d.group_key, d.pp_change if mode == "pp" else d.rel_change))

    width = 640
    height = 70 + len(values) * ROW_HEIGHT
    parts = _svg_open(width, height, title)
    axis_label = "percentage points" if mode == "pp" else "relative change"
    parts.append(f'<text x="{width / 2:.1f}" y="32" text-anchor="middle">{_esc(axis_label)}</text>')

    label_x = 8.0
    region_left = 170.0
    region_right = width - 70.0
    zero_x = (region_left + region_right) / 2
    half = (region_right - region_left) / 2 - 4
    max_abs = max((abs(v) for _, v in values if v is not None), default=0.0)
    scale = half / max_abs if max_abs > 0 else 0.0

    top = 48.0
    parts.append(
        f'<line x1="{zero_x:.1f}" y1="{top:.1f}" x2="{zero_x:.1f}" '
        f'y2="{top + len(values) * ROW_HEIGHT:.1f}" stroke="#999" stroke-width="1"/>'
    )
    for i, (key, value) in enumerate(values):
        y = top + i * ROW_HEIGHT + 4
        parts.append(f'<text x="{label_x:.1f}" y="{y + 11:.1f}">{_esc(key)}</text>')
        if value is None:
            parts.append(f'<text x="{zero_x + 6:.1f}" y="{y + 11:.1f}" fill="#999">n/a</text>')
            continue
        px = value * scale
        x = zero_x + px if px < 0 else zero_x
        bar_w = abs(px)
        fill = "#3a7d44" if value >= 0 else "#b4443c"
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.1f}" width="{bar_w:.2f}" height="14" fill="{fill}"/>'
        )
        tx = zero_x + px + (6 if value >= 0 else -6)
        anchor = "start" if value >= 0 else "end"
        parts.append(
            f'<text x="{tx:.2f}" y="{y + 11:.1f}" text-anchor="{anchor}">{value:+.4f}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# --- tables ---

STATS_COLUMNS = ("dataset_tag", "category", "tweets", "unique_users", "hashtags_total", "hashtags_unique")
PREVALENCE_COLUMNS = ("label", "count", "percentage")
FIGURE_COLUMNS = ("figure", "positive", "negative", "neutral", "total")

_CATEGORIES = ("retweets", "nonretweets", "total")
_CATEGORY_TITLES = {"retweets": "Retweets", "nonretweets": "Non-retweets", "total": "Total"}


def stats_to_csv(stats_list: Sequence[CorpusStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(STATS_COLUMNS)
    for stats in stats_list:
        for cat in _CATEGORIES:
            c = getattr(stats, cat)
            w.writerow([stats.dataset_tag, cat, c.n, c.unique_users, c.hashtags_total, c.hashtags_unique])
    return buf.getvalue()


def stats_from_csv(text: str) -> list[dict]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != STATS_COLUMNS:
        raise ValueError("not a stats CSV")
    return [
        {
            "dataset_tag": r[0],
            "category": r[1],
            "tweets": int(r[2]),
            "unique_users": int(r[3]),
            "hashtags_total": int(r[4]),
            "hashtags_unique": int(r[5]),
        }
        for r in rows[1:]
        if r
    ]


def _aligned(rows: list[list[str]], right_from: int = 1) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = []
        for i, cell in enumerate(r):
            w = widths[i]
            cells.append(cell.rjust(w) if i >= right_from else cell.ljust(w))
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def stats_text_table(stats_list: Sequence[CorpusStats]) -> str:
    """Aligned table mirroring the dataset-statistics layout; pairs joined with ' / '."""

    def fmt(values: list[int]) -> str:
        return " / ".join(f"{v:,}" for v in values)

    rows = [["Data", "Number of tweets", "Number of unique user IDs", "Hashtags (total)", "Hashtags (unique)"]]
    for cat in _CATEGORIES:
        cs = [getattr(s, cat) for s in stats_list]
        rows.append(
            [
                _CATEGORY_TITLES[cat],
                fmt([c.n for c in cs]),
                fmt([c.unique_users for c in cs]),
                fmt([c.hashtags_total for c in cs]),
                fmt([c.hashtags_unique for c in cs]),
            ]
        )
    return _aligned(rows)


def prevalence_to_csv(table: PrevalenceTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(PREVALENCE_COLUMNS)
    for r in table.rows:
        w.writerow([r.label, r.count, repr(r.percentage)])
    return buf.getvalue()


def prevalence_from_csv(text: str) -> list[dict]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != PREVALENCE_COLUMNS:
        raise ValueError("not a prevalence CSV")
    return [
        {"label": r[0], "count": int(r[1]), "percentage": float(r[2])} for r in rows[1:] if r
    ]


def prevalence_text_table(table: PrevalenceTable) -> str:
    rows = [["Vaccine Hesitancy Reason/Label", "Positively labeled", "Percentage"]]
    for r in table.rows:
        rows.append([r.label, str(r.count), f"{r.percentage}%"])
    rows.append(
        ["Total", f"{table.total_labeled} (out of {table.total_sampled})", "100%"]
    )
    return _aligned(rows)


def figures_to_csv(reports: Sequence[FigureReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(FIGURE_COLUMNS)
    for r in reports:
        w.writerow([r.figure, repr(r.positive), repr(r.negative), repr(r.neutral), r.total])
    return buf.getvalue()


def figures_from_csv(text: str) -> list[FigureReport]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != FIGURE_COLUMNS:
        raise ValueError("not a figure-report CSV")
    return [
        FigureReport(
            figure=r[0],
            positive=float(r[1]),
            negative=float(r[2]),
            neutral=float(r[3]),
            total=int(r[4]),
        )
        for r in rows[1:]
        if r
    ]


def figures_text_table(reports: Sequence[FigureReport]) -> str:
    rows = [["Figure", "Positive", "Negative", "Neutral", "Total tweets"]]
    for r in reports:
        rows.append(
            [r.figure, f"{r.positive:.2f}", f"{r.negative:.2f}", f"{r.neutral:.2f}", f"{r.total:,}"]
        )
    return _aligned(rows)
