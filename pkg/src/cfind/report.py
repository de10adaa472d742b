"""Evaluation reports: delimited tables plus rendered figures.

The eval pipeline writes a TSV summary and per-method category table next to
a stacked-bar figure of the quality breakdown per candidate, mirroring the
on-screen output.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import CATEGORIES, QualityBreakdown

_CATEGORY_COLORS = {
    "C1": "#2a9d8f",
    "C2": "#8ab17d",
    "E1": "#e9c46a",
    "E2": "#f4a261",
    "E3": "#e76f51",
}


def write_summary_table(
    path: Path,
    rows: Sequence[Mapping],
) -> None:
    """eval_summary.tsv: one row per (query, candidate) with ranks and fractions."""
    fieldnames = [
        "query", "candidate", "final_rank", "embedding_rank",
        "C1", "C2", "E1", "E2", "E3", "total", "P", "C",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, delimiter="\t")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fieldnames})


def write_category_table(
    path: Path, rows: Sequence[tuple[str, str, str, str, str]]
) -> None:
    """method_categories.tsv: per-method category with produced/ideal targets."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["query", "candidate", "method", "category", "mapped_to", "ideal"])
        for row in rows:
            writer.writerow(row)


def render_quality_figure(
    path: Path,
    breakdowns: Sequence[tuple[str, QualityBreakdown]],
    title: str = "Method mapping quality",
) -> None:
    """Stacked bars of category fractions per candidate class."""
    if not breakdowns:
        return
    labels = [name.rsplit(".", 1)[-1] for name, _ in breakdowns]
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(labels) + 2.0), 4.0))
    bottoms = [0.0] * len(breakdowns)
    for cat in CATEGORIES:
        fractions = [
            (b.counts()[cat] / b.total if b.total else 0.0) for _, b in breakdowns
        ]
        ax.bar(
            labels, fractions, bottom=bottoms,
            color=_CATEGORY_COLORS[cat], label=cat, width=0.6,
        )
        bottoms = [a + f for a, f in zip(bottoms, fractions)]
    ax.set_ylim(0, 1.0)
    ax.set_ylabel("fraction of query methods")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8, ncol=len(CATEGORIES))
    ax.tick_params(axis="x", labelrotation=20)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_rank_figure(
    path: Path, rows: Sequence[tuple[str, int, int]], title: str = "Rank refinement"
) -> None:
    """Embedding rank vs final rank per candidate, log-scaled when spread out."""
    if not rows:
        return
    labels = [name.rsplit(".", 1)[-1] for name, _, _ in rows]
    er = [e for _, e, _ in rows]
    final = [f for _, _, f in rows]
    x = range(len(rows))
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(labels) + 2.0), 4.0))
    ax.bar([i - 0.2 for i in x], er, width=0.4, label="embedding rank", color="#9c9c9c")
    ax.bar([i + 0.2 for i in x], final, width=0.4, label="final rank", color="#2a9d8f")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=20)
    if max(er + final) > 50:
        ax.set_yscale("log")
    ax.set_ylabel("rank (lower is better)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
