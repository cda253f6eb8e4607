"""Matplotlib renderings of frequency tables, written next to the TSV output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .stats import FrequencyTable


def render_table_chart(table: FrequencyTable, path: str) -> None:
    """Grouped bar chart: one group per row, one bar per feature."""
    rows = [r for r in table.rows if not table.is_empty_row(r)]
    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * max(len(rows), 1), 3.6))
    n_feat = len(table.features)
    width = 0.8 / max(n_feat, 1)
    for fi, feature in enumerate(table.features):
        xs = [ri + fi * width for ri in range(len(rows))]
        ys = [table.cells[(row, feature)] for row in rows]
        ax.bar(xs, ys, width=width, label=feature)
    ax.set_xticks([ri + 0.4 - width / 2 for ri in range(len(rows))])
    ax.set_xticklabels(rows, rotation=20, ha="right")
    ax.set_ylabel("% of applicable units")
    ax.set_ylim(0, 105)
    ax.set_title(f"{table.system} by {table.partition}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_compare_chart(report: dict, path: str) -> None:
    """Per-cell absolute deltas against the tolerance line."""
    items = [(k, v) for k, v in report["deltas"].items() if v != float("inf")]
    fig, ax = plt.subplots(figsize=(1.8 + 0.55 * max(len(items), 1), 3.6))
    labels = [f"{row}\n{feature}" for (row, feature), _ in items]
    ax.bar(range(len(items)), [v for _, v in items], color="#4878a8")
    ax.axhline(report["tolerance"], color="red", linestyle="--", linewidth=1,
               label=f"tolerance {report['tolerance']:g}")
    ax.set_xticks(range(len(items)))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("|observed - reference| (points)")
    ax.set_title("pass" if report["pass"] else "FAIL")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
