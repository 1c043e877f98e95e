"""Matplotlib renderings of report data: score charts and highlight heatmaps.

Figures are written as PNG next to the delimited report output.  The heatmap
mirrors the judging interface: one hue, opacity proportional to the fraction
of annotators that highlighted each token.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .highlights import HighlightCorpusEntry, heatmap_weights

__all__ = ["render_heatmap_figure", "render_score_bars", "render_report_figures"]

_HIGHLIGHT_RGB = (1.0, 0.82, 0.0)
_TOKENS_PER_LINE = 12


def render_heatmap_figure(entry: HighlightCorpusEntry, path: Path) -> None:
    """Document tokens laid out line by line, shaded by highlight intensity."""
    intensities = heatmap_weights(entry)
    tokens = entry.doc.surfaces
    n_lines = max(1, (len(tokens) + _TOKENS_PER_LINE - 1) // _TOKENS_PER_LINE)

    fig, ax = plt.subplots(figsize=(10, 0.4 * n_lines + 1))
    ax.set_axis_off()
    for idx, (token, intensity) in enumerate(zip(tokens, intensities)):
        row, col = divmod(idx, _TOKENS_PER_LINE)
        ax.text(
            col,
            -row,
            token,
            fontsize=9,
            ha="center",
            va="center",
            bbox={
                "boxstyle": "round,pad=0.25",
                "facecolor": (*_HIGHLIGHT_RGB, intensity),
                "edgecolor": "none",
            },
        )
    ax.set_xlim(-1, _TOKENS_PER_LINE)
    ax.set_ylim(-n_lines, 1)
    ax.set_title(f"highlights: {entry.doc_id} (N={entry.num_annotators}, K={entry.budget_k})")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_score_bars(
    rows: list[dict],
    path: Path,
    title: str,
    value_keys: tuple[str, ...],
    scale: float = 1.0,
) -> bool:
    """Grouped bars of scores per system; returns False when nothing to draw.

    ``scale`` lifts fractional scores to the 1-100 presentation scale;
    judgment scores are already on that scale and use scale=1.
    """
    labels = []
    series: dict[str, list[float]] = {key: [] for key in value_keys}
    for row in rows:
        values = [row.get(key) for key in value_keys]
        if any(v is None for v in values):
            continue
        labels.append(row["label"])
        for key, value in zip(value_keys, values):
            series[key].append(value * scale)
    if not labels:
        return False

    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(labels)), 4))
    width = 0.8 / len(value_keys)
    for offset, key in enumerate(value_keys):
        positions = [i + offset * width for i in range(len(labels))]
        ax.bar(positions, series[key], width=width, label=key)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(labels))])
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("score")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return True


def render_report_figures(report, out_dir, entries: dict[str, HighlightCorpusEntry]) -> list[str]:
    """Render every figure the report data supports into out_dir/figures."""
    out_dir = Path(out_dir)
    fig_dir = out_dir / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    for doc_id in sorted(entries):
        name = f"figures/heatmap_{_safe(doc_id)}.png"
        render_heatmap_figure(entries[doc_id], out_dir / name)
        written.append(name)

    hrouge_means = [
        {
            "label": f"{r['system']} n={r['n']} {r['mode']}",
            "precision": r["precision"],
            "recall": r["recall"],
        }
        for r in report.hrouge
        if r.get("row") == "mean"
    ]
    if render_score_bars(
        hrouge_means,
        fig_dir / "ngram_scores.png",
        "n-gram overlap scores (x100)",
        ("precision", "recall"),
        scale=100.0,
    ):
        written.append("figures/ngram_scores.png")

    content = [
        {
            "label": f"{r['system']} ({r['condition']})",
            "precision": r["mean_precision"],
            "recall": r["mean_recall"],
        }
        for r in report.content
    ]
    if render_score_bars(
        content, fig_dir / "content_scores.png", "content judgments", ("precision", "recall")
    ):
        written.append("figures/content_scores.png")

    quality = [
        {"label": f"{r['system']} {r['metric']}", "mean": r["mean"]} for r in report.quality
    ]
    if render_score_bars(quality, fig_dir / "quality_scores.png", "quality judgments", ("mean",)):
        written.append("figures/quality_scores.png")

    return written


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)
