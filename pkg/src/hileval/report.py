"""Report assembly: aggregate tables from highlights, judgments and scores.

A report is a pure function of (corpus, task set, event log): given the same
inputs it renders byte-identical CSV and record output.  Sections with no
usable data are omitted and the reason recorded, never filled with zeros.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from . import protocol
from .highlights import HighlightCorpusEntry, coverage_stats
from .metrics import MODE_HIGHLIGHTED, MODE_UNIFORM, doc_rouge, hrouge
from .stats import ZeroVariance, aggregate_scores, fleiss_kappa, pearson
from .store import Campaign, canonical_dumps, write_atomic

__all__ = [
    "EvalReport",
    "build_report",
    "hrouge_rows",
    "agreement_rows",
    "render_csv",
    "render_section_csv",
    "render_records",
    "write_report",
]

SECTIONS = ("content", "quality", "hrouge", "agreement")

# CSV formatting per section: fractional score columns are lifted x100 with
# two decimals; judgment means are already on the 1-100 scale and keep two
# decimals unscaled; everything else (cv, kappa, coverage) renders at 4dp.
_SECTION_PERCENT_COLUMNS = {
    "hrouge": {"precision", "recall"},
    "content": set(),
    "quality": set(),
    "agreement": set(),
}
_SECTION_TWO_DP_COLUMNS = {
    "hrouge": set(),
    "content": {"mean_precision", "mean_recall"},
    "quality": {"mean"},
    "agreement": set(),
}
_FLOAT_FORMAT = "{:.4f}"


@dataclass
class EvalReport:
    """All sections plus provenance; ``section_status`` explains omissions."""

    content: list[dict] = field(default_factory=list)
    quality: list[dict] = field(default_factory=list)
    hrouge: list[dict] = field(default_factory=list)
    agreement: list[dict] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    section_status: dict = field(default_factory=dict)

    def section(self, name: str) -> list[dict]:
        if name not in SECTIONS:
            raise KeyError(name)
        return getattr(self, name)


def hrouge_rows(
    entries: dict[str, HighlightCorpusEntry],
    summaries: dict[str, dict[str, str]],
    documents: dict,
    orders: tuple[int, ...] = (1, 2),
    modes: tuple[str, ...] = (MODE_HIGHLIGHTED, MODE_UNIFORM),
) -> list[dict]:
    """Per (system, doc, n, mode) score rows plus per-system mean rows.

    The uniform mode scores every document, highlighted mode only documents
    that have highlights.  Undefined values stay None; means skip them and
    report how many documents were defined.
    """
    from .text import tokenize

    detail: list[dict] = []
    for doc_id in sorted(summaries):
        if doc_id not in documents:
            continue
        doc = documents[doc_id]
        for system in sorted(summaries[doc_id]):
            summary = tokenize(summaries[doc_id][system], doc.config)
            for n in orders:
                for mode in modes:
                    if mode == MODE_HIGHLIGHTED:
                        entry = entries.get(doc_id)
                        if entry is None:
                            continue
                        score = hrouge(entry, summary, n)
                    else:
                        score = doc_rouge(doc, summary, n)
                    detail.append(
                        {
                            "row": "doc",
                            "system": system,
                            "doc_id": doc_id,
                            "n": n,
                            "mode": mode,
                            "precision": score.precision,
                            "recall": score.recall,
                        }
                    )

    rows = list(detail)
    groups: dict[tuple[str, int, str], list[dict]] = {}
    for row in detail:
        groups.setdefault((row["system"], row["n"], row["mode"]), []).append(row)
    for (system, n, mode) in sorted(groups):
        rows_for_group = groups[(system, n, mode)]
        rows.append(
            {
                "row": "mean",
                "system": system,
                "doc_id": "",
                "n": n,
                "mode": mode,
                "precision": _mean_defined([r["precision"] for r in rows_for_group]),
                "recall": _mean_defined([r["recall"] for r in rows_for_group]),
                "n_docs": len(rows_for_group),
            }
        )
    return rows


def _mean_defined(values: list) -> float | None:
    defined = [v for v in values if v is not None]
    return sum(defined) / len(defined) if defined else None


def agreement_rows(entries: dict[str, HighlightCorpusEntry]) -> list[dict]:
    """Per-document Fleiss kappa and coverage, plus a macro-average row.

    Kappa needs at least two annotators; degenerate expected agreement is
    reported as undefined rather than coerced.  Macro averages follow the
    per-article-then-average convention.
    """
    rows = []
    kappas = []
    coverages = []
    second_halves = []
    for doc_id in sorted(entries):
        entry = entries[doc_id]
        stats = coverage_stats(entry)
        kappa_value = None
        observed = None
        if entry.num_annotators >= 2:
            labels = [
                [1 if h.covers(i) else 0 for h in entry.highlights]
                for i in range(len(entry.doc))
            ]
            result = fleiss_kappa(labels)
            kappa_value = result.kappa
            observed = result.observed_agreement
            if kappa_value is not None:
                kappas.append(kappa_value)
        coverages.append(stats.union_coverage)
        second_halves.append(stats.second_half_fraction)
        rows.append(
            {
                "row": "doc",
                "doc_id": doc_id,
                "n_annotators": entry.num_annotators,
                "kappa": kappa_value,
                "observed_agreement": observed,
                "union_coverage": stats.union_coverage,
                "second_half_fraction": stats.second_half_fraction,
            }
        )
    rows.append(
        {
            "row": "macro",
            "doc_id": "",
            "n_annotators": "",
            "kappa": _mean_defined(kappas),
            "observed_agreement": None,
            "union_coverage": _mean_defined(coverages),
            "second_half_fraction": _mean_defined(second_halves),
        }
    )
    return rows


def _content_rows(records: list) -> list[dict]:
    by_condition: dict[str, list[dict]] = {}
    for record in records:
        if record.metric in ("content_precision", "content_recall"):
            by_condition.setdefault(record.condition, []).append(record.to_dict())
    rows = []
    for condition in sorted(by_condition):
        aggregates = {
            (a.system, a.metric): a for a in aggregate_scores(by_condition[condition])
        }
        systems = sorted({system for system, _ in aggregates})
        for system in systems:
            precision = aggregates.get((system, "content_precision"))
            recall = aggregates.get((system, "content_recall"))
            rows.append(
                {
                    "condition": condition,
                    "system": system,
                    "mean_precision": precision.mean if precision else None,
                    "mean_recall": recall.mean if recall else None,
                    "cv_precision": precision.cv if precision else None,
                    "cv_recall": recall.cv if recall else None,
                    "n_judgments": (precision.n_judgments if precision else 0)
                    + (recall.n_judgments if recall else 0),
                }
            )
    return rows


def _quality_rows(records: list) -> tuple[list[dict], float | None, int]:
    quality = [
        r.to_dict()
        for r in records
        if r.metric in (protocol.METRIC_FLUENCY, protocol.METRIC_CLARITY)
    ]
    rows = [
        {
            "system": a.system,
            "metric": a.metric,
            "mean": a.mean,
            "cv": a.cv,
            "n_judgments": a.n_judgments,
        }
        for a in aggregate_scores(quality)
    ]

    per_summary: dict[str, dict[str, list[float]]] = {}
    for record in quality:
        per_summary.setdefault(record["summary_id"], {}).setdefault(
            record["metric"], []
        ).append(record["value"])
    pairs = [
        (
            sum(metrics[protocol.METRIC_FLUENCY]) / len(metrics[protocol.METRIC_FLUENCY]),
            sum(metrics[protocol.METRIC_CLARITY]) / len(metrics[protocol.METRIC_CLARITY]),
        )
        for _, metrics in sorted(per_summary.items())
        if protocol.METRIC_FLUENCY in metrics and protocol.METRIC_CLARITY in metrics
    ]
    correlation = None
    if len(pairs) >= 2:
        try:
            correlation = pearson([p[0] for p in pairs], [p[1] for p in pairs])
        except ZeroVariance:
            correlation = None
    return rows, correlation, len(pairs)


def build_report(
    campaign: Campaign,
    orders: tuple[int, ...] = (1, 2),
) -> EvalReport:
    """Assemble every section the campaign's data supports."""
    report = EvalReport()
    entries = campaign.highlight_entries()
    records = campaign.judgment_records()

    if entries:
        report.hrouge = hrouge_rows(
            entries, campaign.corpus.summaries, campaign.documents, orders
        )
        report.agreement = agreement_rows(entries)
        report.section_status["hrouge"] = "ok"
        report.section_status["agreement"] = "ok"
    else:
        # uniform-weight scores need no highlights, so hrouge degrades
        # gracefully to the document-reference table
        report.hrouge = hrouge_rows(
            {}, campaign.corpus.summaries, campaign.documents, orders, modes=(MODE_UNIFORM,)
        )
        report.section_status["hrouge"] = "partial: no accepted highlights, uniform mode only"
        report.section_status["agreement"] = "insufficient: no accepted highlights"

    content = _content_rows(records)
    if content:
        report.content = content
        report.section_status["content"] = "ok"
    else:
        report.section_status["content"] = "insufficient: no accepted content judgments"

    quality, correlation, n_pairs = _quality_rows(records)
    if quality:
        report.quality = quality
        report.section_status["quality"] = "ok"
    else:
        report.section_status["quality"] = "insufficient: no accepted quality judgments"

    report.provenance = {
        "seed": campaign.seed,
        "budget_k": campaign.budget_k,
        "tokenizer": campaign.corpus.tokenizer.to_dict(),
        "ngram_orders": list(orders),
        "count_mode": "clipped",
        "cv_rule": "per-summary cv averaged within group",
        "kappa_rule": "per-article two-category Fleiss kappa, macro-averaged",
        "score_scale": "fractions in records output, x100 in csv",
        "annotators": {
            doc_id: entry.num_annotators for doc_id, entry in sorted(entries.items())
        },
        "pearson_fluency_clarity": correlation,
        "pearson_n_summaries": n_pairs,
        "section_status": report.section_status,
    }
    return report


# -- rendering ---------------------------------------------------------------


def _format_cell(column: str, value, percent_columns, two_dp_columns) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, float):
        if column in percent_columns:
            return f"{value * 100:.2f}"
        if column in two_dp_columns:
            return f"{value:.2f}"
        return _FLOAT_FORMAT.format(value)
    return str(value)


def render_csv(
    rows: list[dict],
    percent_columns: set | frozenset = frozenset(),
    two_dp_columns: set | frozenset = frozenset(),
) -> bytes:
    """Stable-column CSV with explicit per-column scaling rules."""
    if not rows:
        return b""
    columns = list(rows[0].keys())
    for row in rows[1:]:
        for key in row:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(
            _format_cell(col, row.get(col, ""), percent_columns, two_dp_columns)
            for col in columns
        )
    return buffer.getvalue().encode()


def render_section_csv(section: str, rows: list[dict], raw: bool = False) -> bytes:
    """CSV for a named report section under its scaling rules.

    ``raw`` keeps fractional scores as fractions (still 4dp) instead of x100.
    """
    percent = set() if raw else _SECTION_PERCENT_COLUMNS.get(section, set())
    return render_csv(rows, percent, _SECTION_TWO_DP_COLUMNS.get(section, set()))


def render_records(rows: list[dict]) -> bytes:
    """Newline-delimited canonical JSON records with raw fractional values."""
    return ("".join(canonical_dumps(row) + "\n" for row in rows)).encode()


def write_report(
    report: EvalReport,
    out_dir,
    fmt: str = "csv",
    raw: bool = False,
    figures: bool = True,
    campaign: Campaign | None = None,
) -> list[str]:
    """Write every populated section plus provenance; returns written names.

    With ``figures`` enabled (and matplotlib available) score charts and
    per-document highlight heatmaps are rendered next to the tables.
    """
    from pathlib import Path

    out_dir = Path(out_dir)
    written = []
    for name in SECTIONS:
        rows = report.section(name)
        if not rows:
            continue
        if fmt == "csv":
            payload = render_section_csv(name, rows, raw=raw)
            filename = f"{name}.csv"
        else:
            payload = render_records(rows)
            filename = f"{name}.ndjson"
        write_atomic(out_dir / filename, payload)
        written.append(filename)
    write_atomic(
        out_dir / "provenance.json",
        (canonical_dumps(report.provenance) + "\n").encode(),
    )
    written.append("provenance.json")

    if figures:
        from . import figures as figure_mod

        entries = campaign.highlight_entries() if campaign is not None else {}
        written.extend(figure_mod.render_report_figures(report, out_dir, entries))
    return written
