"""Agreement and aggregation statistics for judge data.

Covers two-category Fleiss kappa over binary word labels, the small-sample
corrected coefficient of variation, Pearson correlation, and the per-system
mean/cv tables built from judgment records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "DegenerateMatrix",
    "ZeroVariance",
    "LengthMismatch",
    "NonPositiveMean",
    "SingletonSample",
    "ScoreOutOfRange",
    "KappaResult",
    "fleiss_kappa",
    "binary_label_matrix",
    "coefficient_of_variation",
    "pearson",
    "AggregateRow",
    "aggregate_scores",
]


class DegenerateMatrix(ValueError):
    pass


class ZeroVariance(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class NonPositiveMean(ValueError):
    pass


class SingletonSample(ValueError):
    pass


class ScoreOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class KappaResult:
    """Fleiss kappa plus its ingredients.

    ``kappa`` is None when expected agreement is 1 (all raters used a single
    category everywhere); the observed agreement is still reported so the
    degenerate case can be inspected rather than coerced to 0 or 1.
    """

    kappa: float | None
    observed_agreement: float
    expected_agreement: float

    @property
    def defined(self) -> bool:
        return self.kappa is not None


def binary_label_matrix(label_rows: Sequence[Sequence[int]]) -> np.ndarray:
    """items x raters binary matrix from per-item rater labels."""
    matrix = np.asarray(label_rows, dtype=int)
    if matrix.ndim != 2:
        raise DegenerateMatrix("label matrix must be 2-dimensional")
    if not np.isin(matrix, (0, 1)).all():
        raise ValueError("labels must be binary")
    return matrix


def fleiss_kappa(labels: np.ndarray | Sequence[Sequence[int]]) -> KappaResult:
    """Fleiss kappa over two categories for an items x raters binary matrix.

    Every item must be labeled by the same r >= 2 raters.  Agreement is
    computed per item over rater pairs, expected agreement from the marginal
    category proportions.
    """
    matrix = binary_label_matrix(labels) if not isinstance(labels, np.ndarray) else labels
    m, r = matrix.shape
    if m == 0:
        raise DegenerateMatrix("no items")
    if r < 2:
        raise DegenerateMatrix("kappa needs at least 2 raters")

    positives = matrix.sum(axis=1).astype(float)
    counts = np.stack([positives, r - positives], axis=1)

    per_item = (np.sum(counts * counts, axis=1) - r) / (r * (r - 1))
    observed = float(per_item.mean())

    proportions = counts.sum(axis=0) / (m * r)
    expected = float(np.dot(proportions, proportions))

    if expected >= 1.0:
        return KappaResult(kappa=None, observed_agreement=observed, expected_agreement=expected)
    kappa = (observed - expected) / (1.0 - expected)
    return KappaResult(kappa=float(kappa), observed_agreement=observed, expected_agreement=expected)


def coefficient_of_variation(values: Sequence[float]) -> float:
    """Small-sample corrected cv: (1 + 1/(4n)) * s / mean, with the n-1 sd.

    Scale-free, so samples that differ only by a positive factor get the
    same value; zero iff all values are equal.
    """
    n = len(values)
    if n < 2:
        raise SingletonSample("cv needs at least 2 values")
    mean = sum(values) / n
    if mean <= 0:
        raise NonPositiveMean(f"cv needs a positive mean, got {mean}")
    variance = sum((v - mean) ** 2 for v in values) / (n - 1)
    return (1.0 + 1.0 / (4.0 * n)) * math.sqrt(variance) / mean


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation of two equal-length samples."""
    if len(x) != len(y):
        raise LengthMismatch(f"samples differ in length: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise LengthMismatch("correlation needs at least 2 pairs")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx = float(np.dot(xc, xc))
    sy = float(np.dot(yc, yc))
    if sx == 0.0 or sy == 0.0:
        raise ZeroVariance("correlation undefined for a constant sample")
    return float(np.dot(xc, yc) / math.sqrt(sx * sy))


@dataclass(frozen=True)
class AggregateRow:
    """One (system, metric) aggregate: mean over all scores, mean of the
    per-summary cv values (None when no summary has 2+ judgments)."""

    system: str
    metric: str
    mean: float
    cv: float | None
    n_judgments: int


def aggregate_scores(
    judgments: Iterable[Mapping],
    score_range: tuple[float, float] = (1.0, 100.0),
) -> list[AggregateRow]:
    """Aggregate flat judgment rows into per (system, metric) mean/cv rows.

    Each judgment mapping needs ``system``, ``metric``, ``value`` and a
    per-summary key (``doc_id`` + ``summary_id``).  The cv is computed per
    summary, then averaged within the group; groups keep insertion-free,
    sorted order so output is independent of judgment ordering.
    """
    lo, hi = score_range
    groups: dict[tuple[str, str], list[Mapping]] = {}
    for row in judgments:
        value = float(row["value"])
        if not lo <= value <= hi:
            raise ScoreOutOfRange(f"score {value} outside [{lo}, {hi}]")
        groups.setdefault((str(row["system"]), str(row["metric"])), []).append(row)

    out: list[AggregateRow] = []
    for (system, metric) in sorted(groups):
        rows = groups[(system, metric)]
        values = [float(r["value"]) for r in rows]
        per_summary: dict[tuple[str, str], list[float]] = {}
        for r in rows:
            key = (str(r.get("doc_id", "")), str(r.get("summary_id", "")))
            per_summary.setdefault(key, []).append(float(r["value"]))
        cvs = [
            coefficient_of_variation(vals)
            for _, vals in sorted(per_summary.items())
            if len(vals) >= 2
        ]
        cv = sum(cvs) / len(cvs) if cvs else None
        out.append(
            AggregateRow(
                system=system,
                metric=metric,
                mean=sum(values) / len(values),
                cv=cv,
                n_judgments=len(values),
            )
        )
    return out
