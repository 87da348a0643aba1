"""Group-level aggregation and deterministic report emission.

Assessments roll up into one :class:`GroupSummary` per group (regions
without a group land in ``"ungrouped"``), each carrying boxplot-style
distribution statistics for SC and TC plus low-label counts and
percentages.

Emission rules, fixed so outputs are byte-reproducible:

* CSV: RFC-4180, header row, LF line endings, fractions and percentages
  with 6 decimal places, rows in sorted order (region_id / group name).
* JSON: 2-space indent, keys sorted, trailing newline.
* Integer "display" percentages round half to even, computed exactly
  from the counts (never from the float percentage).
"""

from __future__ import annotations

import csv
import json
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .coverage import LOW, RegionAssessment
from .errors import EmptyInput

#: Group name assigned to regions whose manifest group is null/absent.
UNGROUPED = "ungrouped"


@dataclass(frozen=True)
class DistStats:
    """Five-number summary plus mean and Tukey outliers.

    Quartiles interpolate linearly between order statistics; outliers
    are the values strictly outside [q1 - 1.5*IQR, q3 + 1.5*IQR],
    reported by region_id in sorted order.
    """

    mean: float
    median: float
    q1: float
    q3: float
    min: float
    max: float
    outlier_region_ids: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "median": self.median,
            "q1": self.q1,
            "q3": self.q3,
            "min": self.min,
            "max": self.max,
            "outlier_region_ids": list(self.outlier_region_ids),
        }


def dist_stats(pairs) -> DistStats:
    """Distribution statistics over (region_id, value) pairs."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyInput("no values to summarize")
    values = np.array([v for _, v in pairs], dtype=float)
    q1, median, q3 = (float(q) for q in np.quantile(values, [0.25, 0.5, 0.75]))
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    outliers = sorted(rid for rid, v in pairs if v < lo_fence or v > hi_fence)
    return DistStats(
        mean=float(values.mean()),
        median=median,
        q1=q1,
        q3=q3,
        min=float(values.min()),
        max=float(values.max()),
        outlier_region_ids=tuple(outliers),
    )


@dataclass(frozen=True)
class GroupSummary:
    """Aggregate of all assessments sharing one group."""

    group: str
    n_regions: int
    sc_stats: DistStats
    tc_stats: DistStats
    n_low_tca: int
    pct_low_tca: float  # exact 100*n/d, full precision
    n_low_sca: int
    pct_low_sca: float

    @property
    def pct_low_tca_display(self) -> int:
        """Integer percent of low-TCA regions, ties to even, exact."""
        return round(Fraction(100 * self.n_low_tca, self.n_regions))

    @property
    def pct_low_sca_display(self) -> int:
        """Integer percent of low-SCA regions, ties to even, exact."""
        return round(Fraction(100 * self.n_low_sca, self.n_regions))

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "n_regions": self.n_regions,
            "sc_stats": self.sc_stats.to_dict(),
            "tc_stats": self.tc_stats.to_dict(),
            "n_low_tca": self.n_low_tca,
            "pct_low_tca": self.pct_low_tca,
            "pct_low_tca_display": self.pct_low_tca_display,
            "n_low_sca": self.n_low_sca,
            "pct_low_sca": self.pct_low_sca,
            "pct_low_sca_display": self.pct_low_sca_display,
        }


def resolve_group(groups, region_id: str) -> str:
    """Group for a region, with null/absent normalized to "ungrouped"."""
    group = groups.get(region_id) if groups else None
    return group if group is not None else UNGROUPED


def aggregate(assessments, groups) -> list[GroupSummary]:
    """One GroupSummary per distinct group, sorted by group name.

    ``groups`` maps region_id to group name (None/absent regions fall
    into "ungrouped").  Raises :class:`EmptyInput` when there is nothing
    to aggregate.
    """
    assessments = list(assessments)
    if not assessments:
        raise EmptyInput("no assessments to aggregate")
    buckets: dict[str, list[RegionAssessment]] = {}
    for a in assessments:
        buckets.setdefault(resolve_group(groups, a.region_id), []).append(a)
    summaries = []
    for group in sorted(buckets):
        members = sorted(buckets[group], key=lambda a: a.region_id)
        n = len(members)
        n_low_tca = sum(1 for a in members if a.tca == LOW)
        n_low_sca = sum(1 for a in members if a.sca == LOW)
        summaries.append(
            GroupSummary(
                group=group,
                n_regions=n,
                sc_stats=dist_stats([(a.region_id, a.sc) for a in members]),
                tc_stats=dist_stats([(a.region_id, a.tc) for a in members]),
                n_low_tca=n_low_tca,
                pct_low_tca=100 * n_low_tca / n,
                n_low_sca=n_low_sca,
                pct_low_sca=100 * n_low_sca / n,
            )
        )
    return summaries


# ------------------------------------------------------------- emission

ASSESSMENT_COLUMNS = ("region_id", "group", "n_steps", "sc", "tc", "sca", "tca")
SUMMARY_COLUMNS = (
    "group", "n_regions",
    "sc_mean", "sc_median", "sc_q1", "sc_q3",
    "tc_mean", "tc_median", "tc_q1", "tc_q3",
    "n_low_sca", "pct_low_sca", "n_low_tca", "pct_low_tca",
)


@contextmanager
def _open_text(dest):
    """Yield a text stream for a path or pass a file-like through."""
    if hasattr(dest, "write"):
        yield dest
    else:
        with open(Path(dest), "w", encoding="utf-8", newline="") as fh:
            yield fh


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def write_assessments_csv(assessments, groups, dest) -> None:
    """Assessment table, one row per region sorted by region_id."""
    with _open_text(dest) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ASSESSMENT_COLUMNS)
        for a in sorted(assessments, key=lambda a: a.region_id):
            writer.writerow(
                (
                    a.region_id,
                    resolve_group(groups, a.region_id),
                    a.n_steps,
                    _fmt(a.sc),
                    _fmt(a.tc),
                    a.sca,
                    a.tca,
                )
            )


def write_summaries_csv(summaries, dest) -> None:
    """Group summary table, one row per group in given order."""
    with _open_text(dest) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for s in summaries:
            writer.writerow(
                (
                    s.group,
                    s.n_regions,
                    _fmt(s.sc_stats.mean),
                    _fmt(s.sc_stats.median),
                    _fmt(s.sc_stats.q1),
                    _fmt(s.sc_stats.q3),
                    _fmt(s.tc_stats.mean),
                    _fmt(s.tc_stats.median),
                    _fmt(s.tc_stats.q1),
                    _fmt(s.tc_stats.q3),
                    s.n_low_sca,
                    _fmt(s.pct_low_sca),
                    s.n_low_tca,
                    _fmt(s.pct_low_tca),
                )
            )


def _write_json(doc, dest) -> None:
    with _open_text(dest) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_assessments_json(assessments, groups, dest) -> None:
    doc = {
        "assessments": [
            {"group": resolve_group(groups, a.region_id), **a.to_dict()}
            for a in sorted(assessments, key=lambda a: a.region_id)
        ]
    }
    _write_json(doc, dest)


def write_summaries_json(summaries, dest) -> None:
    _write_json({"summaries": [s.to_dict() for s in summaries]}, dest)


def plot_data(assessments, groups) -> dict:
    """The data behind per-group SC/TC boxplots, plotting left to callers.

    One entry per group: region ids (sorted), aligned SC and TC value
    arrays, and the DistStats for each.
    """
    assessments = list(assessments)
    if not assessments:
        raise EmptyInput("no assessments to plot")
    buckets: dict[str, list[RegionAssessment]] = {}
    for a in assessments:
        buckets.setdefault(resolve_group(groups, a.region_id), []).append(a)
    doc: dict = {"groups": {}}
    for group in sorted(buckets):
        members = sorted(buckets[group], key=lambda a: a.region_id)
        doc["groups"][group] = {
            "region_ids": [a.region_id for a in members],
            "sc": [a.sc for a in members],
            "tc": [a.tc for a in members],
            "sc_stats": dist_stats([(a.region_id, a.sc) for a in members]).to_dict(),
            "tc_stats": dist_stats([(a.region_id, a.tc) for a in members]).to_dict(),
        }
    return doc


def write_plot_json(assessments, groups, dest) -> None:
    _write_json(plot_data(assessments, groups), dest)
