"""Correlating coverage with externally computed per-region metrics.

Metrics (model accuracy, MCC, anything scalar) enter through a CSV with
columns ``region_id,metric_name,value`` -- they are never computed here.
Two analyses are offered:

* Pearson correlation of each metric against SC and against TC,
  reported both as ``r`` and ``100*r``.
* Partition of each metric's values into the regions labelled high vs
  low (by SCA or TCA), with per-side counts and means.

Every metric row must join to an assessment; a dangling region_id is a
hard error rather than a silent drop.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .coverage import HIGH, RegionAssessment
from .errors import DegenerateInput, MetricsParseError, UnknownRegionInMetrics

METRICS_COLUMNS = ("region_id", "metric_name", "value")


@dataclass(frozen=True)
class MetricRow:
    region_id: str
    metric_name: str
    value: float


@dataclass(frozen=True)
class MetricTable:
    """All metric rows of one metrics file; (region, metric) pairs unique."""

    rows: tuple[MetricRow, ...]

    def __post_init__(self) -> None:
        seen = set()
        for row in self.rows:
            key = (row.region_id, row.metric_name)
            if key in seen:
                raise ValueError(f"duplicate metric row {key}")
            seen.add(key)
            if not math.isfinite(row.value):
                raise ValueError(f"non-finite value for {key}: {row.value}")

    def metric_names(self) -> list[str]:
        return sorted({row.metric_name for row in self.rows})

    def rows_for(self, metric_name: str) -> list[MetricRow]:
        rows = [r for r in self.rows if r.metric_name == metric_name]
        rows.sort(key=lambda r: r.region_id)
        return rows


def load_metrics_csv(path) -> MetricTable:
    """Parse a metrics CSV; header with exactly the three columns required."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MetricsParseError(f"cannot read metrics file {path}: {exc}") from exc
    reader = csv.DictReader(text.splitlines())
    header = reader.fieldnames
    if header is None:
        raise MetricsParseError(f"{path}: empty file, expected header {METRICS_COLUMNS}")
    if sorted(header) != sorted(METRICS_COLUMNS):
        raise MetricsParseError(
            f"{path}: header must have columns {list(METRICS_COLUMNS)}, got {header}"
        )
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if None in rec or any(v is None for v in rec.values()):
            raise MetricsParseError(f"{path}:{lineno}: wrong number of fields")
        region_id = rec["region_id"].strip()
        metric_name = rec["metric_name"].strip()
        if not region_id or not metric_name:
            raise MetricsParseError(f"{path}:{lineno}: empty region_id or metric_name")
        try:
            value = float(rec["value"])
        except ValueError:
            raise MetricsParseError(
                f"{path}:{lineno}: value {rec['value']!r} is not a number"
            ) from None
        if not math.isfinite(value):
            raise MetricsParseError(f"{path}:{lineno}: value must be finite, got {value}")
        rows.append(MetricRow(region_id=region_id, metric_name=metric_name, value=value))
    try:
        return MetricTable(rows=tuple(rows))
    except ValueError as exc:
        raise MetricsParseError(f"{path}: {exc}") from None


def pearson(xs, ys) -> float:
    """Sample Pearson correlation coefficient.

    Two-pass, mean-centered computation; the result is clamped into
    [-1, 1] to absorb last-bit float excess.  Raises
    :class:`DegenerateInput` for fewer than two points or zero variance
    in either argument.
    """
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise DegenerateInput(f"need at least 2 points, got {n}")
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    sxx = sum(d * d for d in dx)
    syy = sum(d * d for d in dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("zero variance: correlation undefined")
    sxy = sum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class LabelSplit:
    """One metric's values partitioned by a high/low assessment label."""

    high: tuple[float, ...]
    low: tuple[float, ...]

    @property
    def n_high(self) -> int:
        return len(self.high)

    @property
    def n_low(self) -> int:
        return len(self.low)

    @property
    def mean_high(self) -> float | None:
        return sum(self.high) / len(self.high) if self.high else None

    @property
    def mean_low(self) -> float | None:
        return sum(self.low) / len(self.low) if self.low else None

    def to_dict(self) -> dict:
        return {
            "high": {"n": self.n_high, "mean": self.mean_high},
            "low": {"n": self.n_low, "mean": self.mean_low},
        }


def _assessment_index(assessments) -> dict[str, RegionAssessment]:
    return {a.region_id: a for a in assessments}


def _join(row: MetricRow, index: dict[str, RegionAssessment]) -> RegionAssessment:
    try:
        return index[row.region_id]
    except KeyError:
        raise UnknownRegionInMetrics(
            f"metric {row.metric_name!r} references region {row.region_id!r} "
            "which has no assessment"
        ) from None


def split_by_label(assessments, metrics: MetricTable, which: str) -> dict[str, LabelSplit]:
    """Partition each metric's values by the high/low label.

    ``which`` selects the label: "sca" or "tca".  Returns one
    :class:`LabelSplit` per metric name.
    """
    if which not in ("sca", "tca"):
        raise ValueError(f"which must be 'sca' or 'tca', got {which!r}")
    index = _assessment_index(assessments)
    out = {}
    for name in metrics.metric_names():
        high, low = [], []
        for row in metrics.rows_for(name):
            a = _join(row, index)
            label = a.sca if which == "sca" else a.tca
            (high if label == HIGH else low).append(row.value)
        out[name] = LabelSplit(high=tuple(high), low=tuple(low))
    return out


def correlation_report(assessments, metrics: MetricTable) -> dict:
    """Correlations and label splits for every metric, as one document.

    For each metric: Pearson r (and 100*r) against SC and against TC
    over the joined regions, plus the SCA and TCA high/low partitions.
    """
    index = _assessment_index(assessments)
    sca_splits = split_by_label(assessments, metrics, "sca")
    tca_splits = split_by_label(assessments, metrics, "tca")
    doc: dict = {"metrics": {}}
    for name in metrics.metric_names():
        rows = metrics.rows_for(name)
        joined = [_join(row, index) for row in rows]
        values = [row.value for row in rows]
        r_sc = pearson(values, [a.sc for a in joined])
        r_tc = pearson(values, [a.tc for a in joined])
        doc["metrics"][name] = {
            "n": len(rows),
            "pearson": {
                "sc": {"r": r_sc, "r_x100": 100 * r_sc},
                "tc": {"r": r_tc, "r_x100": 100 * r_tc},
            },
            "splits": {
                "sca": sca_splits[name].to_dict(),
                "tca": tca_splits[name].to_dict(),
            },
        }
    return doc
