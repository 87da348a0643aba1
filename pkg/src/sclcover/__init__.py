"""Clean spatio-temporal coverage assessment of SCL satellite image time series.

Given per-timestep Scene Classification Layer masks for a set of sample
regions, this package computes how much of each region is "clean" (per a
chosen label set) spatially and temporally, labels regions high/low
against thresholds, aggregates by group, and correlates coverage with
externally supplied per-region metrics.  See the README for the math and
the file formats.
"""

__version__ = "0.1.0"

from .errors import (
    BadFilterSpec,
    DegenerateInput,
    DuplicateRegion,
    EmptyInput,
    EmptySeries,
    InvalidMask,
    ManifestParseError,
    MetricsParseError,
    MissingRaster,
    SclCoverError,
    SizeMismatch,
    UnknownLabel,
    UnknownRegion,
    UnknownRegionInMetrics,
)
from .scl import (
    ALL_BUT_CLOUD,
    BUILTIN_FILTERS,
    CLOUD_LABELS,
    SCL_LABEL_NAMES,
    VALID_LABELS,
    VEG_NON_VEG,
    LabelFilter,
    SceneMask,
    SceneSeries,
    label_name,
    parse_filter,
    render_filter,
    validate_labels,
)
from .coverage import (
    HIGH,
    LOW,
    AssessmentConfig,
    CoverageAssessor,
    RegionAssessment,
    assess_region,
    sca_label,
    spatial_coverage_region,
    spatial_coverage_step,
    tca_label,
    temporal_coverage,
)
from .ingest import (
    DatasetManifest,
    RegionEntry,
    StepEntry,
    load_manifest,
    load_mask,
    load_series,
    load_series_entry,
    write_manifest,
    write_series,
)
from .pipeline import assess_dataset
from .report import (
    UNGROUPED,
    DistStats,
    GroupSummary,
    aggregate,
    dist_stats,
    plot_data,
    write_assessments_csv,
    write_assessments_json,
    write_plot_json,
    write_summaries_csv,
    write_summaries_json,
)
from .stats import (
    LabelSplit,
    MetricRow,
    MetricTable,
    correlation_report,
    load_metrics_csv,
    pearson,
    split_by_label,
)
from .synth import (
    SynthSpec,
    build_dataset,
    generate,
    make_timestamps,
    mix64,
    stream_draw,
    subseed,
)

__all__ = [
    "__version__",
    # errors
    "SclCoverError", "UnknownLabel", "BadFilterSpec", "InvalidMask",
    "EmptySeries", "ManifestParseError", "MissingRaster", "DuplicateRegion",
    "SizeMismatch", "UnknownRegion", "EmptyInput", "DegenerateInput",
    "MetricsParseError", "UnknownRegionInMetrics",
    # scl
    "SCL_LABEL_NAMES", "VALID_LABELS", "CLOUD_LABELS", "ALL_BUT_CLOUD",
    "VEG_NON_VEG", "BUILTIN_FILTERS", "LabelFilter", "SceneMask",
    "SceneSeries", "label_name", "parse_filter", "render_filter",
    "validate_labels",
    # coverage
    "HIGH", "LOW", "AssessmentConfig", "RegionAssessment", "CoverageAssessor",
    "assess_region", "sca_label", "spatial_coverage_region",
    "spatial_coverage_step", "tca_label", "temporal_coverage",
    # ingest
    "DatasetManifest", "RegionEntry", "StepEntry", "load_manifest",
    "load_mask", "load_series", "load_series_entry", "write_manifest",
    "write_series",
    # pipeline
    "assess_dataset",
    # report
    "UNGROUPED", "DistStats", "GroupSummary", "aggregate", "dist_stats",
    "plot_data", "write_assessments_csv", "write_assessments_json",
    "write_plot_json", "write_summaries_csv", "write_summaries_json",
    # stats
    "LabelSplit", "MetricRow", "MetricTable", "correlation_report",
    "load_metrics_csv", "pearson", "split_by_label",
    # synth
    "SynthSpec", "build_dataset", "generate", "make_timestamps", "mix64",
    "stream_draw", "subseed",
]
