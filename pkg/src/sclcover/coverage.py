"""Spatial and temporal clean-coverage assessment.

Per-timestep spatial coverage of a mask is the fraction of its pixels
whose SCL code belongs to the clean-label set: ``SC_t = clean / (W*H)``,
an exact integer ratio rendered to float64 in one division.  Region
spatial coverage ``sc`` is the arithmetic mean of the per-step values;
temporal coverage ``tc`` is the fraction of timesteps whose spatial
coverage reaches the per-step threshold.  Thresholding ``sc`` and ``tc``
(inclusive ``>=``) yields the binary high/low assessment labels.

Reduction order is pinned: the mean is a left-to-right float64 sum of
the per-step list divided by the step count.  Identical inputs therefore
give bit-identical results on any platform and at any parallelism
degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySeries
from .scl import LabelFilter, SceneMask, SceneSeries, parse_filter, validate_labels

#: Assessment labels.
HIGH = "high"
LOW = "low"

_MODES = ("strict", "lax")


def _check_mode(mode: str) -> None:
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")


def _check_fraction(name: str, value) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value


def _member_table(label_filter: LabelFilter) -> np.ndarray:
    """Boolean lookup table over all 256 byte values.

    Codes above 11 are never members, which is exactly the lax-mode rule:
    junk bytes count as unclean.
    """
    table = np.zeros(256, dtype=bool)
    for code in label_filter.members:
        table[code] = True
    return table


def _clean_count(labels: np.ndarray, table: np.ndarray) -> int:
    return int(np.count_nonzero(table[labels]))


def spatial_coverage_step(
    mask: SceneMask, label_filter: LabelFilter, mode: str = "strict"
) -> float:
    """Fraction of clean pixels in one mask.

    Args:
        mask: the SCL grid for a single timestep.
        label_filter: the set of codes counted as clean.
        mode: "strict" rejects codes outside 0..11 (:class:`InvalidMask`);
            "lax" counts them as unclean.

    Returns:
        ``|{pixels with code in filter}| / (width*height)`` as the exact
        integer ratio converted to float.
    """
    _check_mode(mode)
    if mode == "strict":
        validate_labels(mask.labels)
    return _clean_count(mask.labels, _member_table(label_filter)) / mask.area


def spatial_coverage_region(
    series: SceneSeries, label_filter: LabelFilter, mode: str = "strict"
) -> tuple[float, list[float]]:
    """Per-step coverages and their mean for one region.

    Returns ``(sc, sc_per_step)`` where ``sc_per_step`` has one entry per
    timestep in timestamp order and ``sc`` is their left-to-right mean.
    """
    _check_mode(mode)
    if not series.masks:
        raise EmptySeries(f"region {series.region_id!r} has no timesteps")
    table = _member_table(label_filter)
    per_step: list[float] = []
    for i, mask in enumerate(series.masks):
        if mode == "strict":
            validate_labels(mask.labels, context=f"region {series.region_id!r} step {i}")
        per_step.append(_clean_count(mask.labels, table) / mask.area)
    return sum(per_step) / len(per_step), per_step


def temporal_coverage(sc_per_step, step_thresh: float) -> float:
    """Fraction of timesteps whose coverage reaches ``step_thresh``.

    The comparison is inclusive: a step exactly at the threshold counts.
    The result is the exact integer ratio ``passing / total``.
    """
    step_thresh = _check_fraction("step_thresh", step_thresh)
    values = [float(v) for v in sc_per_step]
    if not values:
        raise EmptySeries("temporal coverage of an empty step list")
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"per-step coverage must be in [0, 1], got {v}")
    passing = sum(1 for v in values if v >= step_thresh)
    return passing / len(values)


def sca_label(sc: float, sc_thresh: float) -> str:
    """"high" iff ``sc >= sc_thresh`` (boundary inclusive), else "low"."""
    sc = _check_fraction("sc", sc)
    sc_thresh = _check_fraction("sc_thresh", sc_thresh)
    return HIGH if sc >= sc_thresh else LOW


def tca_label(tc: float, tc_thresh: float) -> str:
    """"high" iff ``tc >= tc_thresh`` (boundary inclusive), else "low"."""
    tc = _check_fraction("tc", tc)
    tc_thresh = _check_fraction("tc_thresh", tc_thresh)
    return HIGH if tc >= tc_thresh else LOW


@dataclass(frozen=True)
class AssessmentConfig:
    """Filter plus the three thresholds driving an assessment.

    ``step_thresh`` (the per-timestep cut inside the temporal-coverage
    count) defaults to ``tc_thresh`` when passed as None -- one knob, two
    roles, unless explicitly decoupled.
    """

    label_filter: LabelFilter
    sc_thresh: float = 0.7
    step_thresh: float | None = None
    tc_thresh: float = 0.7

    def __post_init__(self) -> None:
        if not isinstance(self.label_filter, LabelFilter):
            raise TypeError(
                f"label_filter must be a LabelFilter, got {type(self.label_filter).__name__}"
            )
        object.__setattr__(self, "sc_thresh", _check_fraction("sc_thresh", self.sc_thresh))
        object.__setattr__(self, "tc_thresh", _check_fraction("tc_thresh", self.tc_thresh))
        step = self.tc_thresh if self.step_thresh is None else _check_fraction(
            "step_thresh", self.step_thresh
        )
        object.__setattr__(self, "step_thresh", step)


@dataclass(frozen=True)
class RegionAssessment:
    """Everything the assessment produces for one region."""

    region_id: str
    sc_per_step: tuple[float, ...]
    sc: float
    tc: float
    sca: str
    tca: str
    n_steps: int

    def to_dict(self) -> dict:
        return {
            "region_id": self.region_id,
            "sc_per_step": list(self.sc_per_step),
            "sc": self.sc,
            "tc": self.tc,
            "sca": self.sca,
            "tca": self.tca,
            "n_steps": self.n_steps,
        }


def assess_region(
    series: SceneSeries, config: AssessmentConfig, mode: str = "strict"
) -> RegionAssessment:
    """Full assessment of one region: coverages plus high/low labels."""
    sc, per_step = spatial_coverage_region(series, config.label_filter, mode=mode)
    tc = temporal_coverage(per_step, config.step_thresh)
    return RegionAssessment(
        region_id=series.region_id,
        sc_per_step=tuple(per_step),
        sc=sc,
        tc=tc,
        sca=sca_label(sc, config.sc_thresh),
        tca=tca_label(tc, config.tc_thresh),
        n_steps=series.n_steps,
    )


class CoverageAssessor:
    """Coverage assessment with a scikit-learn-style transformer surface.

    Parameters mirror :class:`AssessmentConfig`; ``label_filter`` accepts
    either a :class:`LabelFilter` or a spec string such as
    ``"all-but-cloud"`` or ``"4,5"``.  The estimator learns nothing from
    data -- ``fit`` only validates and resolves the parameters into
    ``config_`` -- but following the protocol lets it sit in sklearn
    pipelines and be cloned.

    ``transform(X)`` maps a sequence of :class:`SceneSeries` to a float
    array of shape ``(n, 2)`` with columns ``[sc, tc]``; ``predict(X)``
    maps it to the corresponding ``[sca, tca]`` label array.
    """

    def __init__(
        self,
        label_filter="all-but-cloud",
        sc_thresh: float = 0.7,
        step_thresh: float | None = None,
        tc_thresh: float = 0.7,
        mode: str = "strict",
    ) -> None:
        self.label_filter = label_filter
        self.sc_thresh = sc_thresh
        self.step_thresh = step_thresh
        self.tc_thresh = tc_thresh
        self.mode = mode

    # -- sklearn estimator protocol ------------------------------------

    def get_params(self, deep: bool = True) -> dict:
        return {
            "label_filter": self.label_filter,
            "sc_thresh": self.sc_thresh,
            "step_thresh": self.step_thresh,
            "tc_thresh": self.tc_thresh,
            "mode": self.mode,
        }

    def set_params(self, **params) -> "CoverageAssessor":
        valid = self.get_params()
        for key, value in params.items():
            if key not in valid:
                raise ValueError(
                    f"invalid parameter {key!r} for CoverageAssessor; "
                    f"valid parameters are {sorted(valid)}"
                )
            setattr(self, key, value)
        return self

    def fit(self, X=None, y=None) -> "CoverageAssessor":
        """Validate parameters and resolve the filter; X is not inspected."""
        _check_mode(self.mode)
        label_filter = self.label_filter
        if isinstance(label_filter, str):
            label_filter = parse_filter(label_filter)
        elif not isinstance(label_filter, LabelFilter):
            raise TypeError(
                "label_filter must be a LabelFilter or a filter spec string, "
                f"got {type(label_filter).__name__}"
            )
        self.config_ = AssessmentConfig(
            label_filter=label_filter,
            sc_thresh=self.sc_thresh,
            step_thresh=self.step_thresh,
            tc_thresh=self.tc_thresh,
        )
        return self

    def _fitted_config(self) -> AssessmentConfig:
        config = getattr(self, "config_", None)
        if config is None:
            raise RuntimeError(
                "this CoverageAssessor instance is not fitted yet; call fit() first"
            )
        return config

    # -- assessment ------------------------------------------------------

    def assess(self, series: SceneSeries) -> RegionAssessment:
        """Full RegionAssessment for a single series."""
        return assess_region(series, self._fitted_config(), mode=self.mode)

    def assess_all(self, X) -> list[RegionAssessment]:
        """Full RegionAssessments for a sequence of series."""
        return [self.assess(series) for series in X]

    def transform(self, X) -> np.ndarray:
        """(n, 2) float array of [sc, tc] per series."""
        rows = [(a.sc, a.tc) for a in self.assess_all(X)]
        return np.array(rows, dtype=float).reshape(len(rows), 2)

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).transform(X)

    def predict(self, X) -> np.ndarray:
        """(n, 2) object array of ["high"/"low" sca, "high"/"low" tca]."""
        rows = [(a.sca, a.tca) for a in self.assess_all(X)]
        return np.array(rows, dtype=object).reshape(len(rows), 2)

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        return np.array(["sc", "tc"], dtype=object)

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"CoverageAssessor({params})"
