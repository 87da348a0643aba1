"""Whole-dataset assessment: manifest in, ordered assessments out.

Regions are independent, so they are farmed out to a process pool and
gathered back in sorted-region_id order before anything is emitted --
the output is byte-identical whatever the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .coverage import AssessmentConfig, RegionAssessment, assess_region
from .ingest import DatasetManifest, load_series_entry


def _assess_job(args) -> RegionAssessment:
    entry, base_dir, config, mode = args
    series = load_series_entry(entry, base_dir, mode=mode)
    return assess_region(series, config, mode=mode)


def assess_dataset(
    manifest: DatasetManifest,
    config: AssessmentConfig,
    mode: str = "strict",
    parallelism: int = 0,
) -> list[RegionAssessment]:
    """Assess every region of a dataset, sorted by region_id.

    ``parallelism`` is the worker-process count; 0 means one per CPU and
    1 runs in-process.  Errors from any region (missing raster, size
    mismatch, invalid labels) propagate -- there is no partial output.
    """
    if parallelism < 0:
        raise ValueError(f"parallelism must be >= 0, got {parallelism}")
    entries = sorted(manifest.regions, key=lambda e: e.region_id)
    jobs = [(entry, manifest.base_dir, config, mode) for entry in entries]
    workers = parallelism if parallelism > 0 else (os.cpu_count() or 1)
    if workers <= 1 or len(jobs) <= 1:
        return [_assess_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(jobs) // (workers * 4))
        return list(pool.map(_assess_job, jobs, chunksize=chunk))
