"""Deterministic synthetic SCL data, portable across platforms and languages.

The generator is counter-based splitmix64 (Steele, Lea & Flood,
"Fast Splittable Pseudorandom Number Generators", OOPSLA 2014).  Draw
``i`` (0-based) of the stream with seed ``s`` is::

    mix64((s + (i+1) * 0x9E3779B97F4A7C15) mod 2^64)

    mix64(z): z ^= z >> 30;  z *= 0xBF58476D1CE4E9B5  (mod 2^64)
              z ^= z >> 27;  z *= 0x94D049BB133111EB  (mod 2^64)
              z ^= z >> 31

which equals the i-th output of the published sequential algorithm but
is random-access, so any pixel can be generated independently (and in
parallel) with bit-identical results.

Pixel mapping: the pixel at timestep ``t``, row ``r``, column ``c`` of a
``width x height x n_steps`` region consumes draw ``t*W*H + r*W + c``.
Its 64-bit draw ``z`` splits into ``hi = z >> 32`` and ``lo = z & 0xFFFFFFFF``:

* the pixel is clean iff ``hi < floor(clean_prob * 2^32 + 1/2)``;
* its label is ``pool[(lo * len(pool)) >> 32]`` where ``pool`` is the
  ascending-sorted member set (clean) or its complement (unclean).

Multi-region datasets derive region ``k``'s seed as draw ``k`` of the
master stream -- the documented splitting rule that makes per-region
generation order-independent.
"""

from __future__ import annotations

import datetime as dt
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ingest import DatasetManifest, RegionEntry, write_manifest, write_series
from .scl import LabelFilter, SceneMask, SceneSeries

GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E9B5
_M2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1

DEFAULT_START_DATE = "2018-01-01"
DEFAULT_CADENCE_DAYS = 5


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit word (scalar reference form)."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * _M1) & _MASK64
    z = ((z ^ (z >> 27)) * _M2) & _MASK64
    return z ^ (z >> 31)


def stream_draw(seed: int, index: int) -> int:
    """Draw ``index`` (0-based) of the splitmix64 stream seeded ``seed``."""
    return mix64(seed + (index + 1) * GAMMA)


def subseed(seed: int, index: int) -> int:
    """Seed of independent child stream ``index`` (the splitting rule)."""
    return stream_draw(seed, index)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps mod 2^64, which is exactly what the
    # scalar form's explicit masking does.
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _clean_cut(clean_prob: float) -> int:
    return int(clean_prob * (1 << 32) + 0.5)


@dataclass(frozen=True)
class SynthSpec:
    """Shape, seed, and label mixture of one synthetic region."""

    width: int
    height: int
    n_steps: int
    seed: int
    clean_prob: float
    label_filter: LabelFilter

    def __post_init__(self) -> None:
        for name in ("width", "height", "n_steps"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")
        object.__setattr__(self, "seed", self.seed & _MASK64)
        prob = float(self.clean_prob)
        if not 0.0 <= prob <= 1.0:
            raise ValueError(f"clean_prob must be in [0, 1], got {prob}")
        object.__setattr__(self, "clean_prob", prob)
        if not isinstance(self.label_filter, LabelFilter):
            raise TypeError(
                f"label_filter must be a LabelFilter, got {type(self.label_filter).__name__}"
            )
        cut = _clean_cut(prob)
        if cut > 0 and not self.label_filter.members:
            raise ValueError("clean_prob > 0 needs a filter with at least one member")
        if cut < (1 << 32) and not self.label_filter.complement:
            raise ValueError("clean_prob < 1 needs a filter with a non-empty complement")


def _generate_labels(spec: SynthSpec) -> np.ndarray:
    """The (n_steps, height, width) uint8 label stack for a spec."""
    members = np.array(sorted(spec.label_filter.members), dtype=np.uint8)
    others = np.array(sorted(spec.label_filter.complement), dtype=np.uint8)
    # One gather table: members first, complement after, so the unclean
    # branch indexes at an offset instead of needing a second gather.
    table = np.concatenate([members, others])
    n_members = np.uint64(len(members))
    n_others = np.uint64(len(others))
    offset = np.uint64(len(members))
    cut = np.uint64(_clean_cut(spec.clean_prob))
    area = spec.width * spec.height
    # (k+1)*GAMMA for k in 0..area-1, precomputed once per region.
    counters = np.arange(1, area + 1, dtype=np.uint64) * np.uint64(GAMMA)
    out = np.empty((spec.n_steps, spec.height, spec.width), dtype=np.uint8)
    lo_mask = np.uint64(0xFFFFFFFF)
    thirty_two = np.uint64(32)
    for t in range(spec.n_steps):
        # Scalar base in Python ints: numpy warns on scalar uint64
        # overflow, and the value must wrap exactly.
        base = np.uint64((spec.seed + t * area * GAMMA) & _MASK64)
        z = _mix64_vec(base + counters)
        hi = z >> thirty_two
        lo = z & lo_mask
        clean = hi < cut
        pick_member = (lo * n_members) >> thirty_two
        pick_other = offset + ((lo * n_others) >> thirty_two)
        out[t] = table[np.where(clean, pick_member, pick_other)].reshape(
            spec.height, spec.width
        )
    out.setflags(write=False)
    return out


def make_timestamps(
    n_steps: int,
    start_date: str = DEFAULT_START_DATE,
    cadence_days: int = DEFAULT_CADENCE_DAYS,
) -> tuple[str, ...]:
    """``n_steps`` ISO dates from ``start_date``, ``cadence_days`` apart."""
    start = dt.date.fromisoformat(start_date)
    if cadence_days < 0:
        raise ValueError(f"cadence_days must be >= 0, got {cadence_days}")
    return tuple(
        (start + dt.timedelta(days=t * cadence_days)).isoformat() for t in range(n_steps)
    )


def generate(
    spec: SynthSpec,
    region_id: str = "synthetic",
    start_date: str = DEFAULT_START_DATE,
    cadence_days: int = DEFAULT_CADENCE_DAYS,
) -> SceneSeries:
    """Generate one region's series, fully determined by ``spec.seed``.

    Each pixel is independently clean with probability ``clean_prob``;
    clean pixels draw uniformly from the filter members, unclean ones
    from the complement (see the module docstring for the exact bits).
    """
    stack = _generate_labels(spec)
    timestamps = make_timestamps(spec.n_steps, start_date, cadence_days)
    masks = [SceneMask(stack[t]) for t in range(spec.n_steps)]
    return SceneSeries(region_id=region_id, timestamps=timestamps, masks=masks)


def _region_id(index: int) -> str:
    return f"region-{index:05d}"


def _build_one(args) -> RegionEntry:
    (index, out_dir, width, height, n_steps, master_seed, clean_prob, label_filter,
     group, start_date, cadence_days) = args
    spec = SynthSpec(
        width=width,
        height=height,
        n_steps=n_steps,
        seed=subseed(master_seed, index),
        clean_prob=clean_prob,
        label_filter=label_filter,
    )
    series = generate(spec, _region_id(index), start_date, cadence_days)
    return write_series(series, out_dir, group=group)


def build_dataset(
    out_dir,
    n_regions: int,
    width: int,
    height: int,
    n_steps: int,
    seed: int,
    clean_prob: float,
    label_filter: LabelFilter,
    groups: list[str] | None = None,
    dataset_name: str = "synthetic",
    start_date: str = DEFAULT_START_DATE,
    cadence_days: int = DEFAULT_CADENCE_DAYS,
    parallelism: int = 1,
) -> DatasetManifest:
    """Write a full synthetic dataset (rasters + ``manifest.json``).

    Region ``k`` gets id ``region-<k:05d>``, seed ``subseed(seed, k)``,
    and -- when ``groups`` is given -- group ``groups[k % len(groups)]``.
    Output is byte-identical for a given seed regardless of
    ``parallelism`` (0 = one worker per CPU, 1 = in-process).
    """
    if n_regions < 1:
        raise ValueError(f"n_regions must be >= 1, got {n_regions}")
    if parallelism < 0:
        raise ValueError(f"parallelism must be >= 0, got {parallelism}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed &= _MASK64
    # Validate shape/probability once up front rather than n_regions times.
    SynthSpec(
        width=width, height=height, n_steps=n_steps, seed=seed,
        clean_prob=clean_prob, label_filter=label_filter,
    )
    jobs = [
        (
            k, out_dir, width, height, n_steps, seed, clean_prob, label_filter,
            groups[k % len(groups)] if groups else None, start_date, cadence_days,
        )
        for k in range(n_regions)
    ]
    workers = parallelism if parallelism > 0 else (os.cpu_count() or 1)
    if workers <= 1 or len(jobs) == 1:
        entries = [_build_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(jobs) // (workers * 4))
            entries = list(pool.map(_build_one, jobs, chunksize=chunk))
    manifest = DatasetManifest(
        dataset_name=dataset_name, regions=tuple(entries), base_dir=out_dir
    )
    write_manifest(manifest, out_dir / "manifest.json")
    return manifest
