"""On-disk dataset format: JSON manifest plus raw u8 raster files.

Manifest schema (single UTF-8 JSON document)::

    {"dataset_name": str,
     "regions": [{"region_id": str,
                  "group": str | null,
                  "width": int,
                  "height": int,
                  "steps": [{"timestamp": "YYYY-MM-DD", "path": str}]}]}

Raster files are exactly ``width*height`` bytes, row 0 first, left to
right, one SCL code per byte -- no header, dimensions live in the
manifest.  Step paths are relative to the manifest's directory and use
forward slashes.

The loader validates everything up front (schema, date format, path
uniqueness per region, raster existence) and sorts each region's steps
by timestamp, stable on ties, so downstream code always sees
chronological series regardless of manifest order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateRegion,
    ManifestParseError,
    MissingRaster,
    SizeMismatch,
    UnknownRegion,
)
from .scl import SceneMask, SceneSeries, validate_labels


@dataclass(frozen=True)
class StepEntry:
    timestamp: str  # ISO YYYY-MM-DD
    path: str  # relative to the manifest directory, "/"-separated

    def to_json_dict(self) -> dict:
        return {"timestamp": self.timestamp, "path": self.path}


@dataclass(frozen=True)
class RegionEntry:
    region_id: str
    group: str | None
    width: int
    height: int
    steps: tuple[StepEntry, ...]

    def to_json_dict(self) -> dict:
        return {
            "region_id": self.region_id,
            "group": self.group,
            "width": self.width,
            "height": self.height,
            "steps": [s.to_json_dict() for s in self.steps],
        }


@dataclass(frozen=True)
class DatasetManifest:
    dataset_name: str
    regions: tuple[RegionEntry, ...]
    base_dir: Path  # directory step paths are resolved against

    def region(self, region_id: str) -> RegionEntry:
        for entry in self.regions:
            if entry.region_id == region_id:
                return entry
        raise UnknownRegion(f"region {region_id!r} not in manifest {self.dataset_name!r}")

    def region_ids(self) -> list[str]:
        return [entry.region_id for entry in self.regions]

    def groups(self) -> dict[str, str | None]:
        """region_id -> group mapping, as stated in the manifest."""
        return {entry.region_id: entry.group for entry in self.regions}

    def to_json_dict(self) -> dict:
        return {
            "dataset_name": self.dataset_name,
            "regions": [entry.to_json_dict() for entry in self.regions],
        }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ManifestParseError(message)


def _require_keys(obj: dict, keys: tuple[str, ...], what: str) -> None:
    _require(isinstance(obj, dict), f"{what} must be a JSON object")
    missing = [k for k in keys if k not in obj]
    _require(not missing, f"{what} missing keys: {missing}")
    extra = [k for k in obj if k not in keys]
    _require(not extra, f"{what} has unknown keys: {extra}")


def _check_date(text, what: str) -> str:
    _require(isinstance(text, str), f"{what}: timestamp must be a string")
    try:
        date.fromisoformat(text)
    except ValueError:
        raise ManifestParseError(f"{what}: bad ISO date {text!r}") from None
    return text


def _parse_region(obj, index: int) -> RegionEntry:
    what = f"regions[{index}]"
    _require_keys(obj, ("region_id", "group", "width", "height", "steps"), what)
    region_id = obj["region_id"]
    _require(
        isinstance(region_id, str) and region_id != "",
        f"{what}: region_id must be a non-empty string",
    )
    what = f"region {region_id!r}"
    group = obj["group"]
    _require(
        group is None or isinstance(group, str),
        f"{what}: group must be a string or null",
    )
    width, height = obj["width"], obj["height"]
    for name, value in (("width", width), ("height", height)):
        _require(
            isinstance(value, int) and not isinstance(value, bool) and value >= 1,
            f"{what}: {name} must be an integer >= 1",
        )
    raw_steps = obj["steps"]
    _require(
        isinstance(raw_steps, list) and raw_steps,
        f"{what}: steps must be a non-empty list",
    )
    steps = []
    for j, step in enumerate(raw_steps):
        _require_keys(step, ("timestamp", "path"), f"{what} steps[{j}]")
        timestamp = _check_date(step["timestamp"], f"{what} steps[{j}]")
        path = step["path"]
        _require(
            isinstance(path, str) and path != "",
            f"{what} steps[{j}]: path must be a non-empty string",
        )
        steps.append(StepEntry(timestamp=timestamp, path=path))
    paths = [s.path for s in steps]
    _require(len(set(paths)) == len(paths), f"{what}: step paths are not distinct")
    # Chronological order is established here once; sorted() is stable,
    # so equal timestamps keep their manifest order.
    steps.sort(key=lambda s: s.timestamp)
    return RegionEntry(
        region_id=region_id, group=group, width=width, height=height, steps=tuple(steps)
    )


def load_manifest(path) -> DatasetManifest:
    """Read, validate, and normalize a dataset manifest.

    Raises :class:`ManifestParseError` for malformed JSON or schema
    violations, :class:`DuplicateRegion` for repeated region_ids, and
    :class:`MissingRaster` if any referenced raster file is absent.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestParseError(f"cannot read manifest {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestParseError(f"manifest {path} is not valid JSON: {exc}") from exc
    _require_keys(doc, ("dataset_name", "regions"), "manifest")
    _require(isinstance(doc["dataset_name"], str), "manifest: dataset_name must be a string")
    _require(isinstance(doc["regions"], list), "manifest: regions must be a list")
    regions = [_parse_region(obj, i) for i, obj in enumerate(doc["regions"])]
    seen: set[str] = set()
    for entry in regions:
        if entry.region_id in seen:
            raise DuplicateRegion(f"region {entry.region_id!r} appears more than once")
        seen.add(entry.region_id)
    base_dir = path.parent
    for entry in regions:
        for step in entry.steps:
            raster = base_dir / step.path
            if not raster.is_file():
                raise MissingRaster(f"region {entry.region_id!r}: no such raster {raster}")
    return DatasetManifest(
        dataset_name=doc["dataset_name"], regions=tuple(regions), base_dir=base_dir
    )


def load_mask(path, width: int, height: int, mode: str = "strict") -> SceneMask:
    """Read one raster file as a height x width mask.

    Raises :class:`SizeMismatch` when the file length is not exactly
    ``width*height`` and, in strict mode, :class:`InvalidMask` for codes
    above 11.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingRaster(f"no such raster {path}")
    data = path.read_bytes()
    if len(data) != width * height:
        raise SizeMismatch(
            f"{path}: expected {width * height} bytes for {width}x{height}, "
            f"got {len(data)}"
        )
    labels = np.frombuffer(data, dtype=np.uint8).reshape(height, width)
    if mode == "strict":
        validate_labels(labels, context=str(path))
    elif mode != "lax":
        raise ValueError(f"mode must be 'strict' or 'lax', got {mode!r}")
    return SceneMask(labels)


def load_series_entry(entry: RegionEntry, base_dir, mode: str = "strict") -> SceneSeries:
    """Load all steps of one manifest entry into a SceneSeries."""
    base_dir = Path(base_dir)
    masks = [
        load_mask(base_dir / step.path, entry.width, entry.height, mode=mode)
        for step in entry.steps
    ]
    return SceneSeries(
        region_id=entry.region_id,
        timestamps=[step.timestamp for step in entry.steps],
        masks=masks,
    )


def load_series(manifest: DatasetManifest, region_id: str, mode: str = "strict") -> SceneSeries:
    """Load one region by id; raises :class:`UnknownRegion` if absent."""
    entry = manifest.region(region_id)
    return load_series_entry(entry, manifest.base_dir, mode=mode)


def write_series(
    series: SceneSeries, base_dir, group: str | None = None, dir_name: str | None = None
) -> RegionEntry:
    """Write a series' rasters under ``base_dir`` and return its entry.

    Rasters land in ``<base_dir>/<dir_name or region_id>/`` as
    ``NNNN_<timestamp>.scl``; the returned entry carries the relative,
    "/"-separated paths ready for :func:`write_manifest`.  Round-trip
    with :func:`load_series` is byte-identical.
    """
    base_dir = Path(base_dir)
    rel_dir = dir_name if dir_name is not None else series.region_id
    (base_dir / rel_dir).mkdir(parents=True, exist_ok=True)
    steps = []
    for i, (timestamp, mask) in enumerate(zip(series.timestamps, series.masks)):
        rel_path = f"{rel_dir}/{i:04d}_{timestamp}.scl"
        (base_dir / rel_path).write_bytes(mask.labels.tobytes())
        steps.append(StepEntry(timestamp=timestamp, path=rel_path))
    return RegionEntry(
        region_id=series.region_id,
        group=group,
        width=series.width,
        height=series.height,
        steps=tuple(steps),
    )


def write_manifest(manifest: DatasetManifest, path) -> None:
    """Serialize a manifest to its canonical JSON form (2-space indent,
    keys in schema order, trailing newline)."""
    path = Path(path)
    text = json.dumps(manifest.to_json_dict(), indent=2)
    path.write_text(text + "\n", encoding="utf-8")
