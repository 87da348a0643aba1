import json
import random

import numpy as np
import pytest

from conftest import make_series
from sclcover import (
    DatasetManifest,
    DuplicateRegion,
    InvalidMask,
    ManifestParseError,
    MissingRaster,
    SceneMask,
    SizeMismatch,
    UnknownRegion,
    load_manifest,
    load_mask,
    load_series,
    write_manifest,
    write_series,
)


def write_minimal(tmp_path, **overrides):
    """A 1-region, 1-step dataset; overrides patch the region dict."""
    (tmp_path / "r1").mkdir(exist_ok=True)
    (tmp_path / "r1" / "a.scl").write_bytes(bytes([4, 5, 8, 4]))
    region = {
        "region_id": "r1",
        "group": None,
        "width": 2,
        "height": 2,
        "steps": [{"timestamp": "2020-01-01", "path": "r1/a.scl"}],
    }
    region.update(overrides)
    doc = {"dataset_name": "mini", "regions": [region]}
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc))
    return path


# ----------------------------------------------------------- load_manifest

def test_load_minimal_manifest(tmp_path):
    manifest = load_manifest(write_minimal(tmp_path))
    assert manifest.dataset_name == "mini"
    assert manifest.region_ids() == ["r1"]
    entry = manifest.region("r1")
    assert (entry.width, entry.height, entry.group) == (2, 2, None)
    assert [s.path for s in entry.steps] == ["r1/a.scl"]
    assert manifest.base_dir == tmp_path


def test_missing_raster_names_path(tmp_path):
    path = write_minimal(
        tmp_path, steps=[{"timestamp": "2020-01-01", "path": "r1/ghost.scl"}]
    )
    with pytest.raises(MissingRaster) as exc:
        load_manifest(path)
    assert "ghost.scl" in str(exc.value)


def test_duplicate_region_id(tmp_path):
    path = write_minimal(tmp_path)
    doc = json.loads(path.read_text())
    doc["regions"].append(dict(doc["regions"][0]))
    path.write_text(json.dumps(doc))
    with pytest.raises(DuplicateRegion):
        load_manifest(path)


def test_manifest_not_json(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text("{not json")
    with pytest.raises(ManifestParseError):
        load_manifest(path)


def test_manifest_unreadable(tmp_path):
    with pytest.raises(ManifestParseError):
        load_manifest(tmp_path / "absent.json")


@pytest.mark.parametrize(
    "overrides",
    [
        {"region_id": ""},
        {"region_id": 7},
        {"group": 3},
        {"width": 0},
        {"width": "2"},
        {"width": True},
        {"height": -1},
        {"steps": []},
        {"steps": [{"timestamp": "2020-1-1", "path": "r1/a.scl"}]},
        {"steps": [{"timestamp": "2020-01-01", "path": ""}]},
        {"steps": [{"timestamp": "2020-01-01"}]},
        {"steps": [{"timestamp": "2020-01-01", "path": "r1/a.scl", "extra": 1}]},
        {"extra_key": 1},
    ],
)
def test_manifest_schema_violations(tmp_path, overrides):
    path = write_minimal(tmp_path, **overrides)
    with pytest.raises(ManifestParseError):
        load_manifest(path)


def test_manifest_duplicate_step_paths(tmp_path):
    path = write_minimal(
        tmp_path,
        steps=[
            {"timestamp": "2020-01-01", "path": "r1/a.scl"},
            {"timestamp": "2020-01-02", "path": "r1/a.scl"},
        ],
    )
    with pytest.raises(ManifestParseError):
        load_manifest(path)


def test_manifest_top_level_schema(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"regions": []}))
    with pytest.raises(ManifestParseError):
        load_manifest(path)
    path.write_text(json.dumps({"dataset_name": "x", "regions": {}}))
    with pytest.raises(ManifestParseError):
        load_manifest(path)
    path.write_text(json.dumps([1, 2]))
    with pytest.raises(ManifestParseError):
        load_manifest(path)


def test_manifest_empty_regions_is_valid(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"dataset_name": "empty", "regions": []}))
    manifest = load_manifest(path)
    assert manifest.regions == ()


def test_manifest_sorts_steps_by_timestamp(tmp_path):
    (tmp_path / "r1").mkdir()
    for name, fill in (("b.scl", 1), ("a.scl", 2), ("c.scl", 3)):
        (tmp_path / "r1" / name).write_bytes(bytes([fill] * 4))
    path = write_minimal(
        tmp_path,
        steps=[
            {"timestamp": "2020-03-01", "path": "r1/c.scl"},
            {"timestamp": "2020-01-01", "path": "r1/b.scl"},
            {"timestamp": "2020-02-01", "path": "r1/a.scl"},
        ],
    )
    entry = load_manifest(path).region("r1")
    assert [s.timestamp for s in entry.steps] == ["2020-01-01", "2020-02-01", "2020-03-01"]
    assert [s.path for s in entry.steps] == ["r1/b.scl", "r1/a.scl", "r1/c.scl"]


def test_manifest_step_sort_stable_on_ties(tmp_path):
    (tmp_path / "r1").mkdir()
    for name, fill in (("x.scl", 1), ("y.scl", 2), ("z.scl", 3)):
        (tmp_path / "r1" / name).write_bytes(bytes([fill] * 4))
    path = write_minimal(
        tmp_path,
        steps=[
            {"timestamp": "2020-01-05", "path": "r1/z.scl"},
            {"timestamp": "2020-01-01", "path": "r1/x.scl"},
            {"timestamp": "2020-01-01", "path": "r1/y.scl"},
        ],
    )
    entry = load_manifest(path).region("r1")
    # the two 01-01 steps keep their relative manifest order: x before y
    assert [s.path for s in entry.steps] == ["r1/x.scl", "r1/y.scl", "r1/z.scl"]


# --------------------------------------------------------------- load_mask

def test_load_mask_bytes(tmp_path):
    raster = tmp_path / "m.scl"
    raster.write_bytes(bytes([0x04, 0x05, 0x08, 0x04]))
    mask = load_mask(raster, 2, 2)
    assert mask.labels.tolist() == [[4, 5], [8, 4]]


def test_load_mask_size_mismatch(tmp_path):
    raster = tmp_path / "m.scl"
    raster.write_bytes(bytes([4, 5, 8]))
    with pytest.raises(SizeMismatch):
        load_mask(raster, 2, 2)


def test_load_mask_strict_vs_lax(tmp_path):
    raster = tmp_path / "m.scl"
    raster.write_bytes(bytes([0x0C, 4, 4, 4]))
    with pytest.raises(InvalidMask) as exc:
        load_mask(raster, 2, 2)
    assert "index 0" in str(exc.value)
    mask = load_mask(raster, 2, 2, mode="lax")
    assert mask.labels[0, 0] == 12


def test_load_mask_missing(tmp_path):
    with pytest.raises(MissingRaster):
        load_mask(tmp_path / "nope.scl", 2, 2)


def test_load_mask_bad_mode(tmp_path):
    raster = tmp_path / "m.scl"
    raster.write_bytes(bytes(4))
    with pytest.raises(ValueError):
        load_mask(raster, 2, 2, mode="whatever")


# ------------------------------------------------------------- load_series

def test_load_series(tmp_path):
    (tmp_path / "r1").mkdir()
    for i, stamp in enumerate(["2020-01-01", "2020-01-06", "2020-01-11"]):
        (tmp_path / "r1" / f"{i}.scl").write_bytes(bytes([i] * 4))
    path = write_minimal(
        tmp_path,
        steps=[
            {"timestamp": "2020-01-11", "path": "r1/2.scl"},
            {"timestamp": "2020-01-01", "path": "r1/0.scl"},
            {"timestamp": "2020-01-06", "path": "r1/1.scl"},
        ],
    )
    manifest = load_manifest(path)
    series = load_series(manifest, "r1")
    assert series.n_steps == 3
    assert series.timestamps == ("2020-01-01", "2020-01-06", "2020-01-11")
    assert [m.labels[0, 0] for m in series.masks] == [0, 1, 2]


def test_load_series_unknown_region(tmp_path):
    manifest = load_manifest(write_minimal(tmp_path))
    with pytest.raises(UnknownRegion):
        load_series(manifest, "r9")


def test_load_series_size_mismatch_on_disk(tmp_path):
    path = write_minimal(tmp_path, width=3)
    with pytest.raises(SizeMismatch):
        load_series(load_manifest(path), "r1")


def test_load_order_independence(tmp_path):
    rng = random.Random(13)
    base = tmp_path
    entries = []
    for i in range(3):
        series = make_series(rng, 4, 3, 3, region_id=f"r{i}")
        entries.append(write_series(series, base, group="g"))
    manifest = DatasetManifest(dataset_name="d", regions=tuple(entries), base_dir=base)
    forward = [load_series(manifest, f"r{i}") for i in range(3)]
    backward = [load_series(manifest, f"r{i}") for i in reversed(range(3))]
    assert forward == list(reversed(backward))


# ------------------------------------------------------------- round trips

def test_write_load_round_trip(tmp_path):
    rng = random.Random(17)
    series = make_series(rng, 5, 4, 3, region_id="area-1")
    entry = write_series(series, tmp_path, group="west")
    manifest = DatasetManifest(dataset_name="rt", regions=(entry,), base_dir=tmp_path)
    write_manifest(manifest, tmp_path / "manifest.json")

    loaded_manifest = load_manifest(tmp_path / "manifest.json")
    assert loaded_manifest.region("area-1") == entry
    loaded = load_series(loaded_manifest, "area-1")
    assert loaded == series

    # writing the loaded series back produces byte-identical rasters
    out2 = tmp_path / "again"
    entry2 = write_series(loaded, out2, group="west")
    for s1, s2 in zip(entry.steps, entry2.steps):
        assert (tmp_path / s1.path).read_bytes() == (out2 / s2.path).read_bytes()


def test_write_manifest_trailing_newline_and_layout(tmp_path):
    rng = random.Random(19)
    series = make_series(rng, 2, 2, 1, region_id="only")
    entry = write_series(series, tmp_path)
    manifest = DatasetManifest(dataset_name="d", regions=(entry,), base_dir=tmp_path)
    write_manifest(manifest, tmp_path / "m.json")
    text = (tmp_path / "m.json").read_text()
    assert text.endswith("}\n")
    doc = json.loads(text)
    assert list(doc) == ["dataset_name", "regions"]
    assert list(doc["regions"][0]) == ["region_id", "group", "width", "height", "steps"]


def test_groups_mapping(tmp_path):
    rng = random.Random(23)
    entries = [
        write_series(make_series(rng, 2, 2, 1, region_id="a"), tmp_path, group="g1"),
        write_series(make_series(rng, 2, 2, 1, region_id="b"), tmp_path, group=None),
    ]
    manifest = DatasetManifest(dataset_name="d", regions=tuple(entries), base_dir=tmp_path)
    assert manifest.groups() == {"a": "g1", "b": None}
