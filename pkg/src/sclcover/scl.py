"""Domain model for the Sentinel-2 Scene Classification Layer (SCL).

The SCL is a per-pixel class mask distributed with Level-2A products.
Every pixel carries one of twelve class codes:

    ==== ========================
    code name
    ==== ========================
    0    No Data
    1    Saturated or Defective
    2    Dark Area Pixels
    3    Cloud Shadows
    4    Vegetation
    5    Not Vegetated
    6    Water
    7    Unclassified
    8    Cloud Medium
    9    Cloud High
    10   Thin Cirrus
    11   Snow
    ==== ========================

A pixel is *clean* when its code belongs to a chosen label set.  This
module holds the label table, the :class:`LabelFilter` type describing
such sets, parsing for the CLI filter mini-language, and the mask /
time-series containers that the coverage computations consume.
"""

from __future__ import annotations

from datetime import date

import numpy as np

from .errors import BadFilterSpec, EmptySeries, InvalidMask, UnknownLabel

#: Canonical names of the twelve SCL class codes.
SCL_LABEL_NAMES: dict[int, str] = {
    0: "No Data",
    1: "Saturated or Defective",
    2: "Dark Area Pixels",
    3: "Cloud Shadows",
    4: "Vegetation",
    5: "Not Vegetated",
    6: "Water",
    7: "Unclassified",
    8: "Cloud Medium",
    9: "Cloud High",
    10: "Thin Cirrus",
    11: "Snow",
}

MIN_LABEL = 0
MAX_LABEL = 11

#: All defined class codes.
VALID_LABELS: frozenset[int] = frozenset(SCL_LABEL_NAMES)

#: Codes removed by the default filter: cloud shadow plus medium- and
#: high-probability cloud.  Thin cirrus (10) is *not* in this set; it is
#: usually correctable and still counts as a clean view.
CLOUD_LABELS: frozenset[int] = frozenset({3, 8, 9})


def label_name(code: int) -> str:
    """Return the canonical name for an SCL class code.

    Raises :class:`UnknownLabel` for codes outside ``0..11``.
    """
    try:
        return SCL_LABEL_NAMES[int(code)]
    except (KeyError, TypeError, ValueError):
        raise UnknownLabel(f"SCL label code must be in [0, 11], got {code!r}") from None


class LabelFilter:
    """A named set of SCL codes that count as clean.

    Instances are immutable; ``members`` is a frozenset of valid codes.
    """

    __slots__ = ("name", "members")

    def __init__(self, name: str, members) -> None:
        try:
            codes = frozenset(int(c) for c in members)
        except (TypeError, ValueError):
            raise BadFilterSpec(f"filter {name!r}: members must be integers") from None
        bad = sorted(c for c in codes if c not in VALID_LABELS)
        if bad:
            raise BadFilterSpec(f"filter {name!r} has out-of-range codes: {bad}")
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "members", codes)

    def __setattr__(self, key, value):  # pragma: no cover - defensive
        raise AttributeError("LabelFilter is immutable")

    def __reduce__(self):
        # Slots plus a raising __setattr__ defeat the default pickle
        # path; rebuild through the constructor instead.
        return (LabelFilter, (self.name, tuple(sorted(self.members))))

    @property
    def complement(self) -> frozenset[int]:
        """Valid codes *not* in this filter."""
        return VALID_LABELS - self.members

    def __contains__(self, code: int) -> bool:
        return code in self.members

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelFilter):
            return NotImplemented
        return self.name == other.name and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.name, self.members))

    def __repr__(self) -> str:
        return f"LabelFilter({self.name!r}, {{{', '.join(map(str, sorted(self.members)))}}})"


#: Clean = anything that is not cloud shadow or cloud.  Note that 0
#: (No Data) and 1 (Saturated or Defective) are deliberately kept: this
#: filter asks only "is the view cloud-free", not "is the pixel
#: radiometrically useful".
ALL_BUT_CLOUD = LabelFilter("all-but-cloud", VALID_LABELS - CLOUD_LABELS)

#: Clean = vegetated or bare ground only.
VEG_NON_VEG = LabelFilter("veg-non-veg", frozenset({4, 5}))

#: Filters selectable by name on the command line.
BUILTIN_FILTERS: dict[str, LabelFilter] = {
    f.name: f for f in (ALL_BUT_CLOUD, VEG_NON_VEG)
}

#: Name given to ad-hoc filters parsed from a code list.
CUSTOM_FILTER_NAME = "custom"


def parse_filter(spec: str) -> LabelFilter:
    """Parse a filter string into a :class:`LabelFilter`.

    Accepted forms::

        all-but-cloud          # built-in name
        veg-non-veg            # built-in name
        4,5,6                  # comma-separated class codes

    Code lists may contain whitespace around the commas; duplicates are
    collapsed (set semantics).  The resulting ad-hoc filter is named
    ``"custom"``.  Raises :class:`BadFilterSpec` on anything else.
    """
    if not isinstance(spec, str):
        raise BadFilterSpec(f"filter spec must be a string, got {type(spec).__name__}")
    text = spec.strip()
    if not text:
        raise BadFilterSpec("empty filter spec")
    if text in BUILTIN_FILTERS:
        return BUILTIN_FILTERS[text]
    codes: set[int] = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise BadFilterSpec(f"empty code in filter spec {spec!r}")
        try:
            code = int(token)
        except ValueError:
            raise BadFilterSpec(
                f"filter spec {spec!r} is neither a built-in name nor a code list "
                f"(bad token {token!r})"
            ) from None
        if code not in VALID_LABELS:
            raise BadFilterSpec(f"code {code} out of range [0, 11] in filter spec {spec!r}")
        codes.add(code)
    return LabelFilter(CUSTOM_FILTER_NAME, codes)


def render_filter(f: LabelFilter) -> str:
    """Inverse of :func:`parse_filter`: a spec string reproducing ``f``."""
    builtin = BUILTIN_FILTERS.get(f.name)
    if builtin is not None and builtin.members == f.members:
        return f.name
    return ",".join(str(c) for c in sorted(f.members))


def validate_labels(labels: np.ndarray, context: str = "mask") -> None:
    """Raise :class:`InvalidMask` if any code falls outside ``0..11``.

    The error message names the first offending flat index so the bad
    pixel can be located.  ``context`` prefixes the message (typically a
    file path or region id).
    """
    flat = np.asarray(labels).reshape(-1)
    if flat.size == 0:
        return
    if int(flat.max()) > MAX_LABEL or int(flat.min()) < MIN_LABEL:
        bad = (flat > MAX_LABEL) | (flat < MIN_LABEL)
        idx = int(np.argmax(bad))
        raise InvalidMask(
            f"{context}: label {int(flat[idx])} at flat index {idx} outside [0, 11]"
        )


class SceneMask:
    """One height x width grid of SCL codes at a single timestep.

    The pixel array is kept as read-only, C-contiguous uint8 and is
    snapshot on construction, so instances can be shared freely.
    Construction does *not* range-check codes -- that is the job of
    :func:`validate_labels`, applied or skipped according to the
    strict/lax mode of the caller.
    """

    __slots__ = ("labels",)

    def __init__(self, labels) -> None:
        arr = np.asarray(labels)
        if arr.ndim != 2:
            raise ValueError(f"mask must be 2-D (height, width), got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"mask dimensions must be >= 1, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"mask labels must be integers, got dtype {arr.dtype}")
            if int(arr.min()) < 0 or int(arr.max()) > 255:
                raise ValueError("mask labels must fit in an unsigned byte")
            arr = arr.astype(np.uint8)
        elif arr.flags.writeable:
            arr = arr.copy()
        elif not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    def __setattr__(self, key, value):  # pragma: no cover - defensive
        raise AttributeError("SceneMask is immutable")

    def __reduce__(self):
        return (SceneMask, (np.array(self.labels),))

    @property
    def shape(self) -> tuple[int, int]:
        """(height, width)."""
        return self.labels.shape

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def area(self) -> int:
        """Total pixel count (width * height)."""
        return self.labels.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, SceneMask):
            return NotImplemented
        return self.labels.shape == other.labels.shape and bool(
            np.array_equal(self.labels, other.labels)
        )

    __hash__ = None  # mutable-by-content semantics; not hashable

    def __repr__(self) -> str:
        return f"SceneMask({self.height}x{self.width})"


class SceneSeries:
    """An ordered, timestamped sequence of masks for one sample region.

    Invariants checked on construction:

    * at least one timestep (:class:`EmptySeries` otherwise),
    * one ISO ``YYYY-MM-DD`` timestamp per mask, in non-decreasing order,
    * all masks share the same width and height.
    """

    __slots__ = ("region_id", "timestamps", "masks")

    def __init__(self, region_id: str, timestamps, masks) -> None:
        timestamps = tuple(str(t) for t in timestamps)
        masks = tuple(masks)
        rid = str(region_id)
        if not masks:
            raise EmptySeries(f"region {rid!r} has no timesteps")
        if len(timestamps) != len(masks):
            raise ValueError(
                f"region {rid!r}: {len(timestamps)} timestamps for {len(masks)} masks"
            )
        for ts in timestamps:
            try:
                date.fromisoformat(ts)
            except ValueError:
                raise ValueError(f"region {rid!r}: bad ISO date {ts!r}") from None
        if any(a > b for a, b in zip(timestamps, timestamps[1:])):
            raise ValueError(f"region {rid!r}: timestamps not in chronological order")
        for m in masks:
            if not isinstance(m, SceneMask):
                raise TypeError(f"region {rid!r}: masks must be SceneMask instances")
        w, h = masks[0].width, masks[0].height
        for i, m in enumerate(masks[1:], start=1):
            if m.width != w or m.height != h:
                raise ValueError(
                    f"region {rid!r}: mask {i} is {m.height}x{m.width}, expected {h}x{w}"
                )
        object.__setattr__(self, "region_id", rid)
        object.__setattr__(self, "timestamps", timestamps)
        object.__setattr__(self, "masks", masks)

    def __setattr__(self, key, value):  # pragma: no cover - defensive
        raise AttributeError("SceneSeries is immutable")

    def __reduce__(self):
        return (SceneSeries, (self.region_id, self.timestamps, self.masks))

    @property
    def n_steps(self) -> int:
        return len(self.masks)

    @property
    def width(self) -> int:
        return self.masks[0].width

    @property
    def height(self) -> int:
        return self.masks[0].height

    def __len__(self) -> int:
        return len(self.masks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SceneSeries):
            return NotImplemented
        return (
            self.region_id == other.region_id
            and self.timestamps == other.timestamps
            and self.masks == other.masks
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"SceneSeries({self.region_id!r}, {self.n_steps} steps, "
            f"{self.height}x{self.width})"
        )
