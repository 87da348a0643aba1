"""Exception hierarchy.

Everything raised on purpose by this package derives from
:class:`SclCoverError`, so callers can catch one type at the boundary.
The CLI maps these to exit code 2 (bad data) unless the problem is a
malformed command line, which click reports as a usage error (exit 1).
"""


class SclCoverError(Exception):
    """Base class for all errors raised by sclcover."""


class UnknownLabel(SclCoverError):
    """An SCL class code outside the defined range 0..11."""


class BadFilterSpec(SclCoverError):
    """A filter string that cannot be parsed into a label set."""


class InvalidMask(SclCoverError):
    """A mask contains label codes outside 0..11 (strict mode only)."""


class EmptySeries(SclCoverError):
    """A scene series with zero timesteps."""


class ManifestParseError(SclCoverError):
    """A dataset manifest that is not valid JSON or violates the schema."""


class MissingRaster(SclCoverError):
    """A raster file referenced by the manifest does not exist."""


class DuplicateRegion(SclCoverError):
    """The same region_id appears more than once in a manifest."""


class SizeMismatch(SclCoverError):
    """A raster file whose byte length does not match width * height."""


class UnknownRegion(SclCoverError):
    """A region_id that is not present in the manifest."""


class EmptyInput(SclCoverError):
    """An aggregation or statistic asked of an empty collection."""


class DegenerateInput(SclCoverError):
    """A statistic that is undefined for the given input (too few points,
    or zero variance where a correlation is requested)."""


class MetricsParseError(SclCoverError):
    """A metrics CSV that is malformed or has the wrong columns."""


class UnknownRegionInMetrics(SclCoverError):
    """A metrics row references a region with no assessment."""
