"""Exception hierarchy shared by all lumen modules.

Every error carries a short kebab-case ``code`` which the command line
front end prints in place of a metric value (``cef,ERROR:achromatic-reference``).
"""


class LumenError(Exception):
    code = "error"


class FormatError(LumenError, ValueError):
    """Malformed or unsupported PNM input."""

    code = "bad-format"


class BadMagic(FormatError):
    code = "bad-magic"


class BadHeader(FormatError):
    code = "bad-header"


class UnsupportedMaxval(FormatError):
    code = "unsupported-maxval"


class Truncated(FormatError):
    code = "truncated"


class ParameterError(LumenError, ValueError):
    code = "bad-parameter"


class DimensionMismatch(ParameterError):
    code = "dimension-mismatch"


class MarkerExceedsMask(ParameterError):
    code = "marker-exceeds-mask"


class BadBlockSize(ParameterError):
    code = "bad-block-size"


class TooSmall(ParameterError):
    code = "too-small"


class MetricUndefined(LumenError, ArithmeticError):
    """A metric whose reference quantity is zero."""

    code = "undefined"


class ZeroReferenceEntropy(MetricUndefined):
    code = "zero-reference-entropy"


class ZeroMinimum(MetricUndefined):
    code = "zero-minimum"


class AchromaticReference(MetricUndefined):
    code = "achromatic-reference"
