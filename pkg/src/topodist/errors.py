"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the process exit
code the CLI uses when it surfaces the error:

* 2: malformed input files or values
* 3: a metric precondition was violated
* 4: a capacity limit was exceeded
"""


class TopoDistError(Exception):
    exit_code = 1
    code = "error"


class InputFormatError(TopoDistError, ValueError):
    exit_code = 2
    code = "input-format"


class MagicMismatchError(InputFormatError):
    code = "magic-mismatch"


class TruncatedFileError(InputFormatError):
    code = "truncated"


class NonFiniteValueError(InputFormatError):
    code = "non-finite"


class DimensionOverflowError(InputFormatError):
    code = "dimension-overflow"


class TrailingDataError(InputFormatError):
    code = "trailing-data"


class UnsupportedVersionError(InputFormatError):
    code = "unsupported-version"


class SchemaError(InputFormatError):
    code = "schema"


class MetricPreconditionError(TopoDistError, ValueError):
    exit_code = 3
    code = "precondition"


class SampleCountMismatchError(MetricPreconditionError):
    code = "sample-count-mismatch"


class InsufficientSamplesError(MetricPreconditionError):
    code = "insufficient-samples"


class DimensionMismatchError(MetricPreconditionError):
    code = "dimension-mismatch"


class DegenerateInputError(MetricPreconditionError):
    code = "degenerate-input"


class DomainError(MetricPreconditionError):
    code = "domain"


class CapacityError(TopoDistError):
    exit_code = 4
    code = "capacity"
