"""Exception hierarchy. Each fatal error carries the process exit code the CLI maps it to."""

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_JOIN = 4
EXIT_DEGENERATE = 5


class PipelineError(Exception):
    exit_code = EXIT_USAGE


class ConfigError(PipelineError, ValueError):
    exit_code = EXIT_USAGE


class InputIOError(PipelineError, OSError):
    exit_code = EXIT_IO


class FormatError(PipelineError, ValueError):
    exit_code = EXIT_FORMAT


class IntegrityError(FormatError):
    pass


class AmbiguousMatchError(FormatError):
    pass


class GeoError(PipelineError, ValueError):
    exit_code = EXIT_FORMAT


class UnknownStateError(GeoError):
    def __init__(self, code):
        super().__init__(f"unknown state code {code!r}")
        self.code = code


class InvalidNameError(GeoError):
    pass


class RegionParseError(GeoError):
    pass


class DomainError(PipelineError, ValueError):
    exit_code = EXIT_FORMAT


class EmptyDomainError(DomainError):
    pass


class NonFiniteError(DomainError):
    def __init__(self, index, value):
        super().__init__(f"non-finite value {value!r} at index {index}")
        self.index = index


class EmptyJoinError(PipelineError):
    exit_code = EXIT_JOIN


class ShapeError(PipelineError, ValueError):
    exit_code = EXIT_DEGENERATE


class DegenerateVarianceError(PipelineError, ValueError):
    exit_code = EXIT_DEGENERATE
