"""Exception hierarchy shared across the package."""


class CfdoError(Exception):
    """Base class for all package errors."""


class DimensionError(CfdoError, ValueError):
    """A vector or matrix has the wrong shape for the problem."""


class ParseError(CfdoError, ValueError):
    """A data file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class UnknownObjectiveError(CfdoError, KeyError):
    """The requested objective name is not registered."""

    def __init__(self, name, valid):
        self.name = name
        self.valid = sorted(valid)
        super().__init__(name)

    def __str__(self):
        return f"unknown objective {self.name!r}; valid names: {', '.join(self.valid)}"


class EncodingError(CfdoError, ValueError):
    """A permutation is not a bijection on 1..n."""


class SizeError(CfdoError, ValueError):
    """An instance is too large for exhaustive enumeration."""


class DegenerateSampleError(CfdoError, ValueError):
    """A sample is too small for the requested statistic."""


class ConfigError(CfdoError, ValueError):
    """An experiment or CLI configuration is invalid."""

    def __init__(self, message, flag=None):
        self.flag = flag
        super().__init__(message)
