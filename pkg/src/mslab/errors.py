"""Exception hierarchy shared by every mslab module."""


class MSLabError(Exception):
    """Base class for all library errors."""


class NonFinite(MSLabError):
    pass


class ChartMismatch(MSLabError):
    pass


class ChartSingularity(MSLabError):
    pass


class NonHyperbolic(MSLabError):
    pass


class NoLimit(MSLabError):
    pass


class ResolutionTooCoarse(MSLabError):
    pass


class PeriodMismatch(MSLabError):
    pass


class OrientationTypeMismatch(MSLabError):
    pass


class NonEquivariantInterleaving(MSLabError):
    pass


class InconsistentEmbedding(MSLabError):
    pass


class NotGradientLikeSigma(MSLabError):
    pass


class CaseViolation(MSLabError):
    pass


class SchemaError(MSLabError):
    """Raised when a descriptor file does not match schema ``msd-1``.

    ``field`` names the offending JSON path and ``line`` the source line
    (when it can be recovered).
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
