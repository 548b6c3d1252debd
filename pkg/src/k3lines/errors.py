"""Exception types raised across the package."""


class K3LinesError(Exception):
    pass


class UnsupportedDegree(K3LinesError):
    pass


class DivisionByZero(K3LinesError, ZeroDivisionError):
    pass


class NotASubfield(K3LinesError):
    pass


class ParseError(K3LinesError, ValueError):
    def __init__(self, msg, line=None, col=None):
        if line is not None:
            msg = "line %d, column %d: %s" % (line, col, msg)
        super().__init__(msg)
        self.line = line
        self.col = col


class VariableClash(K3LinesError):
    pass


class ZeroPolynomial(K3LinesError):
    pass


class ExtensionExceeded(K3LinesError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class PositiveDimensional(K3LinesError):
    pass


class DegenerateSpan(K3LinesError):
    pass


class SameLine(K3LinesError):
    pass


class SingularMatrix(K3LinesError):
    pass


class NotOnSurface(K3LinesError):
    pass


class NotQuartic(K3LinesError):
    pass


class NotK3(K3LinesError):
    pass


class LineNotOnSurface(K3LinesError):
    pass


class InseparableLine(K3LinesError):
    pass


class DegreeZeroLine(K3LinesError):
    pass


class QuasiEllipticLocus(K3LinesError):
    pass


class NormalizationImpossible(K3LinesError):
    pass


class IncompleteProfile(K3LinesError):
    pass


class IncompleteProfiles(K3LinesError):
    pass


class DegenerateParameter(K3LinesError):
    pass


class UnknownName(K3LinesError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
