"""Exception hierarchy shared by every module of the kernel."""


class GNError(Exception):
    """Base class for all kernel errors."""

    code = "error"

    def __init__(self, message="", **info):
        super().__init__(message)
        self.info = info

    def to_dict(self):
        d = {"type": type(self).__name__, "message": str(self)}
        d.update({k: _plain(v) for k, v in sorted(self.info.items())})
        return d


def _plain(v):
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


class GNSyntaxError(GNError):
    def __init__(self, message, position):
        super().__init__("%s at position %d" % (message, position), position=position)
        self.position = position


class UnknownSymbol(GNError):
    def __init__(self, name, position):
        super().__init__("unknown symbol %r at position %d" % (name, position),
                         symbol=name, position=position)
        self.symbol = name
        self.position = position


class DomainError(GNError):
    pass


class NotAGauge(GNError):
    pass


class GaugeMismatch(GNError):
    pass


class NotCofinal(GNError):
    pass


class NonMonotoneGauge(GNError):
    pass


class Unbounded(GNError):
    pass


class OutOfFragment(GNError):
    pass


class BadRadius(GNError):
    pass


class EmptySet(GNError):
    pass


class NotSharplyBounded(GNError):
    pass


class EmptyFamily(GNError):
    pass


class ClampViolation(GNError):
    pass


class UnsupportedPartClass(GNError):
    pass


class NoPositiveElement(GNError):
    pass


class NotModerateInTarget(GNError):
    pass


class NotExtendable(GNError):
    pass


class NoClassicalLimit(GNError):
    pass


class SearchCapExceeded(GNError):
    pass


class HypothesisFailed(GNError):
    pass


class ExtractionFailed(GNError):
    pass


class ConfigError(GNError):
    pass
