"""Exceptions shared across the package."""


class ZetatelError(Exception):
    pass


class ParseError(ZetatelError):
    pass


class PoleError(ZetatelError):
    pass


class UnsupportedGrowth(ZetatelError):
    pass


class DivergentSeries(ZetatelError):
    pass


class DivergentIndex(ZetatelError):
    pass


class DivergentBoundary(ZetatelError):
    pass


class NotFound(KeyError, ZetatelError):
    pass
