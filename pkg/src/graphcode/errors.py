"""Exception hierarchy shared by every module."""


class GraphcodeError(Exception):
    pass


class DimensionError(GraphcodeError, ValueError):
    """Two objects that must live on the same vertex set do not."""


class RangeError(GraphcodeError, ValueError):
    """An integer code, rank or index is outside its valid range."""


class ParseError(GraphcodeError, ValueError):
    pass


class NotIsomorphicError(GraphcodeError, ValueError):
    pass


class CapabilityError(GraphcodeError):
    """The request exceeds the brute-force size limit."""
