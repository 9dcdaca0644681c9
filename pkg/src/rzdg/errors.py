"""Exception hierarchy shared by the ring, graph and solver modules."""


class RzdgError(Exception):
    """Base class for all library errors."""


class InvalidModulusError(RzdgError, ValueError):
    pass


class CapacityError(RzdgError, ValueError):
    """An instance exceeds a configured size cap."""


class ElementShapeError(RzdgError, ValueError):
    pass


class HypothesisError(RzdgError, ValueError):
    """A quantity was requested whose defining hypothesis does not hold."""


class GraphError(RzdgError, ValueError):
    pass


class InfeasibleError(RzdgError):
    """The brute-force oracle refuses instances above its hard cap."""


class ParseError(RzdgError, ValueError):
    pass
