"""Exception types shared across the package."""


class QhmetError(Exception):
    """Base class for package-specific errors."""


class DomainMembershipError(QhmetError, ValueError):
    """A queried point is not interior to the domain."""


class AlignmentError(QhmetError, ValueError):
    """Points do not satisfy a radial/diametral alignment precondition."""


class UnsupportedPairError(QhmetError, ValueError):
    """No boundary-gap rule implemented for this inner/outer domain pair."""


class ContainmentError(QhmetError, ValueError):
    """A segment leaves the domain, so its metric length is undefined."""


class ConnectivityError(QhmetError, RuntimeError):
    """Query points fell into different components of the mesh graph.

    Usually cured by a finer mesh (smaller ``h`` or ``min_clearance``).
    """


class MethodUnavailableError(QhmetError, ValueError):
    """An exact closed form was requested for a query none covers."""


class UnknownCheckError(QhmetError, KeyError):
    """Check id is not registered with the verification suite."""
