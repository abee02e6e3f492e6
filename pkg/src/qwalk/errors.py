"""Exception types shared across the package."""


class QWalkError(Exception):
    """Base class for every error raised by this package."""


class NormError(QWalkError):
    """Amplitudes whose total probability mass is not 1."""


class DegenerateAngle(QWalkError):
    """Coin angle excluded by the analytic formulas (a multiple of pi/2)."""


class DegenerateTime(QWalkError):
    """Operation that is undefined at time t = 0."""


class DomainError(QWalkError):
    """Position argument outside the walk's reachable support."""


class ParityContractError(QWalkError):
    """Requested reconstruction branch disagrees with the state's time parity."""
