"""Exception types shared across the package."""


class WLCoverError(Exception):
    """Base class for all package errors."""


class DegreeMismatch(WLCoverError, ValueError):
    pass


class CapExceeded(WLCoverError):
    def __init__(self, cap, what="group"):
        super().__init__(f"{what} exceeds cap of {cap}")
        self.cap = cap


class ParseError(WLCoverError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class InconsistentOrientation(WLCoverError, ValueError):
    pass


class UnknownComponent(WLCoverError, KeyError):
    pass


class RelationViolated(WLCoverError):
    def __init__(self, crossing):
        super().__init__(f"Wirtinger relation fails at crossing {crossing}")
        self.crossing = crossing


class NotTransitive(WLCoverError):
    pass


class WrongDiagram(WLCoverError, ValueError):
    pass


class NotApplicable(WLCoverError):
    def __init__(self, kind, site, reason):
        super().__init__(f"{kind} not applicable at {site}: {reason}")
        self.kind = kind
        self.site = site
        self.reason = reason


class RepeatedTarget(WLCoverError, ValueError):
    pass


class TargetOutOfRange(WLCoverError, ValueError):
    pass


class AxisNotSplit(WLCoverError, ValueError):
    pass


class NotAnnular(WLCoverError, ValueError):
    pass


class IncompleteTable(WLCoverError, ValueError):
    pass


class NotAKnot(WLCoverError, ValueError):
    pass


class AddendumViolated(WLCoverError):
    def __init__(self, arc):
        super().__init__(f"regular cycle type mismatch on arc {arc}")
        self.arc = arc
