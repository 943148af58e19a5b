"""Exception hierarchy shared by every gadgetlab module."""

from __future__ import annotations


class GadgetError(Exception):
    """Base class for all library errors."""


class EmptyGadget(GadgetError):
    pass


class UnknownId(GadgetError):
    pass


class DuplicateTransition(GadgetError):
    pass


class NotTunnelGadget(GadgetError):
    pass


class IllegalTransition(GadgetError):
    pass


class AgentNotAdjacent(GadgetError):
    pass


class BudgetExceeded(GadgetError):
    def __init__(self, max_nodes: int, message: str | None = None):
        super().__init__(message or f"configuration budget of {max_nodes} nodes exhausted")
        self.max_nodes = max_nodes


class InvalidSystem(GadgetError):
    pass


class NotDag(GadgetError):
    pass


class WrongGadgetClass(GadgetError):
    pass


class InvalidTarget(GadgetError):
    pass


class MalformedCertificate(GadgetError):
    pass


class BadDegreeSequence(GadgetError):
    pass


class IllegalShadowTransition(GadgetError):
    pass


class NotShadowGadget(GadgetError):
    pass


class TooManyAgentsPerConnection(GadgetError):
    pass


class UnknownReduction(GadgetError):
    pass


class UnknownGadget(GadgetError):
    pass


class IoFailure(GadgetError):
    pass
