"""Exception types shared across the package."""


class MachineError(Exception):
    """Base class for machine construction, validation, and search errors."""


class ArityMismatch(MachineError):
    """A transition label does not have one element per tape."""


class DanglingState(MachineError):
    """A transition or weight refers to a state id outside the machine."""


class ForbiddenEpsilonTransition(MachineError):
    """A transition consumes nothing on every input tape of a machine that
    was not declared epsilon-capable."""


class UnboundOutputVar(MachineError):
    """A wildcard class appears only on output tapes of a transition, so no
    input symbol can ever bind it."""


class MachineSyntaxError(MachineError):
    """Malformed machine text."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnknownSemiring(MachineError):
    """Semiring name not registered."""


class DisconnectedPath(MachineError):
    """Consecutive path transitions do not share a state."""


class DimensionMismatch(MachineError):
    """Pointer vectors, string tuples, or tape sets of unequal size."""


class NoAcceptingPath(MachineError):
    """No successful path of the machine is labeled with the input tuple."""


class EpsilonCycle(MachineError):
    """The machine contains a cycle of transitions that consume no input."""


class NegativeWeight(MachineError):
    """A negative arc weight where the shortest-distance routine forbids it."""


class NegativeCycle(MachineError):
    """A negative-total-weight cycle reachable from the source."""


class InvalidDistribution(MachineError):
    """HMM probabilities do not form proper distributions."""


class UnknownSymbol(MachineError):
    """An observation symbol is not part of the model alphabet."""


class MarkerInAlphabet(MachineError):
    """The alignment filler symbol collides with the input alphabet."""
