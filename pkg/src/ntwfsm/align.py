"""Word-pair alignment via best-path search on a five-tape edit machine.

The machine reads the two input words on tapes 1 and 2 and emits the aligned
words on tapes 3 and 4, padding insertion/deletion slots with a filler
symbol (an ordinary alphabet symbol, "-" by default) that a post-processing
step simply strips again.  Tape 5 carries one operation letter per step:
K (keep), I (insert), D (delete).  There is deliberately no substitution
transition; the matrix oracle supports substitution costs, the machine does
not.

The unconstrained machine has a single state and three wildcard transitions.
A variant forbidding an insertion immediately followed by a deletion is a
direct two-state construction (the state remembers "just inserted" and lacks
the delete transition), standing in for a join with a separate constraint
machine over tape 5.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import MarkerInAlphabet
from .machine import ALIGNED_EPS, EPSILON, Literal, NTapeMachine, Var
from .search import best_transduction
from .semirings import TROPICAL_MIN

DEFAULT_MARKER = ALIGNED_EPS

OP_KEEP = "K"
OP_INSERT = "I"
OP_DELETE = "D"


@dataclass(frozen=True)
class AlignerSpec:
    """Costs and symbols for the aligner machine.

    ``alphabet`` (optional) restricts inputs and must not contain the filler
    marker; costs are non-negative integers.
    """

    alphabet: frozenset | None = None
    insert_cost: int = 1
    delete_cost: int = 1
    match_cost: int = 0
    marker: str = DEFAULT_MARKER
    forbid_insert_then_delete: bool = False


@dataclass(frozen=True)
class Alignment:
    """Equal-length aligned words, the operation string, and the total cost."""

    a: str
    b: str
    ops: str
    weight: int


def _check_spec(spec: AlignerSpec):
    if len(spec.marker) != 1:
        raise ValueError(f"marker must be one symbol, got {spec.marker!r}")
    for cost in (spec.insert_cost, spec.delete_cost, spec.match_cost):
        if not isinstance(cost, int) or cost < 0:
            raise ValueError(f"costs must be non-negative integers, got {cost!r}")
    if spec.alphabet is not None and spec.marker in spec.alphabet:
        raise MarkerInAlphabet(f"marker {spec.marker!r} is in the alphabet")


@lru_cache(maxsize=None)
def build_aligner(spec: AlignerSpec = AlignerSpec()) -> NTapeMachine:
    """Five-tape aligner machine for ``spec``; built once per spec and shared
    (machines are immutable)."""
    _check_spec(spec)
    marker = Literal(spec.marker)
    keep = ((Var(1),) * 4 + (Literal(OP_KEEP),), spec.match_cost)
    insert = ((EPSILON, Var(1), marker, Var(1), Literal(OP_INSERT)), spec.insert_cost)
    delete = ((Var(1), EPSILON, Var(1), marker, Literal(OP_DELETE)), spec.delete_cost)
    if not spec.forbid_insert_then_delete:
        machine = NTapeMachine(5, TROPICAL_MIN, num_states=1)
        machine.set_initial(0)
        machine.set_final(0)
        for label, cost in (keep, insert, delete):
            machine.add_transition(0, 0, label, cost)
        return machine
    # State 1 remembers "just inserted" and has no delete transition, which
    # realizes "no ID factor on tape 5" without a join operator.
    machine = NTapeMachine(5, TROPICAL_MIN, num_states=2)
    for q in (0, 1):
        machine.set_initial(q)
        machine.set_final(q)
    machine.add_transition(0, 0, keep[0], keep[1])
    machine.add_transition(0, 0, delete[0], delete[1])
    machine.add_transition(0, 1, insert[0], insert[1])
    machine.add_transition(1, 0, keep[0], keep[1])
    machine.add_transition(1, 1, insert[0], insert[1])
    return machine


def align_pair(a: str, b: str, spec: AlignerSpec = AlignerSpec()) -> Alignment:
    """Best alignment of a word pair under ``spec``.

    The aligned words have equal length and strip back to the inputs; which
    of several cominimal alignments is returned is fixed by the machine's
    transition order.
    """
    _check_spec(spec)
    for word in (a, b):
        if spec.marker in word:
            raise MarkerInAlphabet(
                f"input {word!r} contains the marker {spec.marker!r}"
            )
        if spec.alphabet is not None and not set(word) <= spec.alphabet:
            raise ValueError(f"input {word!r} has symbols outside the alphabet")
    machine = build_aligner(spec)
    result = best_transduction(machine, (a, b), (1, 2))
    aligned_a, aligned_b, ops = result.outputs
    return Alignment(aligned_a, aligned_b, ops, result.weight)


def strip_markers(aligned: str, marker: str = DEFAULT_MARKER) -> str:
    """Remove every filler symbol, recovering the raw word."""
    return aligned.replace(marker, "")
