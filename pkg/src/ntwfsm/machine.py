"""Data model for n-tape weighted machines, plus the line-oriented text format.

A machine is a set of dense-id states with initial/final weights and
transitions whose labels carry one element per tape.  A label element is
either a literal string over the alphabet (possibly multi-symbol, possibly
empty, i.e. an epsilon) or a single-symbol wildcard carrying a class id;
wildcards sharing a class id within one transition must resolve to the same
symbol.  The alphabet is implicit: it is whatever Unicode scalar values occur
in inputs and literals.

Machines are treated as immutable once built and may be shared freely across
concurrent searches.

Text format (UTF-8, line-oriented, ``#`` starts a full-line comment)::

    ntwfsm n=<arity> semiring=<name> [eps-mode]
    i <state> <weight>
    f <state> <weight>
    t <src> <dst> <label-1> ... <label-n> <weight>

A label token is a literal string, ``<eps>`` for the empty string, ``<aeps>``
for the default aligned-epsilon filler symbol (an ordinary alphabet symbol),
or ``?<class-id>`` for a wildcard.  Weights are decimal integers for the
tropical semirings and decimal floats for probabilities; ``inf`` and ``-inf``
are allowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    DanglingState,
    DisconnectedPath,
    ForbiddenEpsilonTransition,
    MachineSyntaxError,
    UnboundOutputVar,
)
from .semirings import Semiring, semiring_by_name


@dataclass(frozen=True)
class Literal:
    """Fixed string consumed/emitted on one tape; empty text is an epsilon."""

    text: str


@dataclass(frozen=True)
class Var:
    """Single-symbol wildcard; equal class ids bind to the same symbol."""

    cls: int


EPSILON = Literal("")

# Concrete symbol the <aeps> token denotes; also the default alignment filler.
ALIGNED_EPS = "-"


def as_label_element(x):
    """Coerce a plain string to a Literal; pass label elements through."""
    if isinstance(x, (Literal, Var)):
        return x
    if isinstance(x, str):
        return Literal(x)
    raise TypeError(f"not a label element: {x!r}")


@dataclass(frozen=True)
class Transition:
    src: int
    dst: int
    label: tuple
    weight: object


class NTapeMachine:
    """Weighted machine over ``arity`` tapes.

    States are dense integer ids.  An initial weight equal to the semiring
    zero means "not initial"; likewise for final weights.  Transition order
    is preserved (file order), and searches iterate transitions in that
    order, which fixes all tie-breaking.
    """

    def __init__(self, arity, semiring: Semiring, num_states=0, eps_mode=False):
        if arity < 1:
            raise ValueError(f"arity must be >= 1, got {arity}")
        self.arity = arity
        self.semiring = semiring
        self.eps_mode = eps_mode
        self._initial = [semiring.zero] * num_states
        self._final = [semiring.zero] * num_states
        self.transitions = []
        self._by_source = None

    @property
    def num_states(self):
        return len(self._initial)

    def add_state(self, count=1):
        """Append ``count`` fresh states; returns the first new id."""
        first = self.num_states
        self._initial.extend([self.semiring.zero] * count)
        self._final.extend([self.semiring.zero] * count)
        return first

    def _check_state(self, q):
        if not 0 <= q < self.num_states:
            raise DanglingState(f"state {q} outside 0..{self.num_states - 1}")

    def set_initial(self, q, weight=None):
        self._check_state(q)
        self._initial[q] = self.semiring.one if weight is None else weight

    def set_final(self, q, weight=None):
        self._check_state(q)
        self._final[q] = self.semiring.one if weight is None else weight

    def initial_weight(self, q):
        return self._initial[q]

    def final_weight(self, q):
        return self._final[q]

    def initial_states(self):
        """Yield (state, weight) for states with nonzero initial weight."""
        zero = self.semiring.zero
        for q, w in enumerate(self._initial):
            if w != zero:
                yield q, w

    def final_states(self):
        zero = self.semiring.zero
        for q, w in enumerate(self._final):
            if w != zero:
                yield q, w

    def add_transition(self, src, dst, label, weight):
        """Append a transition; label elements may be given as plain strings.

        State ids are not checked here (validate reports DanglingState), but
        the label must have one element per tape.
        """
        label = tuple(as_label_element(x) for x in label)
        if len(label) != self.arity:
            raise ArityMismatch(
                f"label has {len(label)} elements, machine has {self.arity} tapes"
            )
        t = Transition(src, dst, label, weight)
        self.transitions.append(t)
        self._by_source = None
        return t

    def transitions_from(self, q):
        """Outgoing transitions of ``q`` in file order."""
        if self._by_source is None:
            by_source = [[] for _ in range(self.num_states)]
            for t in self.transitions:
                by_source[t.src].append(t)
            self._by_source = by_source
        return self._by_source[q]

    def symbols(self):
        """Set of characters occurring in literal label elements."""
        out = set()
        for t in self.transitions:
            for el in t.label:
                if isinstance(el, Literal):
                    out.update(el.text)
        return out

    def with_semiring(self, semiring: Semiring):
        """Copy of this machine under another semiring with the same weight
        carrier.  Weights equal to the old zero become the new zero, so
        non-initial/non-final states and dead arcs keep their meaning."""
        m = NTapeMachine(self.arity, semiring, self.num_states, self.eps_mode)
        old_zero = self.semiring.zero
        new_zero = semiring.zero

        def carry(w):
            return new_zero if w == old_zero else w

        m._initial = [carry(w) for w in self._initial]
        m._final = [carry(w) for w in self._final]
        m.transitions = [
            Transition(t.src, t.dst, t.label, carry(t.weight)) for t in self.transitions
        ]
        return m

    def __eq__(self, other):
        if not isinstance(other, NTapeMachine):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.semiring.name == other.semiring.name
            and self.eps_mode == other.eps_mode
            and self._initial == other._initial
            and self._final == other._final
            and self.transitions == other.transitions
        )

    def __repr__(self):
        return (
            f"NTapeMachine(arity={self.arity}, semiring={self.semiring.name!r}, "
            f"states={self.num_states}, transitions={len(self.transitions)})"
        )


def normalize_input_tapes(arity, input_tapes):
    """1-based tape indices -> sorted 0-based tuple; rejects bad index sets."""
    given = list(input_tapes)
    tapes = sorted(set(given))
    if not tapes:
        raise ValueError("input tape set is empty")
    if len(tapes) != len(given):
        raise ValueError(f"duplicate input tape in {given}")
    if tapes[0] < 1 or tapes[-1] > arity:
        raise ValueError(f"input tapes {tapes} outside 1..{arity}")
    return tuple(i - 1 for i in tapes)


def _advances(label, tapes0):
    """True iff matching this label consumes at least one input symbol."""
    for i in tapes0:
        el = label[i]
        if isinstance(el, Var) or el.text:
            return True
    return False


def validate(machine: NTapeMachine, input_tapes, allow_eps=None):
    """Check structural well-formedness of ``machine`` for a search over
    ``input_tapes`` (1-based indices).

    Raises ArityMismatch, DanglingState, ForbiddenEpsilonTransition, or
    UnboundOutputVar.  ``allow_eps`` defaults to the machine's declared
    eps-mode.
    """
    if allow_eps is None:
        allow_eps = machine.eps_mode
    tapes0 = normalize_input_tapes(machine.arity, input_tapes)
    tapes0_set = set(tapes0)
    for t in machine.transitions:
        if len(t.label) != machine.arity:
            raise ArityMismatch(
                f"transition {t.src}->{t.dst} has {len(t.label)} label elements"
            )
        for q in (t.src, t.dst):
            if not 0 <= q < machine.num_states:
                raise DanglingState(f"transition endpoint {q} is not a state")
        if not allow_eps and not _advances(t.label, tapes0):
            raise ForbiddenEpsilonTransition(
                f"transition {t.src}->{t.dst} consumes nothing on the input tapes"
            )
        input_classes = {
            el.cls for i in tapes0 if isinstance((el := t.label[i]), Var)
        }
        for i, el in enumerate(t.label):
            if i in tapes0_set or not isinstance(el, Var):
                continue
            if el.cls not in input_classes:
                raise UnboundOutputVar(
                    f"wildcard class {el.cls} on output tape {i + 1} of "
                    f"transition {t.src}->{t.dst} is never bound by an input tape"
                )


def path_weight(machine: NTapeMachine, path, anchor=None):
    """Weight of a connected transition sequence: initial weight of the first
    source, times all transition weights, times the final weight of the last
    target.  A length-0 path needs an ``anchor`` state and is worth
    lambda(anchor) times rho(anchor)."""
    sr = machine.semiring
    path = list(path)
    if not path:
        if anchor is None:
            raise ValueError("length-0 path needs an anchor state")
        return sr.times(machine.initial_weight(anchor), machine.final_weight(anchor))
    for a, b in zip(path, path[1:]):
        if a.dst != b.src:
            raise DisconnectedPath(f"{a.dst} != {b.src} between consecutive transitions")
    w = machine.initial_weight(path[0].src)
    for t in path:
        w = sr.times(w, t.weight)
    return sr.times(w, machine.final_weight(path[-1].dst))


# --- text serialization ----------------------------------------------------

_EPS_TOKEN = "<eps>"
_AEPS_TOKEN = "<aeps>"


def _parse_weight(semiring, token, line):
    try:
        if token == "inf":
            return math.inf
        if token == "-inf":
            return -math.inf
        if semiring.name.startswith("tropical"):
            return int(token)
        return float(token)
    except ValueError:
        raise MachineSyntaxError(f"bad weight {token!r}", line) from None


def format_weight(weight):
    if weight == math.inf:
        return "inf"
    if weight == -math.inf:
        return "-inf"
    return repr(weight) if isinstance(weight, float) else str(weight)


def _parse_label_token(token, line):
    if token == _EPS_TOKEN:
        return EPSILON
    if token == _AEPS_TOKEN:
        return Literal(ALIGNED_EPS)
    if token.startswith("?"):
        try:
            return Var(int(token[1:]))
        except ValueError:
            raise MachineSyntaxError(f"bad wildcard token {token!r}", line) from None
    if token.startswith("<"):
        raise MachineSyntaxError(f"unknown reserved token {token!r}", line)
    return Literal(token)


def format_label_element(el):
    if isinstance(el, Var):
        return f"?{el.cls}"
    if el.text == "":
        return _EPS_TOKEN
    if el.text.startswith(("<", "?")) or any(c.isspace() for c in el.text):
        raise ValueError(f"literal {el.text!r} is not representable in the text format")
    return el.text


def _parse_int(token, line, what):
    try:
        return int(token)
    except ValueError:
        raise MachineSyntaxError(f"bad {what} {token!r}", line) from None


def parse_machine(text) -> NTapeMachine:
    """Parse the text format; raises MachineSyntaxError with a line number,
    ArityMismatch on mislabeled transition lines, or UnknownSemiring."""
    machine = None
    max_state = -1
    pending = []  # (kind, line_no, fields) applied after all states are known
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if machine is None:
            if tokens[0] != "ntwfsm":
                raise MachineSyntaxError(
                    f"expected 'ntwfsm' header, got {tokens[0]!r}", line_no
                )
            arity = semiring = None
            eps_mode = False
            for tok in tokens[1:]:
                if tok == "eps-mode":
                    eps_mode = True
                elif tok.startswith("n="):
                    arity = _parse_int(tok[2:], line_no, "arity")
                elif tok.startswith("semiring="):
                    semiring = semiring_by_name(tok[len("semiring="):])
                else:
                    raise MachineSyntaxError(f"unknown header field {tok!r}", line_no)
            if arity is None or semiring is None:
                raise MachineSyntaxError("header needs n= and semiring=", line_no)
            if arity < 1:
                raise MachineSyntaxError(f"arity must be >= 1, got {arity}", line_no)
            machine = NTapeMachine(arity, semiring, eps_mode=eps_mode)
            continue
        tag = tokens[0]
        if tag in ("i", "f"):
            if len(tokens) != 3:
                raise MachineSyntaxError(f"expected '{tag} <state> <weight>'", line_no)
            q = _parse_int(tokens[1], line_no, "state id")
            w = _parse_weight(machine.semiring, tokens[2], line_no)
            max_state = max(max_state, q)
            pending.append((tag, line_no, (q, w)))
        elif tag == "t":
            if len(tokens) != 4 + machine.arity:
                raise ArityMismatch(
                    f"line {line_no}: transition line has {len(tokens) - 4} label "
                    f"tokens, machine has {machine.arity} tapes"
                )
            src = _parse_int(tokens[1], line_no, "state id")
            dst = _parse_int(tokens[2], line_no, "state id")
            label = tuple(
                _parse_label_token(tok, line_no) for tok in tokens[3:3 + machine.arity]
            )
            w = _parse_weight(machine.semiring, tokens[-1], line_no)
            max_state = max(max_state, src, dst)
            pending.append(("t", line_no, (src, dst, label, w)))
        else:
            raise MachineSyntaxError(f"unknown line tag {tag!r}", line_no)
    if machine is None:
        raise MachineSyntaxError("empty machine text")
    if max_state >= 0:
        machine.add_state(max_state + 1)
    for tag, _line_no, fields in pending:
        if tag == "i":
            machine.set_initial(*fields)
        elif tag == "f":
            machine.set_final(*fields)
        else:
            machine.add_transition(*fields)
    return machine


def write_machine(machine: NTapeMachine) -> str:
    """Serialize to the text format; parse(write(m)) is structurally equal
    to m."""
    lines = [
        "ntwfsm n=%d semiring=%s%s"
        % (machine.arity, machine.semiring.name, " eps-mode" if machine.eps_mode else "")
    ]
    max_ref = -1
    for q, w in machine.initial_states():
        lines.append(f"i {q} {format_weight(w)}")
        max_ref = max(max_ref, q)
    for q, w in machine.final_states():
        lines.append(f"f {q} {format_weight(w)}")
        max_ref = max(max_ref, q)
    for t in machine.transitions:
        label = " ".join(format_label_element(el) for el in t.label)
        lines.append(f"t {t.src} {t.dst} {label} {format_weight(t.weight)}")
        max_ref = max(max_ref, t.src, t.dst)
    # States are recovered from the ids in use; pin the count with an explicit
    # zero final weight when the highest state is otherwise unreferenced.
    if machine.num_states - 1 > max_ref:
        lines.append(
            f"f {machine.num_states - 1} {format_weight(machine.semiring.zero)}"
        )
    return "\n".join(lines) + "\n"
