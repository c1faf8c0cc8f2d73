"""Best-path search over n-tape machines.

The search runs over a trellis of nodes ``(state, pointer)`` where the
pointer is the vector of per-tape read positions into the input strings.
Nodes sharing a pointer form a node set; pending node sets sit on a min-heap
keyed by the pointer component sum, which guarantees that when a set is
extracted no pending set's pointer precedes it, so every prefix of a node is
complete before its suffixes are compiled.  Within one node set, transitions
that consume nothing on the input tapes are relaxed to a fixpoint with a
worklist; such moves are only legal when the machine's epsilon-move graph is
acyclic.

Relaxation updates a node's best-prefix record only on strict improvement,
so ties are resolved by first discovery: transitions in file order, node
sets in pointer-lexicographic order among equal keys, states in ascending id
order within a set.  Results are therefore byte-deterministic.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    DimensionMismatch,
    EpsilonCycle,
    NoAcceptingPath,
    UnboundOutputVar,
)
from .machine import Literal, NTapeMachine, _advances, normalize_input_tapes
from .semirings import NULL


def pointer_precedes(a, b):
    """True iff adding some nonzero non-negative vector to ``a`` gives ``b``."""
    if len(a) != len(b):
        raise DimensionMismatch(f"pointer sizes {len(a)} != {len(b)}")
    return a != b and all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Match:
    """Successful label match at one pointer position."""

    pointer: tuple
    bindings: dict = field(compare=False)
    resolved: tuple
    is_eps_move: bool


def match_transition(label, strings, pointer, input_tapes):
    """Match a transition label against the input tuple at ``pointer``.

    ``input_tapes`` are 1-based tape indices; the k-th string and pointer
    component belong to the k-th input tape in ascending order.  Returns a
    Match (advanced pointer, wildcard bindings, fully resolved per-tape label
    strings, epsilon-move flag) or None when the label does not match.
    Output tapes never constrain matching.
    """
    tapes0 = normalize_input_tapes(len(label), input_tapes)
    if len(strings) != len(tapes0) or len(pointer) != len(tapes0):
        raise DimensionMismatch(
            f"{len(tapes0)} input tapes, {len(strings)} strings, "
            f"{len(pointer)} pointer components"
        )
    return _match(label, strings, pointer, tapes0)


def _match(label, strings, pointer, tapes0):
    bindings = {}
    advanced = list(pointer)
    for k, tape in enumerate(tapes0):
        el = label[tape]
        s = strings[k]
        p = advanced[k]
        if type(el) is Literal:
            u = el.text
            if u:
                if s[p:p + len(u)] != u:
                    return None
                advanced[k] = p + len(u)
        else:
            if p >= len(s):
                return None
            sym = s[p]
            bound = bindings.get(el.cls)
            if bound is None:
                bindings[el.cls] = sym
            elif bound != sym:
                return None
            advanced[k] = p + 1
    resolved = []
    for el in label:
        if type(el) is Literal:
            resolved.append(el.text)
        else:
            sym = bindings.get(el.cls)
            if sym is None:
                raise UnboundOutputVar(
                    f"wildcard class {el.cls} has no binding from an input tape"
                )
            resolved.append(sym)
    new_pointer = tuple(advanced)
    return Match(new_pointer, bindings, tuple(resolved), new_pointer == pointer)


# --- priority queues over (key, pointer) entries ---------------------------


class BinaryHeap:
    """Min-heap via heapq; entries are totally ordered tuples."""

    __slots__ = ("_heap",)

    def __init__(self):
        self._heap = []

    def push(self, entry):
        heapq.heappush(self._heap, entry)

    def pop(self):
        return heapq.heappop(self._heap)

    def pending(self):
        return list(self._heap)

    def __len__(self):
        return len(self._heap)


class PairingHeap:
    """Pairing heap with the same interface and extraction order as
    BinaryHeap (entries are unique, totally ordered tuples)."""

    __slots__ = ("_root", "_size")

    def __init__(self):
        self._root = None  # node: [entry, first_child, next_sibling]
        self._size = 0

    @staticmethod
    def _meld(a, b):
        if a is None:
            return b
        if b is None:
            return a
        if b[0] < a[0]:
            a, b = b, a
        b[2] = a[1]
        a[1] = b
        return a

    def push(self, entry):
        self._root = self._meld(self._root, [entry, None, None])
        self._size += 1

    def pop(self):
        root = self._root
        if root is None:
            raise IndexError("pop from empty heap")
        merged = []
        child = root[1]
        while child is not None:
            first = child
            second = first[2]
            first[2] = None
            if second is None:
                merged.append(first)
                break
            child = second[2]
            second[2] = None
            merged.append(self._meld(first, second))
        new_root = None
        for h in reversed(merged):
            new_root = self._meld(new_root, h)
        self._root = new_root
        self._size -= 1
        return root[0]

    def pending(self):
        out = []
        stack = [self._root] if self._root is not None else []
        while stack:
            node = stack.pop()
            out.append(node[0])
            if node[1] is not None:
                stack.append(node[1])
            if node[2] is not None:
                stack.append(node[2])
        return out

    def __len__(self):
        return self._size


# --- trellis ----------------------------------------------------------------


class _Node:
    """Trellis node: best-prefix weight plus the back-pointer triple."""

    __slots__ = ("state", "weight", "back", "via", "via_labels")

    def __init__(self, state):
        self.state = state
        self.weight = NULL
        self.back = None        # predecessor _Node of the best prefix
        self.via = None         # its last Transition
        self.via_labels = None  # that transition's resolved per-tape labels


@dataclass(frozen=True)
class BestPath:
    """A best accepting path: its transitions, total weight per the path
    weight formula, and per-tape projected label strings (wildcards
    resolved)."""

    transitions: tuple
    weight: object
    labels: tuple


@dataclass(frozen=True)
class Transduction:
    """Output-tape projection of a best path."""

    outputs: tuple
    weight: object
    path: BestPath


def _eps_move_transitions(machine, tapes0):
    return [t for t in machine.transitions if not _advances(t.label, tapes0)]


def _require_eps_acyclic(eps_transitions, num_states):
    """Static cycle check on the epsilon-move graph (depth-first, iterative).

    Runs before the search so that structural epsilon cycles are reported
    even when non-negative weights would let the fixpoint loop terminate
    silently."""
    adjacency = [[] for _ in range(num_states)]
    for t in eps_transitions:
        if t.src == t.dst:
            raise EpsilonCycle(f"epsilon self-loop at state {t.src}")
        adjacency[t.src].append(t.dst)
    color = [0] * num_states  # 0 unseen, 1 on stack, 2 done
    for root in range(num_states):
        if color[root]:
            continue
        stack = [(root, iter(adjacency[root]))]
        color[root] = 1
        while stack:
            q, it = stack[-1]
            for nxt in it:
                if color[nxt] == 1:
                    raise EpsilonCycle(
                        f"epsilon-move cycle through states {q} and {nxt}"
                    )
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(adjacency[nxt])))
                    break
            else:
                color[q] = 2
                stack.pop()


def _relax(nodes, state, weight, back, via, via_labels, sr):
    """Record a candidate prefix; returns True when the node was created or
    strictly improved (the node set has not been extracted yet, or the move
    is an in-set epsilon)."""
    node = nodes.get(state)
    if node is None:
        node = _Node(state)
        nodes[state] = node
    elif not (node.weight is NULL or sr.better(weight, node.weight)):
        return False
    node.weight = weight
    node.back = back
    node.via = via
    node.via_labels = via_labels
    return True


def fsm_viterbi(
    machine: NTapeMachine,
    strings,
    input_tapes=None,
    *,
    heap_factory=BinaryHeap,
    on_extract=None,
):
    """Best path of ``machine`` accepting the string tuple on its input tapes.

    ``input_tapes`` are 1-based indices and default to tapes 1..len(strings).
    Returns a BestPath whose weight no accepting path strictly improves on;
    raises NoAcceptingPath when the tuple is not accepted and EpsilonCycle
    when the machine has a cycle of input-consuming-nothing transitions.

    ``on_extract(pointer, pending_pointers)`` is an instrumentation hook
    called at every node-set extraction; ``heap_factory`` swaps the pending
    priority queue implementation.
    """
    strings = tuple(strings)
    if input_tapes is None:
        input_tapes = range(1, len(strings) + 1)
    tapes0 = normalize_input_tapes(machine.arity, input_tapes)
    if len(strings) != len(tapes0):
        raise DimensionMismatch(
            f"{len(tapes0)} input tapes but {len(strings)} input strings"
        )
    sr = machine.semiring

    eps_transitions = _eps_move_transitions(machine, tapes0)
    if eps_transitions:
        _require_eps_acyclic(eps_transitions, machine.num_states)

    start = (0,) * len(tapes0)
    final = tuple(len(s) for s in strings)
    trellis = {}
    heap = heap_factory()

    init_nodes = {}
    for q, w in machine.initial_states():
        node = _Node(q)
        node.weight = w
        init_nodes[q] = node
    if init_nodes:
        trellis[start] = init_nodes
        heap.push((0, start))

    max_requeues = machine.num_states
    while len(heap):
        _key, pointer = heap.pop()
        if on_extract is not None:
            on_extract(pointer, [entry[1] for entry in heap.pending()])
        nodes = trellis[pointer]
        worklist = deque(sorted(nodes))
        queued = set(worklist)
        requeues = {}
        while worklist:
            q = worklist.popleft()
            queued.discard(q)
            node = nodes[q]
            weight = node.weight
            for t in machine.transitions_from(q):
                m = _match(t.label, strings, pointer, tapes0)
                if m is None:
                    continue
                candidate = sr.times(weight, t.weight)
                if m.is_eps_move:
                    if _relax(nodes, t.dst, candidate, node, t, m.resolved, sr):
                        # Re-include changed nodes in the current iteration;
                        # the requeue cap is a backstop for improvement loops.
                        if t.dst not in queued:
                            count = requeues.get(t.dst, 0) + 1
                            if count > max_requeues:
                                raise EpsilonCycle(
                                    f"state {t.dst} re-relaxed more than "
                                    f"{max_requeues} times in one node set"
                                )
                            requeues[t.dst] = count
                            worklist.append(t.dst)
                            queued.add(t.dst)
                else:
                    target = trellis.get(m.pointer)
                    if target is None:
                        target = {}
                        trellis[m.pointer] = target
                        heap.push((sum(m.pointer), m.pointer))
                    _relax(target, t.dst, candidate, node, t, m.resolved, sr)

    final_nodes = trellis.get(final)
    if not final_nodes:
        raise NoAcceptingPath(f"no path reaches pointer {final}")
    best_node = None
    best_total = None
    for q in sorted(final_nodes):
        rho = machine.final_weight(q)
        if rho == sr.zero:
            continue
        total = sr.times(final_nodes[q].weight, rho)
        if total == sr.zero:
            continue
        if best_node is None or sr.better(total, best_total):
            best_node = final_nodes[q]
            best_total = total
    if best_node is None:
        raise NoAcceptingPath("no successful path accepts the input tuple")

    reversed_transitions = []
    reversed_labels = []
    node = best_node
    while node.via is not None:
        reversed_transitions.append(node.via)
        reversed_labels.append(node.via_labels)
        node = node.back
    reversed_labels.reverse()
    labels = tuple(
        "".join(step[i] for step in reversed_labels) for i in range(machine.arity)
    )
    return BestPath(tuple(reversed(reversed_transitions)), best_total, labels)


def fsa_viterbi(machine: NTapeMachine, s, **kwargs):
    """1-tape convenience wrapper around fsm_viterbi."""
    if machine.arity != 1:
        raise DimensionMismatch(f"machine has {machine.arity} tapes, expected 1")
    return fsm_viterbi(machine, (s,), (1,), **kwargs)


def best_transduction(machine: NTapeMachine, strings, input_tapes, **kwargs):
    """Best output tuple for an input tuple: runs the best-path search over
    the input tapes and projects the remaining tapes, in tape order."""
    tapes0 = normalize_input_tapes(machine.arity, input_tapes)
    best = fsm_viterbi(machine, strings, input_tapes, **kwargs)
    inputs = set(tapes0)
    outputs = tuple(
        best.labels[i] for i in range(machine.arity) if i not in inputs
    )
    return Transduction(outputs, best.weight, best)
