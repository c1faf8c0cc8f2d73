"""Independent references the best-path search is validated against.

Four routes that never share code with the search proper:

* intersection of a machine with its input tuple, producing a plain weighted
  digraph whose source-sink paths are in weight-preserving bijection with the
  machine's accepting paths, followed by classical shortest-distance
  (Dijkstra, cross-checked by Bellman-Ford);
* the quadratic edit-distance matrix with backtracking;
* classical HMM decoding over a time-by-state trellis, paired with a
  converter from HMMs to 1-tape machines;
* brute-force enumeration of all accepting paths, for exhaustively small
  instances.

The intersection is built only for the decidable restricted case: an acyclic
input tuple against a machine free of all-epsilon cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    EpsilonCycle,
    InvalidDistribution,
    NegativeCycle,
    NegativeWeight,
    UnknownSymbol,
)
from .machine import Literal, NTapeMachine, Var, normalize_input_tapes
from .semirings import PROB_MAX


# --- matching, reimplemented so the oracle does not lean on the search ------


def _oracle_advance(label, strings, pointer, tapes0):
    """Advanced pointer for a label match at ``pointer``, or None.

    Wildcards sharing a class id must see the same symbol across tapes;
    output tapes are unconstrained.
    """
    bindings = {}
    advanced = list(pointer)
    for k, tape in enumerate(tapes0):
        el = label[tape]
        if isinstance(el, Literal):
            end = advanced[k] + len(el.text)
            if strings[k][advanced[k]:end] != el.text:
                return None
            advanced[k] = end
        else:
            p = advanced[k]
            if p >= len(strings[k]):
                return None
            sym = strings[k][p]
            if bindings.setdefault(el.cls, sym) != sym:
                return None
            advanced[k] = p + 1
    return tuple(advanced)


def _check_eps_acyclic(machine, tapes0):
    """Reject all-epsilon cycles before building the intersection."""
    eps_arcs = [[] for _ in range(machine.num_states)]
    any_eps = False
    for t in machine.transitions:
        if any(
            isinstance(el, Var) or el.text for el in (t.label[i] for i in tapes0)
        ):
            continue
        if t.src == t.dst:
            raise EpsilonCycle(f"epsilon self-loop at state {t.src}")
        eps_arcs[t.src].append(t.dst)
        any_eps = True
    if not any_eps:
        return
    color = [0] * machine.num_states
    for root in range(machine.num_states):
        if color[root]:
            continue
        stack = [(root, iter(eps_arcs[root]))]
        color[root] = 1
        while stack:
            q, it = stack[-1]
            for nxt in it:
                if color[nxt] == 1:
                    raise EpsilonCycle(f"epsilon-move cycle through state {nxt}")
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(eps_arcs[nxt])))
                    break
            else:
                color[q] = 2
                stack.pop()


@dataclass
class IntersectionMachine:
    """Weighted digraph from intersecting a machine with one input tuple.

    Vertex 0 is the virtual source (fanning out with initial weights),
    vertex 1 the virtual sink (collecting final weights); the rest are
    reachable (state, pointer) pairs.
    """

    num_vertices: int
    arcs: list
    source: int = 0
    sink: int = 1

    @property
    def interior_vertices(self):
        return self.num_vertices - 2

    def interior_arcs(self):
        return [a for a in self.arcs if a[0] != self.source and a[1] != self.sink]


def intersect_with_tuple(machine: NTapeMachine, strings, input_tapes):
    """Build the intersection graph for ``strings`` on ``input_tapes``.

    All incoming arcs of every reachable (state, pointer) vertex are
    materialized (not only best prefixes), with a stack worklist since the
    order partitions are treated in is irrelevant here.  Raises EpsilonCycle
    for machines with all-epsilon cycles.
    """
    strings = tuple(strings)
    tapes0 = normalize_input_tapes(machine.arity, input_tapes)
    _check_eps_acyclic(machine, tapes0)

    final = tuple(len(s) for s in strings)
    ids = {}
    arcs = []
    stack = []

    def vertex(state, pointer):
        key = (state, pointer)
        vid = ids.get(key)
        if vid is None:
            vid = ids[key] = len(ids) + 2
            stack.append(key)
        return vid

    start = (0,) * len(tapes0)
    for q, w in machine.initial_states():
        arcs.append((0, vertex(q, start), w))
    while stack:
        state, pointer = stack.pop()
        vid = ids[(state, pointer)]
        if pointer == final:
            rho = machine.final_weight(state)
            if rho != machine.semiring.zero:
                arcs.append((vid, 1, rho))
        for t in machine.transitions_from(state):
            advanced = _oracle_advance(t.label, strings, pointer, tapes0)
            if advanced is None:
                continue
            arcs.append((vid, vertex(t.dst, advanced), t.weight))
    return IntersectionMachine(len(ids) + 2, arcs)


def dijkstra(graph: IntersectionMachine):
    """Exact min source-sink distance plus one shortest vertex path.

    Requires non-negative arc weights (NegativeWeight otherwise); returns
    (inf, None) when the sink is unreachable.
    """
    import heapq

    adjacency = [[] for _ in range(graph.num_vertices)]
    for u, v, w in graph.arcs:
        if w < 0:
            raise NegativeWeight(f"arc {u}->{v} has negative weight {w}")
        adjacency[u].append((v, w))
    dist = {graph.source: 0}
    parent = {}
    done = set()
    heap = [(0, graph.source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == graph.sink:
            break
        for v, w in adjacency[u]:
            candidate = d + w
            if candidate < dist.get(v, math.inf):
                dist[v] = candidate
                parent[v] = u
                heapq.heappush(heap, (candidate, v))
    if graph.sink not in done:
        return math.inf, None
    path = [graph.sink]
    while path[-1] != graph.source:
        path.append(parent[path[-1]])
    path.reverse()
    return dist[graph.sink], path


def bellman_ford(graph: IntersectionMachine):
    """Min source-sink distance by iterated full relaxation; raises
    NegativeCycle when a relaxation round still improves after V-1 rounds."""
    dist = [math.inf] * graph.num_vertices
    dist[graph.source] = 0
    changed = True
    for _ in range(max(graph.num_vertices - 1, 1)):
        changed = False
        for u, v, w in graph.arcs:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    if changed:
        for u, v, w in graph.arcs:
            if dist[u] + w < dist[v]:
                raise NegativeCycle(f"arc {u}->{v} still relaxes")
    return dist[graph.sink]


# --- edit distance matrix ----------------------------------------------------


@dataclass
class EditMatrixResult:
    """Filled cost matrix, the distance, and one optimal operation sequence
    (K keep, S substitute, I insert, D delete)."""

    matrix: list
    distance: object
    ops: str


def edit_distance_matrix(a, b, insert_cost=1, delete_cost=1, substitute_cost=math.inf):
    """Minimum cost converting ``a`` into ``b``.

    The matrix is filled top-down and left-to-right from cost 0 at the
    origin: a horizontal move inserts (cost ``insert_cost``), a vertical move
    deletes (``delete_cost``), a diagonal move substitutes
    (``substitute_cost`` on unequal symbols, 0 on equal ones).  Backtracking
    ties prefer diagonal, then deletion, then insertion, which fixes the
    reported alignment; the distance itself is tie-independent.
    """
    n, m = len(a), len(b)
    x = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(1, m + 1):
        x[0][j] = x[0][j - 1] + insert_cost
    for i in range(1, n + 1):
        x[i][0] = x[i - 1][0] + delete_cost
        row, above = x[i], x[i - 1]
        for j in range(1, m + 1):
            diag_cost = 0 if a[i - 1] == b[j - 1] else substitute_cost
            row[j] = min(
                row[j - 1] + insert_cost,
                above[j] + delete_cost,
                above[j - 1] + diag_cost,
            )
    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            diag_cost = 0 if a[i - 1] == b[j - 1] else substitute_cost
            if x[i][j] == x[i - 1][j - 1] + diag_cost:
                ops.append("K" if a[i - 1] == b[j - 1] else "S")
                i -= 1
                j -= 1
                continue
        if i > 0 and x[i][j] == x[i - 1][j] + delete_cost:
            ops.append("D")
            i -= 1
            continue
        ops.append("I")
        j -= 1
    ops.reverse()
    return EditMatrixResult(x, x[n][m], "".join(ops))


# --- hidden Markov models -----------------------------------------------------


def _check_distribution(row, what):
    if any(p < 0 or p > 1 for p in row):
        raise InvalidDistribution(f"{what} has entries outside [0, 1]")
    if abs(sum(row) - 1.0) > 1e-9:
        raise InvalidDistribution(f"{what} sums to {sum(row)!r}, not 1")


@dataclass(frozen=True)
class HmmModel:
    """Discrete HMM: output alphabet, initial vector, transition matrix
    A[i][j], emission matrix B[j][k].  Symbols must be single characters so
    the converted 1-tape machine reads observation sequences as strings."""

    symbols: tuple
    start: tuple
    trans: tuple
    emit: tuple

    def __post_init__(self):
        n = len(self.start)
        if len(self.trans) != n or len(self.emit) != n:
            raise InvalidDistribution("matrix row counts disagree with state count")
        if any(len(s) != 1 for s in self.symbols):
            raise InvalidDistribution("symbols must be single characters")
        _check_distribution(self.start, "initial vector")
        for i, row in enumerate(self.trans):
            _check_distribution(row, f"transition row {i}")
        for j, row in enumerate(self.emit):
            if len(row) != len(self.symbols):
                raise InvalidDistribution(f"emission row {j} width mismatch")
            _check_distribution(row, f"emission row {j}")

    @property
    def num_states(self):
        return len(self.start)


def classical_viterbi(model: HmmModel, observations):
    """Most likely hidden state sequence for ``observations`` and its joint
    probability, by the standard dynamic program over a T-by-states trellis.
    Argmax ties resolve to the lowest state id."""
    index = {s: k for k, s in enumerate(model.symbols)}
    try:
        obs = [index[o] for o in observations]
    except KeyError as exc:
        raise UnknownSymbol(f"symbol {exc.args[0]!r} not in the model alphabet") from None
    if not obs:
        return (), 1.0
    n = model.num_states
    delta = [model.start[j] * model.emit[j][obs[0]] for j in range(n)]
    back = []
    for k in obs[1:]:
        step = [0.0] * n
        choice = [0] * n
        for j in range(n):
            emit = model.emit[j][k]
            best = -1.0
            best_i = 0
            for i in range(n):
                # Same float expression tree as the converted machine's arcs
                # (per-arc product first), so ties and ulps line up exactly.
                candidate = delta[i] * (model.trans[i][j] * emit)
                if candidate > best:
                    best = candidate
                    best_i = i
            step[j] = best
            choice[j] = best_i
        back.append(choice)
        delta = step
    best_j = 0
    for j in range(1, n):
        if delta[j] > delta[best_j]:
            best_j = j
    states = [best_j]
    for choice in reversed(back):
        states.append(choice[states[-1]])
    states.reverse()
    return tuple(states), delta[best_j]


def hmm_to_wfsm(model: HmmModel) -> NTapeMachine:
    """Encode an HMM as a 1-tape machine over the max-times probability
    semiring: HMM state i keeps id i, a fresh start state carries initial
    weight one, arcs start->j and i->j emit a symbol with weight
    (initial or transition probability) times the emission probability.
    Zero-probability arcs are dropped."""
    n = model.num_states
    machine = NTapeMachine(1, PROB_MAX, num_states=n + 1)
    start = n
    machine.set_initial(start, 1.0)
    for q in range(n + 1):
        machine.set_final(q, 1.0)
    for j in range(n):
        for k, sym in enumerate(model.symbols):
            w = model.start[j] * model.emit[j][k]
            if w != 0.0:
                machine.add_transition(start, j, (sym,), w)
    for i in range(n):
        for j in range(n):
            for k, sym in enumerate(model.symbols):
                w = model.trans[i][j] * model.emit[j][k]
                if w != 0.0:
                    machine.add_transition(i, j, (sym,), w)
    return machine


# --- brute force path enumeration ---------------------------------------------


def enumerate_paths(machine: NTapeMachine, strings, input_tapes):
    """Yield every accepting path as (transitions, weight, resolved labels).

    Depth-first over (state, pointer); exponential, intended for exhaustive
    checks on tiny instances only.  Raises EpsilonCycle instead of looping.
    """
    strings = tuple(strings)
    tapes0 = normalize_input_tapes(machine.arity, input_tapes)
    _check_eps_acyclic(machine, tapes0)
    sr = machine.semiring
    final = tuple(len(s) for s in strings)
    start = (0,) * len(tapes0)

    def resolve(label, pointer):
        # Bindings recomputed tape-by-tape; advance already validated.
        bindings = {}
        for k, tape in enumerate(tapes0):
            el = label[tape]
            if isinstance(el, Var):
                bindings[el.cls] = strings[k][pointer[k]]
        return tuple(
            el.text if isinstance(el, Literal) else bindings[el.cls] for el in label
        )

    def walk(state, pointer, acc, path, labels):
        if pointer == final:
            rho = machine.final_weight(state)
            if rho != sr.zero:
                total = sr.times(acc, rho)
                if total != sr.zero:
                    yield tuple(path), total, tuple(
                        "".join(step[i] for step in labels)
                        for i in range(machine.arity)
                    )
        for t in machine.transitions_from(state):
            advanced = _oracle_advance(t.label, strings, pointer, tapes0)
            if advanced is None:
                continue
            path.append(t)
            labels.append(resolve(t.label, pointer))
            yield from walk(t.dst, advanced, sr.times(acc, t.weight), path, labels)
            path.pop()
            labels.pop()

    for q, w in machine.initial_states():
        yield from walk(q, start, w, [], [])
