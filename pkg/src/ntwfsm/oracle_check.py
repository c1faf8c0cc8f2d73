"""Randomized cross-validation of the search against intersection + Dijkstra.

Each case draws a small machine (mixed epsilon / literal / wildcard labels,
tropical-min integer weights) and an input tuple, runs the best-path search,
and compares the weight with the classical route: intersect the machine with
the input tuple, then take the min source-sink distance.  Agreement includes
the no-path case.  The case stream is fully determined by the seed, so a
failing case index is a reproducer on its own.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from .errors import NoAcceptingPath
from .machine import EPSILON, Literal, NTapeMachine, Var, write_machine
from .oracles import dijkstra, intersect_with_tuple
from .search import fsm_viterbi
from .semirings import TROPICAL_MIN


@dataclass(frozen=True)
class CaseConfig:
    cases: int = 300
    seed: int = 42
    max_arity: int = 3
    max_states: int = 6
    max_transitions: int = 20
    max_len: int = 6
    alphabet: str = "ab"
    max_weight: int = 9
    eps_mode: bool = False  # sprinkle forward-only all-epsilon transitions


def _random_element(rng, cfg):
    roll = rng.random()
    if roll < 0.20:
        return EPSILON
    if roll < 0.65:
        return Literal(rng.choice(cfg.alphabet))
    if roll < 0.80:
        return Literal(
            rng.choice(cfg.alphabet) + rng.choice(cfg.alphabet)
        )
    return Var(rng.randint(1, 2))


def random_machine(rng: random.Random, cfg: CaseConfig) -> NTapeMachine:
    """Small machine with every tape designated as input downstream."""
    arity = rng.randint(1, cfg.max_arity)
    num_states = rng.randint(1, cfg.max_states)
    machine = NTapeMachine(
        arity, TROPICAL_MIN, num_states=num_states, eps_mode=cfg.eps_mode
    )
    for q in rng.sample(range(num_states), rng.randint(1, num_states)):
        machine.set_initial(q, rng.randint(0, 3))
    for q in rng.sample(range(num_states), rng.randint(1, num_states)):
        machine.set_final(q, rng.randint(0, 3))
    for _ in range(rng.randint(1, cfg.max_transitions)):
        src = rng.randrange(num_states)
        dst = rng.randrange(num_states)
        label = [_random_element(rng, cfg) for _ in range(arity)]
        if all(el == EPSILON for el in label):
            if cfg.eps_mode and src < dst:
                pass  # keep: forward-only epsilon moves stay acyclic
            else:
                label[rng.randrange(arity)] = Literal(rng.choice(cfg.alphabet))
        machine.add_transition(src, dst, label, rng.randint(0, cfg.max_weight))
    return machine


def random_input(rng: random.Random, machine: NTapeMachine, cfg: CaseConfig):
    """Input tuple: half the time uniform strings, half the time the
    projection of a random walk, so both rejects and accepts are exercised."""
    if rng.random() < 0.5:
        return tuple(
            "".join(rng.choice(cfg.alphabet) for _ in range(rng.randint(0, cfg.max_len)))
            for _ in range(machine.arity)
        )
    initials = [q for q, _ in machine.initial_states()]
    state = rng.choice(initials)
    parts = [[] for _ in range(machine.arity)]
    for _ in range(rng.randint(0, cfg.max_len)):
        options = machine.transitions_from(state)
        if not options:
            break
        t = rng.choice(options)
        bindings = {}
        for i, el in enumerate(t.label):
            if isinstance(el, Literal):
                parts[i].append(el.text)
            else:
                sym = bindings.setdefault(el.cls, rng.choice(cfg.alphabet))
                parts[i].append(sym)
        state = t.dst
    return tuple("".join(p) for p in parts)


@dataclass
class CaseFailure:
    index: int
    machine_text: str
    strings: tuple
    search_weight: object
    oracle_weight: object


@dataclass
class CheckReport:
    config: CaseConfig
    cases_run: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self):
        return not self.failures


def case_stream(cfg: CaseConfig):
    """Deterministic (index, machine, strings) stream for the seed."""
    rng = random.Random(cfg.seed)
    for index in range(cfg.cases):
        machine = random_machine(rng, cfg)
        strings = random_input(rng, machine, cfg)
        yield index, machine, strings


def run_case(machine, strings, search_fn=fsm_viterbi):
    """(search weight | None, oracle weight | None) for one case; all tapes
    are input tapes."""
    tapes = tuple(range(1, machine.arity + 1))
    try:
        search_weight = search_fn(machine, strings, tapes).weight
    except NoAcceptingPath:
        search_weight = None
    distance, _ = dijkstra(intersect_with_tuple(machine, strings, tapes))
    oracle_weight = None if distance == math.inf else distance
    return search_weight, oracle_weight


def run_check(cfg: CaseConfig, search_fn=fsm_viterbi, stop_on_failure=True):
    """Run the whole case stream; report disagreements with reproducers."""
    report = CheckReport(cfg)
    started = time.perf_counter()
    for index, machine, strings in case_stream(cfg):
        search_weight, oracle_weight = run_case(machine, strings, search_fn)
        report.cases_run += 1
        if search_weight != oracle_weight:
            report.failures.append(
                CaseFailure(
                    index, write_machine(machine), strings, search_weight, oracle_weight
                )
            )
            if stop_on_failure:
                break
    report.elapsed = time.perf_counter() - started
    return report
