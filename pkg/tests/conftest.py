"""Shared builders for the test suite."""

import pytest

from ntwfsm import NTapeMachine, TROPICAL_MIN, Var, build_aligner


def single_path_machine(label, weight_per_step=1, semiring=TROPICAL_MIN):
    """1-tape machine accepting exactly ``label``, one symbol per transition."""
    machine = NTapeMachine(1, semiring, num_states=len(label) + 1)
    machine.set_initial(0, semiring.one)
    machine.set_final(len(label), semiring.one)
    for i, sym in enumerate(label):
        machine.add_transition(i, i + 1, (sym,), weight_per_step)
    return machine


def identity_transducer(semiring=TROPICAL_MIN):
    """2-tape single-state machine copying tape 1 to tape 2."""
    machine = NTapeMachine(2, semiring, num_states=1)
    machine.set_initial(0)
    machine.set_final(0)
    machine.add_transition(0, 0, (Var(1), Var(1)), semiring.one)
    return machine


@pytest.fixture
def aligner():
    return build_aligner()
