"""Weight algebras the machines and searches are parameterized over.

A semiring bundles the carrier operations (``plus``, ``times``, identities)
with a strict "improves upon" comparison and a search direction.  The
best-path search itself only ever uses ``times`` and ``better``; ``plus`` is
kept for relation-level weight algebra and for testing the laws.

Instances are immutable values and safe to share across concurrent searches.
"""

from __future__ import annotations

import math
import operator

from .errors import UnknownSemiring


class _Null:
    """Sentinel for an unset best-prefix weight.

    Deliberately distinct from the semiring zero: under max-direction
    semirings zero is the *worst* defined weight, while Null means "no prefix
    analyzed yet" and is improved upon by every defined weight.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Null"


NULL = _Null()


class Semiring:
    """A weight algebra with identities and a strict comparison order.

    ``direction`` is "min" or "max"; maximal-weight search reuses the same
    search code path with a flipped ``better``.
    """

    __slots__ = ("name", "zero", "one", "direction", "_plus", "_times", "_better")

    def __init__(self, name, plus, times, zero, one, better, direction):
        self.name = name
        self.zero = zero
        self.one = one
        self.direction = direction
        self._plus = plus
        self._times = times
        self._better = better

    def plus(self, a, b):
        return self._plus(a, b)

    def times(self, a, b):
        return self._times(a, b)

    def better(self, a, b):
        """True iff ``a`` strictly improves on ``b`` in the search direction.

        Every defined weight improves on NULL; NULL improves on nothing.
        """
        if a is NULL:
            return False
        if b is NULL:
            return True
        return self._better(a, b)

    def __repr__(self):
        return f"Semiring({self.name!r})"


# Integer carriers for the tropical instances (math.inf stands in for the
# missing bound), float carrier for probabilities.  Comparisons are exact;
# tolerances belong in tests, never in the search.
TROPICAL_MIN = Semiring(
    "tropical-min", min, operator.add, math.inf, 0, operator.lt, "min"
)
TROPICAL_MAX = Semiring(
    "tropical-max", max, operator.add, -math.inf, 0, operator.gt, "max"
)
PROB_MAX = Semiring(
    "prob-max", max, operator.mul, 0.0, 1.0, operator.gt, "max"
)

_REGISTRY = {sr.name: sr for sr in (TROPICAL_MIN, TROPICAL_MAX, PROB_MAX)}


def semiring_by_name(name):
    """Look up a registered semiring instance by its name string."""
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownSemiring(
            f"unknown semiring {name!r}; expected one of {sorted(_REGISTRY)}"
        ) from None
