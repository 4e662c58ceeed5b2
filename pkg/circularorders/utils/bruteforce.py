"""Exhaustive search for circular orders on small finite groups.

An arrangement lists every element once, identity first, and is read as a
cyclic order. Reflections are not identified: an arrangement and its reverse
are different orders.
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .orders import arrangement_order

logger = logging.getLogger(__name__)


class BoundExceededError(ValueError):
    """The group is too large to enumerate arrangements."""


def bruteforce_bound():
    return getattr(settings, "CORDA_BRUTEFORCE_BOUND", 8)


@dataclass(frozen=True)
class BruteForceResult:
    orderable: bool
    witness: tuple | None
    examined: int


def is_left_invariant(arrangement, table):
    """True iff every left translation rotates the cyclic arrangement."""
    n = table.n
    arr = np.asarray(arrangement, dtype=np.int64)
    if n == 1:
        return True
    position = np.empty(n, dtype=np.int64)
    position[arr] = np.arange(n)
    # P[g, i] is the position of g·arr[i]
    P = position[table.mul[:, arr]]
    return bool(((P - P[:, [0]]) % n == np.arange(n)).all())


def _arrangements(table, bound):
    # lexicographic, one at a time; witnesses and counts depend on the order
    bound = bound or bruteforce_bound()
    if table.n > bound:
        raise BoundExceededError(
            f"{table.name} has order {table.n} > {bound}; "
            "decide it with the cyclicity criterion instead"
        )
    for rest in itertools.permutations(range(1, table.n)):
        yield (0, *rest)


def is_circularly_orderable_bruteforce(table, bound=None):
    examined = 0
    for arrangement in _arrangements(table, bound):
        examined += 1
        if is_left_invariant(arrangement, table):
            logger.debug("%s: witness %s after %d", table.name, arrangement, examined)
            return BruteForceResult(True, arrangement, examined)
    logger.debug("%s: no left-invariant arrangement among %d", table.name, examined)
    return BruteForceResult(False, None, examined)


def enumerate_circular_orders(table, bound=None):
    return [a for a in _arrangements(table, bound) if is_left_invariant(a, table)]


def witness_order(table, arrangement):
    if not is_left_invariant(arrangement, table):
        raise ValueError(f"{arrangement} is not left-invariant on {table.name}")
    return arrangement_order(table, arrangement)
