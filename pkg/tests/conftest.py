"""Shared fixtures: the four worked environments and their allocations.

The expected state vectors asserted in the test modules were derived by
hand from the support/threat definitions and are frozen here as constants;
grid helpers below provide the independent brute-force routes used to
cross-check the closed-form machinery.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from pag import Environment, Matrix, make_environment, matrix_from_entries
from pag.model import ZERO, replace_row
from pag.preference import Verdict, improvement_verdict


@pytest.fixture
def env1() -> Environment:
    # Six countries, two-sided conflict with two friendship edges.
    return make_environment(
        [19, 3, 6, 15, 3, 9],
        friends=[(1, 2), (3, 4)],
        adversaries=[(0, 3), (1, 4), (2, 5)],
    )


@pytest.fixture
def fig1b(env1: Environment) -> Matrix:
    return matrix_from_entries(
        env1,
        {(0, 3): 19, (3, 0): 15, (1, 4): 3, (4, 1): 3, (2, 5): 6, (5, 2): 9},
    )


@pytest.fixture
def env2() -> Environment:
    return make_environment([8, 6, 4], adversaries=[(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def alloc1(env2: Environment) -> Matrix:
    return matrix_from_entries(
        env2, {(0, 0): 2, (0, 1): 4, (0, 2): 2, (1, 0): 2, (1, 2): 4, (2, 1): 4}
    )


@pytest.fixture
def alloc2(env2: Environment) -> Matrix:
    return matrix_from_entries(
        env2, {(0, 1): 4, (0, 2): 4, (1, 0): 5, (1, 2): 1, (2, 0): 4}
    )


@pytest.fixture
def alloc3(env2: Environment) -> Matrix:
    return matrix_from_entries(
        env2, {(0, 1): 6, (0, 2): 2, (1, 0): 6, (2, 0): 3, (2, 1): 1}
    )


@pytest.fixture
def env3() -> Environment:
    return make_environment(
        [4, 5, 6, 5], adversaries=[(0, 2), (0, 3), (1, 2), (1, 3)]
    )


@pytest.fixture
def env4() -> Environment:
    return make_environment(
        [1, 2, 1, 20], friends=[(1, 2)], adversaries=[(0, 1), (2, 3)]
    )


@pytest.fixture
def fig4(env4: Environment) -> Matrix:
    return matrix_from_entries(
        env4, {(0, 0): 1, (1, 0): 2, (2, 2): 1, (3, 2): 5, (3, 3): 15}
    )


def compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first, *rest)


def grid_rows(env: Environment, i: int, step: Fraction):
    """Every admissible row for country i with entries on the step grid."""
    support = env.row_support(i)
    units = env.powers[i] / step
    assert units.denominator == 1
    for combo in compositions(int(units), len(support)):
        row = [ZERO] * env.n
        for j, count in zip(support, combo):
            row[j] = count * step
        yield tuple(row)


def grid_profitable_deviation(env: Environment, u: Matrix, i: int, step: Fraction):
    """Brute-force route: scan i's grid deviations with the category rule.

    Independent of the closed-form best-deviation solver; used to check that
    the solver never misses a profitable deviation the grid can see.
    """
    for row in grid_rows(env, i, step):
        if row == u[i]:
            continue
        v = replace_row(u, i, row)
        if improvement_verdict(env, i, u, v) is Verdict.STRICT_IMPROVEMENT:
            return row
    return None


def random_environment(
    rng: random.Random,
    n: int,
    max_power: int,
    friend_p: float = 0.3,
    adversary_p: float = 0.45,
    min_power: int = 1,
) -> Environment:
    friends, adversaries = [], []
    for pair in itertools.combinations(range(n), 2):
        roll = rng.random()
        if roll < friend_p:
            friends.append(pair)
        elif roll < friend_p + adversary_p:
            adversaries.append(pair)
    powers = [rng.randint(min_power, max_power) for _ in range(n)]
    return make_environment(powers, friends=friends, adversaries=adversaries)


def random_allocation(rng: random.Random, env: Environment, denominator: int = 1) -> Matrix:
    """A uniformly random admissible matrix with entries on a 1/denominator grid."""
    step = Fraction(1, denominator)
    rows = []
    for i in range(env.n):
        support = env.row_support(i)
        units = int(env.powers[i] / step)
        cuts = sorted(rng.randint(0, units) for _ in range(len(support) - 1))
        counts = [b - a for a, b in zip([0, *cuts], [*cuts, units])]
        row = [ZERO] * env.n
        for j, count in zip(support, counts):
            row[j] = count * step
        rows.append(tuple(row))
    return tuple(rows)


def random_bipartite_environment(
    rng: random.Random, max_n: int = 5, max_power: int = 8
) -> Environment:
    n = rng.randint(2, max_n)
    order = list(range(n))
    rng.shuffle(order)
    cut = rng.randint(1, n - 1)
    left, right = set(order[:cut]), set(order[cut:])
    edges = [(min(a, b), max(a, b)) for a in left for b in right]
    rng.shuffle(edges)
    keep = edges[: rng.randint(1, len(edges))]
    powers = [rng.randint(1, max_power) for _ in range(n)]
    return make_environment(powers, adversaries=keep)
