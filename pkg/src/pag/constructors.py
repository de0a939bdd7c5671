"""Constructors for the equilibria whose existence the theory guarantees.

Three families are built here: balancing equilibria on complete rivalries
(everyone precarious), sole-survivor equilibria on complete rivalries
(exactly one country safe), and safe-country equilibria on bipartite
rivalries via pair-ordered mutual annihilation.  Every constructor verifies
its own output with the exact Nash checker before returning it; a
construction that does not verify is surfaced as an error, never returned.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .analysis import (
    TopologyError,
    bipartite_safe_sufficient,
    is_complete_adversary_graph,
)
from .equilibrium import is_nash
from .model import (
    ZERO,
    Environment,
    Matrix,
    Pair,
    Rational,
    State,
    replace_row,
    state_vector,
    to_fraction,
    validate_allocation,
)


class InfeasiblePower(ValueError):
    """Some country's power exceeds the total power of the others."""


class PreconditionViolated(ValueError):
    """The environment does not satisfy the constructor's precondition."""


class ConditionNotMet(ValueError):
    """The sufficient condition for the construction does not hold."""


class ConstructionFailed(RuntimeError):
    """No attempted construction verified as a Nash equilibrium."""


def symmetric_row_sum_matrix(powers: Sequence[Rational]) -> Matrix:
    """Symmetric nonnegative matrix with zero diagonal and given row sums.

    Exists iff every entry is at most the sum of the others.  The builder
    pairs the second and third largest residuals with an amount capped by
    half the feasibility slack, which preserves the existence condition at
    every step; once the slack is exhausted the largest residual is matched
    exactly by a star over the rest.
    """
    z = [to_fraction(p) for p in powers]
    n = len(z)
    if n < 2:
        raise ValueError("need at least 2 entries")
    if any(p < 0 for p in z):
        raise ValueError("powers must be nonnegative")
    total = sum(z, ZERO)
    for i, p in enumerate(z):
        if p > total - p:
            raise InfeasiblePower(
                f"entry {i} has power {p}, exceeding the others' total {total - p}"
            )

    w = [[ZERO] * n for _ in range(n)]
    while True:
        order = sorted(range(n), key=lambda k: (-z[k], k))
        a = order[0]
        if z[a] == 0:
            break
        remaining = sum(z, ZERO)
        slack = remaining - 2 * z[a]
        if slack == 0:
            for j in order[1:]:
                if z[j] > 0:
                    w[a][j] += z[j]
                    w[j][a] += z[j]
                    z[j] = ZERO
            z[a] = ZERO
            break
        b, c = order[1], order[2]
        amount = min(z[c], slack / 2)
        assert amount > 0
        w[b][c] += amount
        w[c][b] += amount
        z[b] -= amount
        z[c] -= amount
    return tuple(tuple(row) for row in w)


def _verify(env: Environment, u: Matrix, label: str) -> Matrix:
    problems = validate_allocation(env, u)
    if problems:
        raise ConstructionFailed(f"{label}: invalid allocation: {problems}")
    result = is_nash(env, u, stop_at_first=True)
    if not result.ok:
        dev = result.deviations[0]
        raise ConstructionFailed(
            f"{label}: country {env.names[dev.country]} still has a profitable deviation"
        )
    return u


def balancing_equilibrium(env: Environment) -> Matrix:
    """All power on adversary edges, symmetric per edge, everyone precarious.

    Requires a complete all-adversary graph; exists iff no country's power
    exceeds its adversaries' total.
    """
    if not is_complete_adversary_graph(env):
        raise TopologyError("balancing requires an all-adversary complete graph")
    if env.n < 2:
        raise TopologyError("balancing needs at least 2 countries")
    u = symmetric_row_sum_matrix(env.powers)
    states = state_vector(env, u)
    if any(s is not State.PRECARIOUS for s in states):
        raise ConstructionFailed("balancing output is not all-precarious")
    return _verify(env, u, "balancing")


def sole_survivor_equilibrium(env: Environment, survivor: int) -> Matrix:
    """Equilibrium on a complete rivalry where only `survivor` is safe.

    Requires every country's power to be strictly below its adversaries'
    total, and a strictly positive power for the survivor (a zero-power
    country can at best be precarious).
    """
    if not is_complete_adversary_graph(env):
        raise TopologyError("sole survivor requires an all-adversary complete graph")
    total = sum(env.powers, ZERO)
    for i, p in enumerate(env.powers):
        if p >= total - p:
            raise PreconditionViolated(
                f"{env.names[i]} has power {p}, not strictly below the others' {total - p}"
            )
    if env.powers[survivor] <= 0:
        raise PreconditionViolated(
            f"{env.names[survivor]} needs positive power to be safe"
        )

    others = [j for j in range(env.n) if j != survivor]
    rows = [[ZERO] * env.n for _ in range(env.n)]
    sub_total = sum((env.powers[j] for j in others), ZERO)
    dominant = [j for j in others if env.powers[j] > sub_total - env.powers[j]]

    if dominant:
        # One country overpowers the rest of the subgraph: it overfeeds
        # them, they all fire back at it, and the survivor tops up just
        # past the dominator's surplus.
        j = dominant[0]
        rest = [k for k in others if k != j]
        rest_total = sum((env.powers[k] for k in rest), ZERO)
        surplus = env.powers[j] - rest_total
        share = surplus / len(rest)
        for k in rest:
            rows[j][k] = env.powers[k] + share
            rows[k][j] = env.powers[k]
        strike = (surplus + env.powers[survivor]) / 2
        rows[survivor][j] = strike
        rows[survivor][survivor] = env.powers[survivor] - strike
    else:
        # Balanced subgraph: annihilate it evenly etc., then the survivor
        # spreads its power uniformly to tip everyone under.
        sub = symmetric_row_sum_matrix([env.powers[j] for j in others])
        for a, ga in enumerate(others):
            for b, gb in enumerate(others):
                rows[ga][gb] = sub[a][b]
        share = env.powers[survivor] / len(others)
        for j in others:
            rows[survivor][j] = share

    u = tuple(tuple(row) for row in rows)
    states = state_vector(env, u)
    expected = tuple(
        State.SAFE if i == survivor else State.UNSAFE for i in range(env.n)
    )
    if states != expected:
        raise ConstructionFailed(
            f"sole survivor states are {[s.value for s in states]}"
        )
    return _verify(env, u, "sole survivor")


@dataclass(frozen=True)
class AnnihilationResult:
    """Outcome of pair-ordered mutual annihilation.

    `ordering` is the processed pair sequence, `trace` holds the residual
    vector after every step (index 0 is the initial powers), `matrix` the
    symmetric allocations placed on the processed pairs, and `residuals`
    the final unspent powers.
    """

    ordering: tuple[Pair, ...]
    trace: tuple[tuple[Fraction, ...], ...]
    matrix: Matrix
    residuals: tuple[Fraction, ...]


def pairwise_annihilation(
    env: Environment,
    excluded: int,
    ordering: Sequence[Pair] | None = None,
) -> AnnihilationResult:
    """Process adversarial pairs not touching `excluded` in order.

    Each step allocates the minimum of the two remaining powers
    symmetrically on the pair, so at least one endpoint of every processed
    pair ends with residual zero.
    """
    if env.friends:
        raise TopologyError("annihilation requires a friendless environment")
    pairs = sorted(p for p in env.adversaries if excluded not in p)
    if ordering is None:
        ordering = pairs
    elif sorted(ordering) != pairs:
        raise ValueError("ordering must list exactly the non-excluded adversary pairs")

    z = list(env.powers)
    trace = [tuple(z)]
    rows = [[ZERO] * env.n for _ in range(env.n)]
    for j, h in ordering:
        amount = min(z[j], z[h])
        rows[j][h] += amount
        rows[h][j] += amount
        z[j] -= amount
        z[h] -= amount
        trace.append(tuple(z))
    return AnnihilationResult(
        ordering=tuple(ordering),
        trace=tuple(trace),
        matrix=tuple(tuple(row) for row in rows),
        residuals=tuple(z),
    )


def _orderings(
    pairs: Sequence[Pair], seed: int, limit: int
) -> Iterable[tuple[Pair, ...]]:
    base = tuple(sorted(pairs))
    yield base
    produced = 1
    for perm in itertools.permutations(base):
        if perm == base:
            continue
        yield perm
        produced += 1
        if produced >= limit:
            break
    else:
        return
    # Permutations overflowed the systematic budget: sample the rest.
    rng = random.Random(seed)
    for _ in range(limit):
        shuffled = list(base)
        rng.shuffle(shuffled)
        yield tuple(shuffled)


def _residual_splits(
    holders: Sequence[int], seed: int, limit: int = 8
) -> Iterable[dict[int, bool]]:
    """Spend-or-reserve assignments for the countries holding residuals.

    Whether a leftover is burned on remaining rivals or held back changes
    who stays pinned, and the right choice can differ per country, so the
    assignments are enumerated (exhaustively while small, sampled beyond).
    """
    k = len(holders)
    if k == 0:
        yield {}
        return
    seen: set[tuple[bool, ...]] = set()

    def emit(bits: tuple[bool, ...]):
        if bits not in seen:
            seen.add(bits)
            return dict(zip(holders, bits))
        return None

    for bits in ((True,) * k, (False,) * k):
        split = emit(bits)
        if split is not None:
            yield split
    if 2 ** k <= limit:
        for bits in itertools.product((True, False), repeat=k):
            split = emit(bits)
            if split is not None:
                yield split
        return
    rng = random.Random(seed ^ 0x5EED)
    while len(seen) < limit:
        split = emit(tuple(rng.random() < 0.5 for _ in range(k)))
        if split is not None:
            yield split


def bipartite_safe_equilibrium(
    env: Environment,
    target: int,
    *,
    seed: int = 0,
    max_orderings: int = 720,
    repair_rounds: int = 12,
) -> Matrix:
    """Equilibrium on a friendless bipartite rivalry where `target` is safe.

    Runs the annihilation recursion on all pairs not involving the target,
    then the target outbids every adversary's residual, exhausting its
    budget with a strictly positive margin per adversary when possible.
    Residuals of other countries are spent on their remaining rivals rather
    than held in reserve (idle reserve next to a precarious rival is itself
    a profitable deviation).  If verification fails, bounded best-response
    repair and alternative pair orderings are tried before giving up.
    """
    if not bipartite_safe_sufficient(env, target):
        raise ConditionNotMet(
            f"sufficient condition fails for {env.names[target]}"
        )
    adversaries = env.adversaries_of(target)
    pairs = sorted(p for p in env.adversaries if target not in p)

    attempts = 0
    for ordering in _orderings(pairs, seed, max_orderings):
        attempts += 1
        outcome = pairwise_annihilation(env, target, ordering)
        z = list(outcome.residuals)
        need = sum((z[j] for j in adversaries), ZERO)
        if need > env.powers[target]:
            continue
        surplus = env.powers[target] - need
        holders = [
            k
            for k in range(env.n)
            if k != target
            and z[k] > 0
            and any(j != target for j in env.adversaries_of(k))
        ]

        for split in _residual_splits(holders, seed):
            rows = [list(row) for row in outcome.matrix]
            if adversaries:
                margin = surplus / len(adversaries)
                for j in adversaries:
                    rows[target][j] = z[j] + margin
            else:
                rows[target][target] = env.powers[target]
            for k in range(env.n):
                if k == target or z[k] == 0:
                    continue
                spendable = [j for j in env.adversaries_of(k) if j != target]
                if split.get(k, False) and spendable:
                    share = z[k] / len(spendable)
                    for j in spendable:
                        rows[k][j] += share
                else:
                    rows[k][k] = z[k]

            u: Matrix = tuple(tuple(row) for row in rows)
            if validate_allocation(env, u):
                continue
            for _ in range(repair_rounds):
                result = is_nash(env, u, stop_at_first=True)
                if result.ok:
                    break
                dev = result.deviations[0]
                u = replace_row(u, dev.country, dev.row)
            else:
                result = is_nash(env, u, stop_at_first=True)
            states = state_vector(env, u)
            if result.ok and states[target] is State.SAFE:
                return u

    raise ConstructionFailed(
        f"no verifying construction for {env.names[target]} after {attempts} orderings"
    )
