"""Desk-scale ground truth by exhaustive grid enumeration.

Every admissible matrix whose entries are multiples of a chosen step is
generated and checked with the exact continuous Nash verifier, so
membership in the resulting atlas is sound unconditionally; only coverage
is grid-limited.  Absence from the grid is evidence, not proof, for
continuous-strategy claims.

Enumeration is naturally partitioned by the first row's composition and
could run concurrently; the atlas orders classes and members canonically
so any merge is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterator

from .equilibrium import is_nash
from .model import (
    ZERO,
    Environment,
    Matrix,
    State,
    STATE_ORDER,
    state_of,
)


class EnumerationTooLarge(ValueError):
    def __init__(self, count: int, bound: int):
        super().__init__(f"{count} candidate matrices exceed the bound of {bound}")
        self.count = count
        self.bound = bound


class EmptyAtlas(ValueError):
    """The atlas holds no equilibria, so survival cannot be classified."""


@dataclass(frozen=True)
class GridSpec:
    """Enumeration grid: positive step that must divide every power exactly."""

    step: Fraction
    max_candidates: int = 10_000_000

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ValueError("step must be positive")


@dataclass(frozen=True)
class EquilibriumClass:
    states: tuple[State, ...]
    members: tuple[Matrix, ...]


@dataclass(frozen=True)
class EquilibriumAtlas:
    """Grid equilibria grouped by their state vector."""

    env: Environment
    step: Fraction
    classes: tuple[EquilibriumClass, ...]
    candidates_checked: int

    @property
    def total(self) -> int:
        return sum(len(c.members) for c in self.classes)


class SurvivalPossibility(Enum):
    ALWAYS_ON_GRID = "always-on-grid"
    SOMETIMES_ON_GRID = "sometimes-on-grid"
    NEVER_ON_GRID = "never-on-grid"


def _row_units(env: Environment, i: int, step: Fraction) -> int:
    units = env.powers[i] / step
    if units.denominator != 1:
        raise ValueError(
            f"step {step} does not divide the power of {env.names[i]} ({env.powers[i]})"
        )
    return int(units)


def candidate_count(env: Environment, step: Fraction) -> int:
    """Number of admissible grid matrices (product of row compositions)."""
    count = 1
    for i in range(env.n):
        units = _row_units(env, i, step)
        parts = len(env.row_support(i))
        count *= math.comb(units + parts - 1, parts - 1)
    return count


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@dataclass(frozen=True)
class _RowCandidate:
    row: tuple[Fraction, ...]
    own_support: Fraction
    friend_out: tuple[tuple[int, Fraction], ...]
    threat_out: tuple[tuple[int, Fraction], ...]


def _row_candidates(env: Environment, i: int, step: Fraction) -> list[_RowCandidate]:
    supports = env.row_support(i)
    friends = env.friends_of(i)
    adversaries = env.adversaries_of(i)
    units = _row_units(env, i, step)
    out = []
    for combo in _compositions(units, len(supports)):
        row = [ZERO] * env.n
        for j, c in zip(supports, combo):
            row[j] = c * step
        own = row[i] + sum((row[j] for j in adversaries), ZERO)
        out.append(
            _RowCandidate(
                row=tuple(row),
                own_support=own,
                friend_out=tuple((j, row[j]) for j in friends if row[j] != 0),
                threat_out=tuple((j, row[j]) for j in adversaries if row[j] != 0),
            )
        )
    return out


def find_equilibria(env: Environment, grid: GridSpec) -> EquilibriumAtlas:
    """Enumerate all grid-admissible matrices and keep the exact equilibria."""
    count = candidate_count(env, grid.step)
    if count > grid.max_candidates:
        raise EnumerationTooLarge(count, grid.max_candidates)

    per_row = [_row_candidates(env, i, grid.step) for i in range(env.n)]
    classes: dict[tuple[State, ...], list[Matrix]] = {}
    checked = 0
    for combo in product(*per_row):
        checked += 1
        sigmas = [rec.own_support for rec in combo]
        taus = [ZERO] * env.n
        for rec in combo:
            for j, value in rec.friend_out:
                sigmas[j] += value
            for j, value in rec.threat_out:
                taus[j] += value
        u: Matrix = tuple(rec.row for rec in combo)
        result = is_nash(env, u, stop_at_first=True, _pre=(tuple(sigmas), tuple(taus)))
        if result.ok:
            states = tuple(state_of(s, t) for s, t in zip(sigmas, taus))
            classes.setdefault(states, []).append(u)

    ordered = tuple(
        EquilibriumClass(states=states, members=tuple(sorted(members)))
        for states, members in sorted(
            classes.items(), key=lambda kv: tuple(STATE_ORDER[s] for s in kv[0])
        )
    )
    return EquilibriumAtlas(env=env, step=grid.step, classes=ordered, candidates_checked=checked)


def survival_possibility(atlas: EquilibriumAtlas, i: int) -> SurvivalPossibility:
    """Classify i's survival across the atlas's equilibrium classes."""
    if not atlas.classes:
        raise EmptyAtlas("no equilibria in the atlas")
    bits = [cls.states[i].survives for cls in atlas.classes]
    if all(bits):
        return SurvivalPossibility.ALWAYS_ON_GRID
    if not any(bits):
        return SurvivalPossibility.NEVER_ON_GRID
    return SurvivalPossibility.SOMETIMES_ON_GRID
