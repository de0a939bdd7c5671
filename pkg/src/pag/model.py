"""Core types of the power allocation game.

An environment is a set of named countries with exact rational powers and
symmetric friend/adversary relations.  An allocation matrix splits each
country's power across its own reserve, support for friends, and offense
against adversaries.  The induced per-country state (safe, precarious,
unsafe) is decided by comparing total support against total threat.

Every quantity is a `fractions.Fraction`.  The safe/precarious boundary is
an equality test, so binary floating point is never used anywhere.
All functions here are pure and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = int | str | Fraction
Matrix = tuple[tuple[Fraction, ...], ...]
Pair = tuple[int, int]

ZERO = Fraction(0)


class State(Enum):
    """Survival state of one country under a given allocation."""

    SAFE = "safe"
    PRECARIOUS = "precarious"
    UNSAFE = "unsafe"

    @property
    def survives(self) -> bool:
        return self is not State.UNSAFE


#: Canonical order used for deterministic sorting of state vectors.
STATE_ORDER = {State.SAFE: 0, State.PRECARIOUS: 1, State.UNSAFE: 2}


class ValidationError(ValueError):
    """An environment or allocation description violates its invariants.

    Carries the full list of problems found, not just the first one.
    """

    def __init__(self, errors: Sequence[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


def to_fraction(value: Rational) -> Fraction:
    """Parse an exact rational from an int, a Fraction, or an 'a/b' string.

    Floats are rejected: they cannot represent the inputs exactly and would
    corrupt the precarious-boundary equality tests downstream.
    """
    if isinstance(value, bool):
        raise ValidationError([f"not a rational: {value!r}"])
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError([f"not a rational: {value!r}"]) from exc
    raise ValidationError([f"not a rational: {value!r} (floats are rejected)"])


def _normalize_pair(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Environment:
    """Countries, exact powers, and symmetric relation sets.

    Countries are referenced by stable 0-based indices internally; names are
    the external interface.  Relation pairs are stored normalized with the
    smaller index first.
    """

    names: tuple[str, ...]
    powers: tuple[Fraction, ...]
    friends: frozenset[Pair]
    adversaries: frozenset[Pair]

    _friend_adj: tuple[tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False, default=()
    )
    _adversary_adj: tuple[tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        n = len(self.names)
        fr: list[list[int]] = [[] for _ in range(n)]
        ad: list[list[int]] = [[] for _ in range(n)]
        for i, j in self.friends:
            fr[i].append(j)
            fr[j].append(i)
        for i, j in self.adversaries:
            ad[i].append(j)
            ad[j].append(i)
        object.__setattr__(self, "_friend_adj", tuple(tuple(sorted(x)) for x in fr))
        object.__setattr__(self, "_adversary_adj", tuple(tuple(sorted(x)) for x in ad))

    @property
    def n(self) -> int:
        return len(self.names)

    def friends_of(self, i: int) -> tuple[int, ...]:
        return self._friend_adj[i]

    def adversaries_of(self, i: int) -> tuple[int, ...]:
        return self._adversary_adj[i]

    def row_support(self, i: int) -> tuple[int, ...]:
        """Indices where row i may be nonzero: i itself plus its relations."""
        return tuple(sorted((i, *self._friend_adj[i], *self._adversary_adj[i])))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown country {name!r}") from None


def validate_environment(
    names: Sequence[str],
    powers: Sequence[Rational],
    friends: Iterable[tuple[str, str]] = (),
    adversaries: Iterable[tuple[str, str]] = (),
) -> Environment:
    """Check a raw environment description and build an Environment.

    Collects every violation (duplicate names, negative power, self pairs,
    pairs that are both friend and adversary, unknown names) and raises a
    single ValidationError listing all of them.
    """
    errors: list[str] = []
    if not names:
        errors.append("no countries")
    seen: set[str] = set()
    for name in names:
        if name in seen:
            errors.append(f"duplicate name {name!r}")
        seen.add(name)
    if len(powers) != len(names):
        errors.append(f"{len(names)} countries but {len(powers)} powers")

    parsed: list[Fraction] = []
    for name, raw in zip(names, powers):
        try:
            value = to_fraction(raw)
        except ValidationError as exc:
            errors.extend(f"power for {name!r}: {e}" for e in exc.errors)
            value = ZERO
        if value < 0:
            errors.append(f"negative power for {name!r}")
        parsed.append(value)

    index = {name: i for i, name in enumerate(names)}

    def resolve(pairs: Iterable[tuple[str, str]], label: str) -> set[Pair]:
        out: set[Pair] = set()
        for a, b in pairs:
            bad = False
            for name in (a, b):
                if name not in index:
                    errors.append(f"unknown country {name!r} in {label} pair")
                    bad = True
            if bad:
                continue
            if a == b:
                errors.append(f"self relation for {a!r}")
                continue
            out.add(_normalize_pair(index[a], index[b]))
        return out

    friend_pairs = resolve(friends, "friend")
    adversary_pairs = resolve(adversaries, "adversary")
    for i, j in sorted(friend_pairs & adversary_pairs):
        errors.append(
            f"conflicting relation for {names[i]!r} and {names[j]!r}"
            " (both friend and adversary)"
        )

    if errors:
        raise ValidationError(errors)
    return Environment(
        names=tuple(names),
        powers=tuple(parsed),
        friends=frozenset(friend_pairs),
        adversaries=frozenset(adversary_pairs),
    )


def make_environment(
    powers: Sequence[Rational],
    *,
    friends: Iterable[Pair] = (),
    adversaries: Iterable[Pair] = (),
    names: Sequence[str] | None = None,
) -> Environment:
    """Build an Environment from 0-based index pairs (convenience)."""
    if names is None:
        names = tuple(f"v{i + 1}" for i in range(len(powers)))
    return validate_environment(
        names,
        powers,
        [(names[i], names[j]) for i, j in friends],
        [(names[i], names[j]) for i, j in adversaries],
    )


def zero_matrix(env: Environment) -> Matrix:
    return tuple(tuple(ZERO for _ in range(env.n)) for _ in range(env.n))


def matrix_from_entries(
    env: Environment, entries: Mapping[Pair, Rational]
) -> Matrix:
    """Build a full matrix from sparse {(row, col): value} entries."""
    rows = [[ZERO] * env.n for _ in range(env.n)]
    for (i, j), raw in entries.items():
        rows[i][j] = to_fraction(raw)
    return tuple(tuple(row) for row in rows)


def replace_row(u: Matrix, i: int, row: Sequence[Fraction]) -> Matrix:
    return tuple(tuple(row) if k == i else u[k] for k in range(len(u)))


def validate_allocation(env: Environment, u: Matrix) -> list[str]:
    """Check allocation invariants; an empty list means the matrix is valid.

    Reports row-sum mismatches (with the deficit) and nonzero entries at
    cells with no relation.
    """
    errors: list[str] = []
    if len(u) != env.n or any(len(row) != env.n for row in u):
        return [f"matrix must be {env.n}x{env.n}"]
    for i in range(env.n):
        allowed = set(env.row_support(i))
        total = ZERO
        for j in range(env.n):
            value = u[i][j]
            if value < 0:
                errors.append(f"negative entry {env.names[i]}->{env.names[j]}")
            if value != 0 and j not in allowed:
                errors.append(
                    f"nonzero entry {env.names[i]}->{env.names[j]} with no relation"
                )
            total += value
        if total != env.powers[i]:
            errors.append(
                f"row sum for {env.names[i]} is {total}, expected {env.powers[i]}"
                f" (deficit {env.powers[i] - total})"
            )
    return errors


def sigma_tau(env: Environment, u: Matrix) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Compute all support and threat values in one pass.

    Support of i: reserve + incoming friend support + own offense.
    Threat of i: total adversary power directed at i.
    """
    sigmas = []
    taus = []
    for i in range(env.n):
        sig = u[i][i]
        for j in env.friends_of(i):
            sig += u[j][i]
        tau = ZERO
        for j in env.adversaries_of(i):
            sig += u[i][j]
            tau += u[j][i]
        sigmas.append(sig)
        taus.append(tau)
    return tuple(sigmas), tuple(taus)


def support(env: Environment, u: Matrix, i: int) -> Fraction:
    """Support of country i: u_ii + incoming friend aid + own offense."""
    sig = u[i][i]
    for j in env.friends_of(i):
        sig += u[j][i]
    for j in env.adversaries_of(i):
        sig += u[i][j]
    return sig


def threat(env: Environment, u: Matrix, i: int) -> Fraction:
    """Threat against country i: total adversary power aimed at it."""
    tau = ZERO
    for j in env.adversaries_of(i):
        tau += u[j][i]
    return tau


def state_of(sig: Fraction, tau: Fraction) -> State:
    if sig > tau:
        return State.SAFE
    if sig == tau:
        return State.PRECARIOUS
    return State.UNSAFE


def state_vector(env: Environment, u: Matrix) -> tuple[State, ...]:
    """Per-country states induced by allocation u, by exact comparison."""
    sigmas, taus = sigma_tau(env, u)
    return tuple(state_of(s, t) for s, t in zip(sigmas, taus))
