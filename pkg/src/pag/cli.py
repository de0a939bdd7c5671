"""Scenario ingestion, command dispatch, and reporting.

Scenario files are JSON: countries with exact powers (integers or "a/b"
fraction strings, never binary floats), friend and adversary pairs by name,
and an optional allocation given as sparse rows keyed by country name.
Fractions are serialized back as "a/b" strings so emit-then-parse round
trips are bit exact.

Commands print a human-readable report followed by a `---` separator and a
machine-readable JSON section (state strings are exactly "safe",
"precarious", "unsafe").  `construct` prints a complete scenario file
instead, so its output can be piped straight back into `verify`.

Exit codes: 0 success or affirmative, 1 well-formed negative (not an
equilibrium, condition not met, construction infeasible), 2 input or
topology error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import analysis, constructors, oracle
from .equilibrium import is_nash
from .model import (
    Environment,
    Matrix,
    ValidationError,
    sigma_tau,
    state_of,
    state_vector,
    to_fraction,
    validate_allocation,
    validate_environment,
    zero_matrix,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _frac_str(value: Fraction) -> str:
    return str(value)


def parse_scenario(data: Any) -> tuple[Environment, Matrix | None]:
    """Build an environment (and allocation, if present) from scenario JSON."""
    errors: list[str] = []
    if not isinstance(data, dict):
        raise ValidationError(["scenario must be a JSON object"])
    countries = data.get("countries")
    if not isinstance(countries, list) or not countries:
        raise ValidationError(["scenario needs a nonempty 'countries' list"])
    names: list[str] = []
    powers: list[Any] = []
    for entry in countries:
        if not isinstance(entry, dict) or "name" not in entry or "power" not in entry:
            errors.append(f"country entries need 'name' and 'power': {entry!r}")
            continue
        names.append(str(entry["name"]))
        powers.append(entry["power"])

    def pairs(key: str) -> list[tuple[str, str]]:
        raw = data.get(key, [])
        out: list[tuple[str, str]] = []
        if not isinstance(raw, list):
            errors.append(f"'{key}' must be a list of name pairs")
            return out
        for item in raw:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                errors.append(f"bad {key} pair: {item!r}")
                continue
            out.append((str(item[0]), str(item[1])))
        return out

    friend_pairs = pairs("friends")
    adversary_pairs = pairs("adversaries")
    if errors:
        raise ValidationError(errors)
    env = validate_environment(names, powers, friend_pairs, adversary_pairs)

    allocation = data.get("allocation")
    if allocation is None:
        return env, None
    if not isinstance(allocation, dict):
        raise ValidationError(["'allocation' must map row names to entry maps"])
    rows = [list(row) for row in zero_matrix(env)]
    for row_name, entries in allocation.items():
        if row_name not in env.names:
            errors.append(f"unknown country {row_name!r} in allocation")
            continue
        if not isinstance(entries, dict):
            errors.append(f"allocation row for {row_name!r} must be a map")
            continue
        i = env.index(row_name)
        for col_name, raw in entries.items():
            if col_name not in env.names:
                errors.append(f"unknown country {col_name!r} in allocation row {row_name!r}")
                continue
            try:
                rows[i][env.index(col_name)] = to_fraction(raw)
            except ValidationError as exc:
                errors.extend(f"allocation {row_name}->{col_name}: {e}" for e in exc.errors)
    if errors:
        raise ValidationError(errors)
    return env, tuple(tuple(row) for row in rows)


def emit_scenario(env: Environment, u: Matrix | None = None) -> dict:
    """Serialize an environment (and allocation) to the scenario JSON shape."""
    data: dict[str, Any] = {
        "countries": [
            {"name": name, "power": _frac_str(p)}
            for name, p in zip(env.names, env.powers)
        ],
        "friends": sorted([env.names[i], env.names[j]] for i, j in env.friends),
        "adversaries": sorted([env.names[i], env.names[j]] for i, j in env.adversaries),
    }
    if u is not None:
        allocation: dict[str, dict[str, str]] = {}
        for i in range(env.n):
            row = {
                env.names[j]: _frac_str(u[i][j])
                for j in range(env.n)
                if u[i][j] != 0
            }
            if row:
                allocation[env.names[i]] = row
        data["allocation"] = allocation
    return data


def _load(path: str) -> tuple[Environment, Matrix | None]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_scenario(json.loads(text))


def _print_report(lines: Sequence[str], payload: dict) -> None:
    for line in lines:
        print(line)
    print("---")
    print(json.dumps(payload, indent=2, sort_keys=True))


def _fail(message: str, code: int = EXIT_ERROR) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _states_payload(env: Environment, states) -> list[str]:
    return [s.value for s in states]


def _require_allocation(u: Matrix | None) -> Matrix:
    if u is None:
        raise ValidationError(["scenario has no allocation"])
    return u


def _cmd_validate(args: argparse.Namespace) -> int:
    env, u = _load(args.scenario)
    problems: list[str] = []
    if u is not None:
        problems = validate_allocation(env, u)
    lines = [f"environment: ok ({env.n} countries)"]
    if u is None:
        lines.append("allocation: none")
    elif problems:
        lines.append("allocation: invalid")
        lines.extend(f"  - {p}" for p in problems)
    else:
        lines.append("allocation: ok")
    payload = {
        "command": "validate",
        "valid": not problems,
        "has_allocation": u is not None,
        "errors": problems,
    }
    _print_report(lines, payload)
    return EXIT_OK if not problems else EXIT_NEGATIVE


def _check_valid_allocation(env: Environment, u: Matrix) -> None:
    problems = validate_allocation(env, u)
    if problems:
        raise ValidationError(problems)


def _cmd_evaluate(args: argparse.Namespace) -> int:
    env, u = _load(args.scenario)
    u = _require_allocation(u)
    _check_valid_allocation(env, u)
    sigmas, taus = sigma_tau(env, u)
    states = [state_of(s, t) for s, t in zip(sigmas, taus)]
    lines = []
    rows = []
    for i, name in enumerate(env.names):
        lines.append(
            f"{name}: support={sigmas[i]} threat={taus[i]} state={states[i].value}"
        )
        rows.append(
            {
                "name": name,
                "index": i,
                "power": _frac_str(env.powers[i]),
                "support": _frac_str(sigmas[i]),
                "threat": _frac_str(taus[i]),
                "state": states[i].value,
            }
        )
    payload = {
        "command": "evaluate",
        "countries": rows,
        "states": [s.value for s in states],
    }
    _print_report(lines, payload)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    env, u = _load(args.scenario)
    u = _require_allocation(u)
    _check_valid_allocation(env, u)
    result = is_nash(env, u)
    states = state_vector(env, u)
    lines = [
        f"nash equilibrium: {'yes' if result.ok else 'no'}",
        "states: " + " ".join(f"{n}={s.value}" for n, s in zip(env.names, states)),
    ]
    certificates: dict[str, Any] = {}
    for i, name in enumerate(env.names):
        dev = result.witness_for(i)
        if dev is None:
            certificates[name] = None
        else:
            lines.append(f"{name}: profitable deviation found")
            certificates[name] = {
                "row": {
                    env.names[j]: _frac_str(dev.row[j])
                    for j in range(env.n)
                    if dev.row[j] != 0
                },
                "states": _states_payload(env, dev.states),
            }
    payload = {
        "command": "verify",
        "is_nash": result.ok,
        "states": _states_payload(env, states),
        "certificates": certificates,
    }
    _print_report(lines, payload)
    return EXIT_OK if result.ok else EXIT_NEGATIVE


def _cmd_construct(args: argparse.Namespace) -> int:
    env, _ = _load(args.scenario)
    if args.kind in ("sole-survivor", "bipartite-safe") and not args.target:
        return _fail(f"--target is required for --kind {args.kind}")
    if args.kind == "balancing":
        u = constructors.balancing_equilibrium(env)
    elif args.kind == "sole-survivor":
        u = constructors.sole_survivor_equilibrium(env, env.index(args.target))
    else:
        u = constructors.bipartite_safe_equilibrium(
            env, env.index(args.target), seed=args.seed
        )
    print(json.dumps(emit_scenario(env, u), indent=2, sort_keys=True))
    return EXIT_OK


def _optional(check, *call_args):
    try:
        return check(*call_args)
    except analysis.TopologyError:
        return None


def _cmd_analyze(args: argparse.Namespace) -> int:
    env, _ = _load(args.scenario)
    lines = []
    payload: dict[str, Any] = {"command": "analyze"}

    if args.group:
        group_names = [g.strip() for g in args.group.split(",") if g.strip()]
        group = [env.index(g) for g in group_names]
        balance = analysis.check_group_balance(env, group)
        clique = analysis.check_clique_defense(env, group)
        lines.append(f"group {','.join(group_names)}: balance={balance} clique-defense={clique}")
        payload["group"] = {
            "members": group_names,
            "group_balance": balance,
            "clique_defense": clique,
        }

    balancing = _optional(analysis.balancing_exists, env)
    if balancing is None:
        lines.append("balancing equilibrium: not applicable (not a complete rivalry)")
    else:
        lines.append(f"balancing equilibrium exists: {balancing}")
    payload["balancing_exists"] = balancing

    bipartite: dict[str, Any] | None
    try:
        necessary = {n: analysis.bipartite_safe_necessary(env, i) for i, n in enumerate(env.names)}
        sufficient = {n: analysis.bipartite_safe_sufficient(env, i) for i, n in enumerate(env.names)}
        bipartite = {"necessary": necessary, "sufficient": sufficient}
        lines.append(
            "safety condition (necessary/sufficient): "
            + " ".join(
                f"{n}={'y' if necessary[n] else 'n'}/{'y' if sufficient[n] else 'n'}"
                for n in env.names
            )
        )
    except analysis.TopologyError:
        bipartite = None
        lines.append("bipartite safety conditions: not applicable")
    payload["bipartite_safety"] = bipartite

    report = analysis.dp_cover(env)
    for d in report.dominations:
        lines.append(
            f"domination of {env.names[d.owner]}: "
            + ",".join(env.names[m] for m in sorted(d.members))
        )
    for p in report.protectorates:
        lines.append(
            f"protectorate of {env.names[p.owner]}: "
            + ",".join(env.names[m] for m in sorted(p.members))
        )
    lines.append(f"cover spans: {report.spans}")
    lines.append(
        "verdicts: "
        + " ".join(f"{n}={v.value}" for n, v in zip(env.names, report.verdicts))
    )
    payload["cover"] = {
        "dominations": [
            {"owner": env.names[d.owner], "members": sorted(env.names[m] for m in d.members)}
            for d in report.dominations
        ],
        "protectorates": [
            {
                "owner": env.names[p.owner],
                "members": sorted(env.names[m] for m in p.members),
                "weak_friends": sorted(env.names[m] for m in p.weak_friends),
                "threats": sorted(env.names[m] for m in p.threats),
            }
            for p in report.protectorates
        ],
        "covered": sorted(env.names[m] for m in report.covered),
        "spans": report.spans,
        "verdicts": {n: v.value for n, v in zip(env.names, report.verdicts)},
    }
    _print_report(lines, payload)
    return EXIT_OK


def _cmd_search(args: argparse.Namespace) -> int:
    env, _ = _load(args.scenario)
    step = to_fraction(args.step)
    grid = oracle.GridSpec(step=step, max_candidates=args.max_candidates)
    atlas = oracle.find_equilibria(env, grid)
    lines = [
        f"grid step: {step}",
        f"candidates checked: {atlas.candidates_checked}",
        f"equilibria found: {atlas.total} in {len(atlas.classes)} classes",
    ]
    classes_payload = []
    for cls in atlas.classes:
        lines.append(
            "class "
            + "[" + ", ".join(s.value for s in cls.states) + "]"
            + f": {len(cls.members)} matrices"
        )
        example = emit_scenario(env, cls.members[0])
        classes_payload.append(
            {
                "states": [s.value for s in cls.states],
                "count": len(cls.members),
                "example_allocation": example.get("allocation", {}),
            }
        )
    survival: dict[str, str] = {}
    if atlas.classes:
        for i, name in enumerate(env.names):
            survival[name] = oracle.survival_possibility(atlas, i).value
        lines.append(
            "survival: " + " ".join(f"{n}={v}" for n, v in survival.items())
        )
    else:
        lines.append("survival: no equilibria found on this grid")
    lines.append("note: grid absence is evidence, not proof, for continuous claims")
    payload = {
        "command": "search",
        "step": _frac_str(step),
        "candidates_checked": atlas.candidates_checked,
        "classes": classes_payload,
        "survival": survival,
        "complete_for_continuous_strategies": False,
    }
    _print_report(lines, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pag",
        description="Exact analysis of power allocation games on relation graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check environment and allocation invariants")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("evaluate", help="print support, threat, and state per country")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("verify", help="check the allocation for Nash equilibrium")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("construct", help="construct an equilibrium of the given kind")
    p.add_argument("scenario")
    p.add_argument(
        "--kind",
        required=True,
        choices=["balancing", "sole-survivor", "bipartite-safe"],
    )
    p.add_argument("--target", help="country name (sole-survivor, bipartite-safe)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("analyze", help="survival condition reports and the cover")
    p.add_argument("scenario")
    p.add_argument("--group", help="comma-separated country names")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("search", help="enumerate grid equilibria exhaustively")
    p.add_argument("scenario")
    p.add_argument("--step", required=True, help="grid step, e.g. 1 or 1/4")
    p.add_argument("--max-candidates", type=int, default=10_000_000)
    p.set_defaults(func=_cmd_search)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        return _fail(f"cannot read {exc.filename}")
    except json.JSONDecodeError as exc:
        return _fail(f"invalid JSON: {exc}")
    except ValidationError as exc:
        for problem in exc.errors:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_ERROR
    except KeyError as exc:
        return _fail(str(exc.args[0]) if exc.args else str(exc))
    except analysis.TopologyError as exc:
        return _fail(f"topology: {exc}")
    except oracle.EnumerationTooLarge as exc:
        return _fail(str(exc))
    except (
        constructors.InfeasiblePower,
        constructors.PreconditionViolated,
        constructors.ConditionNotMet,
        constructors.ConstructionFailed,
    ) as exc:
        print(f"construction: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except ValueError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
