"""Command-line front end.

Six commands, one structured (JSON) or human-readable report per
invocation, and a stable exit-code contract:

    0  positive verdict (equilibrium / perfect / robust / report produced)
    1  negative verdict (violated, refuted, or infeasible support)
    2  input or usage error (parse failures, bad flags)
    3  precondition failure: the distribution is not a correlated equilibrium
    4  resource cap exceeded during support enumeration

Input paths are ordinary files; paths under ``corpus/`` fall back to the
corpus shipped with the package, so ``corpus/example1.game`` works from any
directory.  All report numerics are exact rational strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources

from .certify import NotCorrelatedEquilibriumError, certify_support
from .classify import (
    DEFAULT_SUPPORT_CAP,
    SupportEnumerationCapError,
    classify_all_supports,
    maximal_cpe_supports,
)
from .dominance import weakly_dominated_strategies
from .fileio import ParseError, load_distribution, load_game, load_trembles
from .game import is_correlated_equilibrium, product_support
from .lp import Infeasible
from .pdce import pdce_check
from .rationals import format_rational
from .sequences import find_support_weights, supporting_sequence_term, verify_sequence_term

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_NOT_CE = 3
EXIT_CAP = 4


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code, report = args.handler(args)
    except ParseError as exc:
        return _emit_error(args, str(exc), EXIT_INPUT)
    except SupportEnumerationCapError as exc:
        return _emit_error(args, str(exc), EXIT_CAP)
    except NotCorrelatedEquilibriumError as exc:
        # handlers report this themselves; kept as a safety net
        report = {
            "command": args.command,
            "verdict": "not-a-correlated-equilibrium",
            "detail": str(exc),
        }
        _emit(args, report, started)
        return EXIT_NOT_CE
    except ValueError as exc:
        return _emit_error(args, str(exc), EXIT_INPUT)
    _emit(args, report, started)
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpe-solver",
        description="Exact certification of correlated perfect equilibria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, dist=False, trembles=False, k=False, cap=False, seed=False):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--game", required=True, help="game file (.game)")
        if dist:
            cmd.add_argument("--dist", required=True, help="distribution file (.dist)")
        if trembles:
            cmd.add_argument("--trembles", required=True, help="tremble family file (.trembles)")
        if k:
            cmd.add_argument(
                "--k",
                required=True,
                type=_k_list,
                help="comma-separated positive sequence indices, e.g. 1,10,100",
            )
        if cap:
            cmd.add_argument(
                "--cap",
                type=int,
                default=_default_cap(),
                help="maximum number of product supports to enumerate",
            )
        if seed:
            cmd.add_argument(
                "--seed",
                type=int,
                default=None,
                help="seed for the randomised pruning spot-check (enables it)",
            )
        cmd.add_argument(
            "--format",
            choices=("human", "structured"),
            default="human",
            help="report style (structured = one JSON document)",
        )
        cmd.set_defaults(handler=handler)
        return cmd

    add("check-ce", _cmd_check_ce, "obedience test for a correlated strategy", dist=True)
    add("check-cpe", _cmd_check_cpe, "correlated-perfection certification", dist=True)
    add("sequence", _cmd_sequence, "construct and verify a supporting sequence", dist=True, k=True)
    add("enumerate", _cmd_enumerate, "classify every product support", cap=True, seed=True)
    add("check-pdce", _cmd_check_pdce, "tremble-robustness (player-mistake) test", dist=True, trembles=True)
    add("dominated", _cmd_dominated, "report weakly dominated strategies")
    return parser


def _k_list(text: str):
    values = []
    for chunk in text.split(","):
        try:
            k = int(chunk)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad sequence index {chunk!r}")
        if k < 1:
            raise argparse.ArgumentTypeError("sequence indices must be >= 1")
        values.append(k)
    if not values:
        raise argparse.ArgumentTypeError("at least one sequence index required")
    return values


def _default_cap() -> int:
    env = os.environ.get("CPE_SOLVER_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_SUPPORT_CAP


def _resolve(path: str) -> str:
    if os.path.exists(path):
        return path
    head, _, tail = path.replace("\\", "/").partition("/")
    if head == "corpus" and tail:
        packaged = resources.files("cpe_solver.corpus").joinpath(tail)
        if packaged.is_file():
            return str(packaged)
    raise ParseError("no such file", source=path)


# -- command handlers ---------------------------------------------------------


def _cmd_check_ce(args):
    game = load_game(_resolve(args.game))
    rho = load_distribution(_resolve(args.dist), game)
    check = is_correlated_equilibrium(game, rho)
    report = {
        "command": "check-ce",
        "game": args.game,
        "dist": args.dist,
        "verdict": "correlated-equilibrium" if check else "violated",
    }
    if not check:
        report["witness"] = _violation_doc(check.violation, game)
    return (EXIT_OK if check else EXIT_NEGATIVE), report


def _cmd_check_cpe(args):
    game = load_game(_resolve(args.game))
    rho = load_distribution(_resolve(args.dist), game)
    check = is_correlated_equilibrium(game, rho)
    if not check:
        report = {
            "command": "check-cpe",
            "game": args.game,
            "dist": args.dist,
            "verdict": "not-a-correlated-equilibrium",
            "witness": _violation_doc(check.violation, game),
        }
        return EXIT_NOT_CE, report
    support = product_support(rho)
    verdict = certify_support(game, support)
    report = {
        "command": "check-cpe",
        "game": args.game,
        "dist": args.dist,
        "support": _support_doc(support, game),
        "verdict": "perfect" if verdict.is_perfect else "refuted",
    }
    if verdict.is_perfect:
        return EXIT_OK, report
    report["refutation"] = _refutation_doc(verdict, game)
    return EXIT_NEGATIVE, report


def _cmd_sequence(args):
    game = load_game(_resolve(args.game))
    rho = load_distribution(_resolve(args.dist), game)
    check = is_correlated_equilibrium(game, rho)
    if not check:
        report = {
            "command": "sequence",
            "verdict": "not-a-correlated-equilibrium",
            "witness": _violation_doc(check.violation, game),
        }
        return EXIT_NOT_CE, report
    support = product_support(rho)
    weights = find_support_weights(game, support)
    if isinstance(weights, Infeasible):
        verdict = certify_support(game, support)
        if verdict.is_perfect:
            raise RuntimeError("weight system infeasible on a certified support")
        report = {
            "command": "sequence",
            "verdict": "refuted",
            "support": _support_doc(support, game),
            "refutation": _refutation_doc(verdict, game),
        }
        return EXIT_NEGATIVE, report
    terms = []
    for k in args.k:
        term = supporting_sequence_term(rho, weights, k)
        verified = verify_sequence_term(game, term, support)
        if not verified:
            raise RuntimeError("constructed sequence term failed exact verification")
        terms.append(
            {
                "k": k,
                "probabilities": {
                    ",".join(game.labels_of_profile(p)): format_rational(v)
                    for p, v in term.items()
                },
            }
        )
    report = {
        "command": "sequence",
        "verdict": "perfect",
        "support": _support_doc(support, game),
        "weights": {
            ",".join(game.labels_of_profile(p)): format_rational(
                weights.values[game.profile_index(p)]
            )
            for p in game.profiles()
        },
        "terms": terms,
    }
    return EXIT_OK, report


def _cmd_enumerate(args):
    game = load_game(_resolve(args.game))
    spot = 0.2 if args.seed is not None else 0.0
    classifications = classify_all_supports(
        game, cap=args.cap, spot_check_fraction=spot, seed=args.seed
    )
    maximal = maximal_cpe_supports(game, classifications=classifications)
    entries = []
    for entry in classifications:
        doc = {
            "support": _support_doc(entry.support, game),
            "equality_holds": entry.equality_holds,
            "ce_exists_with_exact_support": entry.ce_exists_with_exact_support,
            "pruned": entry.pruned,
        }
        if entry.sample_ce is not None:
            doc["sample_ce"] = {
                ",".join(game.labels_of_profile(p)): format_rational(v)
                for p, v in entry.sample_ce.items()
                if v
            }
        if entry.refutation is not None:
            doc["refutation"] = _refutation_doc(entry.refutation, game)
        entries.append(doc)
    report = {
        "command": "enumerate",
        "game": args.game,
        "support_count": len(entries),
        "classifications": entries,
        "maximal_cpe_supports": [_support_doc(s, game) for s in maximal],
    }
    return EXIT_OK, report


def _cmd_check_pdce(args):
    game = load_game(_resolve(args.game))
    rho = load_distribution(_resolve(args.dist), game)
    trembles = load_trembles(_resolve(args.trembles), game)
    result = pdce_check(game, rho, trembles)
    gains = [
        {
            "player": game.player_names[g.player],
            "recommended": game.strategy_names[g.player][g.recommended],
            "deviation": game.strategy_names[g.player][g.deviation],
            "gain_coeffs": [format_rational(c) for c in g.gain.coeffs],
            "gain": str(g.gain),
        }
        for g in result.gains
    ]
    report = {
        "command": "check-pdce",
        "verdict": "robust" if result.ok else "not-robust",
        "completely_mixed_trembles": trembles.completely_mixed,
        "gains": gains,
    }
    return (EXIT_OK if result.ok else EXIT_NEGATIVE), report


def _cmd_dominated(args):
    game = load_game(_resolve(args.game))
    table = {}
    for i in game.players():
        dominated = weakly_dominated_strategies(game, i)
        table[game.player_names[i]] = sorted(
            game.strategy_names[i][s] for s in dominated
        )
    report = {"command": "dominated", "game": args.game, "weakly_dominated": table}
    return EXIT_OK, report


# -- report rendering ---------------------------------------------------------


def _violation_doc(violation, game):
    return {
        "player": game.player_names[violation.player],
        "recommended": game.strategy_names[violation.player][violation.recommended],
        "deviation": game.strategy_names[violation.player][violation.deviation],
        "obey_value": format_rational(violation.obey_value),
        "deviate_value": format_rational(violation.deviate_value),
    }


def _support_doc(support, game):
    return [list(labels) for labels in support.labels(game)]


def _refutation_doc(verdict, game):
    plans = {}
    for i, plan in enumerate(verdict.alpha.plans):
        rows = {}
        for s_i, row in enumerate(plan.rows):
            rows[game.strategy_names[i][s_i]] = {
                game.strategy_names[i][t]: format_rational(v)
                for t, v in enumerate(row)
                if v
            }
        plans[game.player_names[i]] = rows
    return {
        "alpha": plans,
        "witnesses": [
            {
                "profile": ",".join(game.labels_of_profile(w.profile)),
                "gain": format_rational(w.gain),
            }
            for w in verdict.witnesses
        ],
    }


def _emit(args, report, started):
    report = dict(report)
    report["elapsed_ms"] = int((time.perf_counter() - started) * 1000)
    if getattr(args, "format", "human") == "structured":
        print(json.dumps(report, indent=2))
    else:
        _print_human(report)


def _emit_error(args, message, code):
    report = {"command": getattr(args, "command", "?"), "error": message, "exit": code}
    if getattr(args, "format", "human") == "structured":
        print(json.dumps(report, indent=2))
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


def _print_human(report):
    verdict = report.get("verdict")
    if verdict:
        print(f"{report['command']}: {verdict}")
    else:
        print(report["command"])
    if "witness" in report and isinstance(report["witness"], dict):
        w = report["witness"]
        print(
            f"  witness: player {w['player']} told {w['recommended']} prefers "
            f"{w['deviation']} ({w['deviate_value']} > {w['obey_value']})"
        )
    if "refutation" in report and report["refutation"]:
        witnesses = report["refutation"]["witnesses"]
        print(f"  refuting plans with {len(witnesses)} strict-gain profile(s):")
        for w in witnesses:
            print(f"    {w['profile']}: gain {w['gain']}")
    if "weights" in report:
        print("  weights: " + ", ".join(f"{k}={v}" for k, v in report["weights"].items()))
    for term in report.get("terms", ()):
        masses = ", ".join(f"{k}={v}" for k, v in term["probabilities"].items())
        print(f"  k={term['k']}: {masses}")
    if "classifications" in report:
        for entry in report["classifications"]:
            sets = "x".join("{" + ",".join(s) + "}" for s in entry["support"])
            flag = "equality" if entry["equality_holds"] else "refuted"
            ce = "ce" if entry["ce_exists_with_exact_support"] else "no-ce"
            pruned = " (pruned)" if entry["pruned"] else ""
            print(f"  {sets}: {flag}, {ce}{pruned}")
        maxi = report.get("maximal_cpe_supports", [])
        print(f"  maximal certified supports with an exact-support CE: {len(maxi)}")
        for sup in maxi:
            print("    " + "x".join("{" + ",".join(s) + "}" for s in sup))
    if "gains" in report:
        for g in report["gains"]:
            print(
                f"  {g['player']}: {g['recommended']} -> {g['deviation']}: {g['gain']}"
            )
    if "weakly_dominated" in report:
        for player, labels in report["weakly_dominated"].items():
            body = ", ".join(labels) if labels else "(none)"
            print(f"  {player}: {body}")
    print(f"  elapsed: {report['elapsed_ms']} ms")


if __name__ == "__main__":
    sys.exit(main())
