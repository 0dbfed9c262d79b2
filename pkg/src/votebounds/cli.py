"""Command line front end.

Exit codes: 0 on success, 1 when inputs fail validation or an instance
is too large for the requested method, 2 on usage errors. Results go to
stdout, every diagnostic goes to stderr. Machine-readable output (json,
csv) carries 12 significant digits, human output 6.
"""

from __future__ import annotations

import argparse
import json
import sys

from ._parallel import ENV_THREADS
from .bounds import counterexample_sweep, full_report, hellinger_envelopes
from .core import ProductBernoulli, ValidationError, fold_bias, load_panel
from .exact import DEFAULT_N_MAX, EnumerationLimitError, affinity
from .montecarlo import estimate_min_mass, simulate_error
from .rule import build_rule

__all__ = ["main"]


class _UsageError(Exception):
    """Flag combination that argparse alone cannot reject."""


def _fmt(x: float, sig: int) -> str:
    return f"{x:.{sig}g}"


def _jround(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, list):
        return [_jround(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jround(v) for k, v in obj.items()}
    return obj


def _emit_json(payload: dict) -> None:
    print(json.dumps(_jround(payload)))


def _emit_human(pairs) -> None:
    width = max(len(k) for k, _ in pairs)
    for key, value in pairs:
        if value is None:
            text = "n/a"
        elif isinstance(value, float):
            text = _fmt(value, 6)
        elif isinstance(value, list):
            text = " ".join(_fmt(v, 6) for v in value)
        else:
            text = str(value)
        print(f"{key:<{width}}  {text}")


def _csv_floats(text: str):
    try:
        values = [float(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of numbers")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _bits(text: str):
    if not text or any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError(f"{text!r} is not a string over 0 and 1")
    return [int(c) for c in text]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _cmd_validate(args) -> int:
    panel = load_panel(args.panel)
    sig = 12 if args.format == "json" else 6
    payload = {
        "psi": [float(_fmt(v, sig)) for v in panel.psi],
        "eta": [float(_fmt(v, sig)) for v in panel.eta],
        "p_y": float(_fmt(panel.p_y, sig)),
    }
    print(json.dumps(payload))
    return 0


def _cmd_decide(args) -> int:
    panel = load_panel(args.panel)
    rule = build_rule(panel)
    decision = rule.decide(args.x)
    if args.format == "json":
        _emit_json({"decision": decision, "score": rule.score(args.x)})
    else:
        print(decision)
    return 0


def _cmd_error(args) -> int:
    panel = load_panel(args.panel)
    folded = fold_bias(panel)
    fits = folded.n <= args.n_max
    if args.method != "mc" and (args.trials is not None or args.seed is not None):
        raise _UsageError("--trials and --seed require --method mc")
    if args.method == "mc":
        trials = args.trials if args.trials is not None else 1_000_000
        seed = args.seed if args.seed is not None else 0
        est, se = estimate_min_mass(
            folded.law_given_one(), folded.law_given_zero(),
            trials, seed, workers=args.threads,
        )
        value, std_error = 0.5 * est, 0.5 * se
        if args.format == "json":
            _emit_json({
                "error": value, "std_error": std_error, "method": "mc",
                "trials": trials, "seed": seed, "n": folded.n,
            })
        else:
            print(f"{_fmt(value, 6)} (std_error {_fmt(std_error, 6)})")
        return 0
    if not fits:
        raise EnumerationLimitError(
            f"folded panel has n = {folded.n} > n_max = {args.n_max}; "
            "pass --method mc to estimate instead"
        )
    from .exact import optimal_error

    value = optimal_error(folded, n_max=args.n_max, workers=args.threads)
    if args.format == "json":
        _emit_json({"error": value, "method": "exact", "n": folded.n})
    else:
        print(_fmt(value, 6))
    return 0


def _cmd_bounds(args) -> int:
    panel = load_panel(args.panel)
    report = full_report(
        panel, with_exact=args.with_exact, n_max=args.n_max, workers=args.threads,
    )
    payload = report.to_dict()
    if args.format == "json":
        _emit_json(payload)
    else:
        _emit_human(list(payload.items()))
    return 0


def _cmd_tv(args) -> int:
    P = ProductBernoulli(args.p)
    Q = ProductBernoulli(args.q)
    result = affinity(P, Q, n_max=args.n_max, workers=args.threads)
    hell_lower, hell_upper = hellinger_envelopes(P, Q)
    payload = {
        "n": result.n,
        "tv": result.tv,
        "min_mass": result.min_mass,
        "bhattacharyya": result.bhattacharyya,
        "hellinger_lower": hell_lower,
        "hellinger_upper": hell_upper,
        "method": result.method,
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        _emit_human(list(payload.items()))
    return 0


def _cmd_sweep(args) -> int:
    rows = counterexample_sweep(args.kind, args.eps)
    print("eps,exact,bound,ratio")
    for row in rows:
        print(",".join(_fmt(v, 12) for v in (row.eps, row.exact, row.bound, row.ratio)))
    return 0


def _cmd_simulate(args) -> int:
    panel = load_panel(args.panel)
    result = simulate_error(panel, args.trials, args.seed, workers=args.threads)
    if args.format == "json":
        _emit_json({
            "trials": result.trials,
            "empirical_error": result.empirical_error,
            "std_error": result.std_error,
            "seed": result.seed,
        })
    else:
        print(
            f"{_fmt(result.empirical_error, 6)} "
            f"(std_error {_fmt(result.std_error, 6)}, trials {result.trials}, "
            f"seed {result.seed})"
        )
    return 0


def _add_format(sub) -> None:
    sub.add_argument("--format", choices=("human", "json"), default="human",
                     help="output format (default human)")


def _add_threads(sub) -> None:
    sub.add_argument("--threads", type=_positive_int, default=None, metavar="T",
                     help=f"worker cap, overrides {ENV_THREADS} (default 1)")


def _add_n_max(sub) -> None:
    sub.add_argument("--n-max", dest="n_max", type=_positive_int,
                     default=DEFAULT_N_MAX, metavar="K",
                     help=f"enumeration cap (default {DEFAULT_N_MAX})")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="votebounds",
        description="Optimal aggregation of independent binary experts: "
                    "exact error, bounds, Monte Carlo.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("validate", help="check a panel file and echo it normalized")
    sub.add_argument("panel", help="path to a JSON panel file")
    _add_format(sub)
    sub.set_defaults(handler=_cmd_validate)

    sub = commands.add_parser("decide", help="apply the optimal rule to one vote vector")
    sub.add_argument("panel", help="path to a JSON panel file")
    sub.add_argument("--x", type=_bits, required=True, metavar="BITS",
                     help="votes as a string over {0,1}, expert 1 leftmost")
    _add_format(sub)
    sub.set_defaults(handler=_cmd_decide)

    sub = commands.add_parser("error", help="error probability of the optimal rule")
    sub.add_argument("panel", help="path to a JSON panel file")
    sub.add_argument("--method", choices=("exact", "mc"), default=None,
                     help="force a method; default picks exact when the folded "
                          "panel fits the enumeration cap")
    sub.add_argument("--trials", type=_positive_int, default=None, metavar="N",
                     help="Monte Carlo trials (mc only, default 1000000)")
    sub.add_argument("--seed", type=int, default=None, metavar="S",
                     help="Monte Carlo seed (mc only, default 0)")
    _add_n_max(sub)
    _add_threads(sub)
    _add_format(sub)
    sub.set_defaults(handler=_cmd_error)

    sub = commands.add_parser("bounds", help="evaluate every applicable bound")
    sub.add_argument("panel", help="path to a JSON panel file")
    sub.add_argument("--with-exact", action="store_true",
                     help="also run the exact enumeration")
    _add_n_max(sub)
    _add_threads(sub)
    _add_format(sub)
    sub.set_defaults(handler=_cmd_bounds)

    sub = commands.add_parser("tv", help="distances between two product Bernoulli laws")
    sub.add_argument("--p", type=_csv_floats, required=True, metavar="P1,P2,...",
                     help="first law's coordinate probabilities")
    sub.add_argument("--q", type=_csv_floats, required=True, metavar="Q1,Q2,...",
                     help="second law's coordinate probabilities")
    _add_n_max(sub)
    _add_threads(sub)
    _add_format(sub)
    sub.set_defaults(handler=_cmd_tv)

    sub = commands.add_parser("sweep", help="trace the showcase panels over an eps grid (CSV)")
    sub.add_argument("--kind", choices=("asym", "sym"), required=True,
                     help="asym: mismatched two-expert pair, overlap eps^2; "
                          "sym: matched weak pair, overlap 2 eps")
    sub.add_argument("--eps", type=_csv_floats, required=True, metavar="E1,E2,...",
                     help="grid of eps values in (0, 1)")
    sub.set_defaults(handler=_cmd_sweep)

    sub = commands.add_parser("simulate", help="simulate the generative process")
    sub.add_argument("panel", help="path to a JSON panel file")
    sub.add_argument("--trials", type=_positive_int, required=True, metavar="N")
    sub.add_argument("--seed", type=int, required=True, metavar="S")
    _add_threads(sub)
    _add_format(sub)
    sub.set_defaults(handler=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, EnumerationLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
