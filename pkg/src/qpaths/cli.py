"""Command-line front end.

Every subcommand prints a JSON envelope {command, config, library_version,
q_mode, result} with sorted keys, so identical invocations produce byte-
identical output; ``--format csv`` prints the tabular part of the result as
CSV instead.  ``sample`` emits plain path-text lines by default.  Exact q
values are given as rationals ("1/2"); floats require the explicit --float
flag.  Exit codes: 0 success, 1 verification failure, 2 usage or
precondition error.

A sweep file (``--sweep``) holds lines ``flag = value, value, ...``; the
cartesian product of all listed flags is run, one JSON line per grid point,
concurrently up to ``--jobs`` but emitted in grid order.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .correlations import (
    SPIN_DOWN,
    SPIN_UP,
    CorrelationQuery,
    FluctuationQuery,
    PathSampler,
    TailBound,
    exp_bound,
    fluctuation_distribution,
    multipoint_bound_regime,
    multipoint_prob,
)
from .errors import CapExceeded, DomainError, InconsistentQuery, RangeError
from .partition import DEFAULT_Q_GRID, ZCache, z_cached, z_recursive
from .paths import BoxSpec, oracle_partition
from .reduction2d import compositions, z2d_oracle, z2d_product, z2d_reduction
from .verify import run_suites

CACHE_SIZE_ENV = "QPATHS_CACHE_SIZE"


def _make_cache() -> ZCache:
    raw = os.environ.get(CACHE_SIZE_ENV)
    return ZCache(max_entries=int(raw) if raw else None)


def _parse_q(text: str, as_float: bool):
    value = float(text) if as_float else Fraction(text)
    if not 0 < value < 1:
        raise DomainError(f"q must lie strictly in (0, 1), got {text}")
    return value


def _parse_sites(text: str) -> list[tuple[int, str]]:
    out = []
    for chunk in text.split(","):
        site, _, spin = chunk.strip().partition(":")
        if spin not in (SPIN_DOWN, SPIN_UP):
            raise ValueError(f"bad site spec {chunk!r}; expected e.g. '3:down'")
        out.append((int(site), spin))
    return out


def _envelope(command: str, config: dict, q_mode: Optional[str], result) -> dict:
    return {
        "command": command,
        "config": config,
        "library_version": __version__,
        "q_mode": q_mode,
        "result": result,
    }


def _emit(args, envelope: dict, table: Optional[tuple[list[str], list[list]]]):
    if getattr(args, "format", "json") == "csv" and table is not None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(table[0])
        writer.writerows(table[1])
    else:
        print(json.dumps(envelope, sort_keys=True, indent=2))


# -- subcommands ---------------------------------------------------------------


def _run_partition(args) -> tuple:
    cache = _make_cache()
    if args.oracle:
        poly = oracle_partition(BoxSpec.sector(args.n, args.m), cap=args.cap)
        method = "oracle"
    elif args.recursive:
        poly = z_recursive(args.n, args.m, cache)
        method = "recursive"
    else:
        poly = z_cached(args.n, args.m, cache)
        method = "closed"
    q = _parse_q(args.eval, args.float) if args.eval is not None else None
    q_mode = None if q is None else ("float" if args.float else "exact")
    result = {"polynomial": poly.to_json_obj(), "value": None}
    if q is not None:
        value = poly.evaluate(q)
        result["value"] = str(value) if isinstance(value, Fraction) else value
    config = {"n": args.n, "m": args.m, "method": method, "eval": args.eval}
    table = (["exponent", "coefficient"], [[e, c] for e, c in poly.to_json_obj()])
    return 0, _envelope("partition", config, q_mode, result), table


def _run_correlate(args) -> tuple:
    cache = _make_cache()
    query = CorrelationQuery.build(args.n, args.m, _parse_sites(args.sites))
    prob = multipoint_prob(query, cache)
    v = query.down_count
    bound_exponent = v * (v - 1) + 2 * sum(query.interface_distances())
    in_regime = multipoint_bound_regime(query)
    if args.eval is not None:
        qs = [_parse_q(args.eval, args.float)]
        q_mode = "float" if args.float else "exact"
    else:
        qs = list(DEFAULT_Q_GRID)
        q_mode = "exact"
    checks = []
    for q in qs:
        p = prob.evaluate(q)
        b = exp_bound(query, q)
        checks.append(
            {
                "q": str(q),
                "probability": str(p) if isinstance(p, Fraction) else p,
                "probability_float": float(p),
                "bound": str(b) if isinstance(b, Fraction) else b,
                "bound_float": float(b),
                "holds": bool(p <= b),
            }
        )
    result = {
        "probability": prob.to_json_obj(),
        "bound_exponent": bound_exponent,
        "checks": checks,
        "bound_holds": all(c["holds"] for c in checks),
        "in_regime": in_regime,
    }
    config = {
        "n": args.n,
        "m": args.m,
        "sites": args.sites,
        "eval": args.eval,
        "exact": args.exact,
    }
    header = ["q", "probability", "probability_float", "bound", "bound_float", "holds", "in_regime"]
    rows = [
        [c["q"], c["probability"], c["probability_float"], c["bound"], c["bound_float"], c["holds"], in_regime]
        for c in checks
    ]
    return 0, _envelope("correlate", config, q_mode, result), (header, rows)


def _run_fluctuations(args) -> tuple:
    cache = _make_cache()
    fq = FluctuationQuery(args.N, args.L)
    q = _parse_q(args.q, args.float)
    dist = fluctuation_distribution(fq, cache)
    rows = []
    for l, prob in sorted(dist.items()):
        p = prob.evaluate(q)
        tail = TailBound(q, fq.L, abs(l)).value if l != 0 else None
        rows.append(
            {
                "l": l,
                "probability": str(p) if isinstance(p, Fraction) else p,
                "probability_float": float(p),
                "tail_bound": tail,
            }
        )
    result = {
        "sector": [fq.sector.n, fq.sector.m],
        "window": list(fq.window),
        "distribution": rows,
    }
    config = {"N": args.N, "L": args.L, "q": args.q}
    q_mode = "float" if args.float else "exact"
    table = (
        ["l", "probability", "probability_float", "tail_bound"],
        [[r["l"], r["probability"], r["probability_float"], r["tail_bound"]] for r in rows],
    )
    return 0, _envelope("fluctuations", config, q_mode, result), table


def _run_sample(args) -> tuple:
    cache = _make_cache()
    q = _parse_q(args.q, False)
    sampler = PathSampler(args.n, args.m, q, args.seed, cache)
    lines = [sampler.draw().to_text() for _ in range(args.count)]
    config = {"n": args.n, "m": args.m, "q": args.q, "count": args.count, "seed": args.seed}
    return 0, _envelope("sample", config, "exact", {"paths": lines}), None


def cmd_sample(args) -> int:
    code, envelope, _ = _run_sample(args)
    if getattr(args, "format", "text") == "json":
        print(json.dumps(envelope, sort_keys=True, indent=2))
    else:
        for line in envelope["result"]["paths"]:
            print(line)
    return code


def _run_reduce2d(args) -> tuple:
    cache = _make_cache()
    ks = list(range(args.N * args.M + 1)) if args.all else [args.k]
    terms = []
    all_match = True
    product = z2d_product(args.N, args.M) if args.check else None
    for k in ks:
        poly = z2d_reduction(args.N, args.M, k, cache)
        entry = {"k": k, "polynomial": poly.to_json_obj()}
        if args.check:
            entry["compositions"] = [list(c) for c in compositions(args.N, args.M, k)]
            entry["routes_agree"] = poly == product[k] == z2d_oracle(args.N, args.M, k)
            all_match = all_match and entry["routes_agree"]
        terms.append(entry)
    result = {"terms": terms}
    if args.check:
        result["check_passed"] = all_match
    config = {"N": args.N, "M": args.M, "k": args.k, "all": args.all, "check": args.check}
    header = ["k", "exponent", "coefficient"]
    rows = [[t["k"], e, c] for t in terms for e, c in t["polynomial"]]
    code = 0 if all_match else 1
    return code, _envelope("reduce2d", config, None, result), (header, rows)


def cmd_verify(args) -> int:
    cache = _make_cache()
    q_grid = [Fraction(tok) for tok in args.q_grid.split(",")]
    report = run_suites(
        [args.suite],
        max_nm=args.max_nm,
        enumeration_limit=args.enum_limit,
        random_instances=args.count,
        max_chain=args.max_chain,
        q_grid=q_grid,
        seed=args.seed,
        cache=cache,
    )
    result = report.to_json_obj()
    config = {
        "suite": args.suite,
        "max_nm": args.max_nm,
        "enum_limit": args.enum_limit,
        "count": args.count,
        "max_chain": args.max_chain,
        "q_grid": args.q_grid,
        "seed": args.seed,
    }
    header = ["name", "instances", "failure_count", "informational", "passed"]
    rows = [
        [r["name"], r["instances"], r["failure_count"], r["informational"], r["failure_count"] == 0]
        for r in result["records"]
    ]
    _emit(args, _envelope("verify", config, "exact", result), (header, rows))
    return 0 if report.passed else 1


def _make_emitting_command(run):
    def command(args) -> int:
        code, envelope, table = run(args)
        _emit(args, envelope, table)
        return code

    return command


cmd_partition = _make_emitting_command(_run_partition)
cmd_correlate = _make_emitting_command(_run_correlate)
cmd_fluctuations = _make_emitting_command(_run_fluctuations)
cmd_reduce2d = _make_emitting_command(_run_reduce2d)


# -- sweep runner ----------------------------------------------------------------


def _read_sweep_file(path: str) -> dict[str, list[str]]:
    grid: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, _, values = line.partition("=")
            if not _:
                raise ValueError(f"bad sweep line {raw!r}; expected 'flag = v1, v2'")
            grid[name.strip()] = [v.strip() for v in values.split(",") if v.strip()]
    if not grid:
        raise ValueError(f"sweep file {path} declares no flags")
    return grid


def _strip_token(tokens: list[str], flag: str) -> list[str]:
    out = []
    skip = False
    for tok in tokens:
        if skip:
            skip = False
            continue
        if tok == flag:
            skip = True
            continue
        if tok.startswith(flag + "="):
            continue
        out.append(tok)
    return out


def _run_sweep(parser: argparse.ArgumentParser, argv: list[str], args) -> int:
    grid = _read_sweep_file(args.sweep)
    base = _strip_token(_strip_token(list(argv), "--sweep"), "--jobs")
    names = list(grid)
    points = list(itertools.product(*(grid[name] for name in names)))

    def run_point(values: tuple[str, ...]) -> tuple[int, str]:
        tokens = list(base)
        for name, value in zip(names, values):
            tokens += [f"--{name}", value]
        point_args = parser.parse_args(tokens)
        code, envelope, _ = point_args.run(point_args)
        return code, json.dumps(envelope, sort_keys=True, separators=(",", ":")) + "\n"

    worst = 0
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        for code, line in pool.map(run_point, points):
            sys.stdout.write(line)
            worst = max(worst, code)
    return worst


# -- parser ------------------------------------------------------------------------


def _add_format(sub, choices=("json", "csv"), default="json"):
    sub.add_argument("--format", choices=list(choices), default=default)


def _add_sweep(sub):
    sub.add_argument("--sweep", metavar="FILE", help="sweep-grid config file")
    sub.add_argument("--jobs", type=int, default=1, help="concurrent sweep jobs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpaths",
        description="Exact partition functions, correlations and fluctuations "
        "of q-weighted monotone lattice paths.",
    )
    parser.add_argument("--version", action="version", version=f"qpaths {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("partition", help="canonical partition function Z(n, m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--closed", action="store_true", help="closed product form (default)")
    group.add_argument("--recursive", action="store_true", help="corner recursion")
    group.add_argument("--oracle", action="store_true", help="brute-force enumeration")
    p.add_argument("--eval", metavar="Q", help="also evaluate at q")
    p.add_argument("--float", action="store_true", help="treat Q as a float")
    p.add_argument("--cap", type=int, default=1_000_000, help="enumeration cap for --oracle")
    _add_format(p)
    _add_sweep(p)
    p.set_defaults(func=cmd_partition, run=_run_partition)

    p = subs.add_parser("correlate", help="joint spin probability and its bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sites", required=True, help="e.g. '3:down,4:up'")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--eval", metavar="Q", help="evaluate at a single q")
    group.add_argument("--exact", action="store_true", help="exact output, checks on the default q grid (default)")
    p.add_argument("--float", action="store_true", help="treat Q as a float")
    _add_format(p)
    _add_sweep(p)
    p.set_defaults(func=cmd_correlate, run=_run_correlate)

    p = subs.add_parser("fluctuations", help="window spin distribution with tail bounds")
    p.add_argument("--N", type=int, required=True, help="even chain length")
    p.add_argument("--L", type=int, required=True, help="even centered window length")
    p.add_argument("--q", required=True)
    p.add_argument("--float", action="store_true", help="treat q as a float")
    _add_format(p)
    _add_sweep(p)
    p.set_defaults(func=cmd_fluctuations, run=_run_fluctuations)

    p = subs.add_parser("sample", help="exact path samples, one text line each")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", required=True, help="exact rational in (0,1)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    _add_format(p, choices=("text", "json"), default="text")
    _add_sweep(p)
    p.set_defaults(func=cmd_sample, run=_run_sample)

    p = subs.add_parser("reduce2d", help="two-dimensional partition functions")
    p.add_argument("--N", type=int, required=True, help="sites per diagonal")
    p.add_argument("--M", type=int, required=True, help="number of diagonals")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="total down spins")
    group.add_argument("--all", action="store_true", help="every k from 0 to N*M")
    p.add_argument("--check", action="store_true", help="cross-check all three computation routes")
    _add_format(p)
    _add_sweep(p)
    p.set_defaults(func=cmd_reduce2d, run=_run_reduce2d)

    p = subs.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["identities", "bounds", "fluctuations", "all"])
    p.add_argument("--max-nm", type=int, default=12, dest="max_nm")
    p.add_argument("--enum-limit", type=int, default=8, dest="enum_limit")
    p.add_argument("--count", type=int, default=100, help="randomized instances per identity")
    p.add_argument("--max-chain", type=int, default=8, dest="max_chain")
    p.add_argument("--q-grid", default="1/5,1/2,4/5", dest="q_grid")
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "sweep", None):
            return _run_sweep(parser, argv, args)
        return args.func(args)
    except (DomainError, RangeError, CapExceeded, InconsistentQuery, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
