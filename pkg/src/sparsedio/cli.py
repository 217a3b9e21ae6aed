"""Command-line front end.

Instance files are JSON: ``{"d": 1, "generators": [[4], [6], [15]]}``.
Exit status: 0 on success, 1 for a domain outcome (non-member, invalid
solution), 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, period, solver, sparsify
from .instance import Instance, Solution, as_rhs


class UsageError(Exception):
    pass


class DomainOutcome(Exception):
    """Carries a JSON payload to print before exiting with status 1."""

    def __init__(self, payload):
        super().__init__(payload)
        self.payload = payload


def load_instance(path: str) -> Instance:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read instance {path}: {exc}") from exc
    if not isinstance(raw, dict) or "d" not in raw or "generators" not in raw:
        raise UsageError("instance must be an object with keys 'd' and 'generators'")
    d, gens = raw["d"], raw["generators"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise UsageError("'d' must be a positive integer")
    if not isinstance(gens, list) or not gens:
        raise UsageError("'generators' must be a nonempty list")
    for g in gens:
        if not isinstance(g, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in g):
            raise UsageError(f"generator {g!r} is not a list of integers")
    try:
        return Instance(d, tuple(tuple(g) for g in gens))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse integer vector {text!r}") from exc


def ratio(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _need(cond: bool, message: str):
    if not cond:
        raise UsageError(message)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_bounds(args):
    x = load_instance(args.instance)
    rep = bounds.bounds_report(x)
    _emit({
        "rank_height": rep.rank_height_bound,
        "norm": rep.norm_bound,
        "knapsack": rep.knapsack_bound,
        "eisenbrand_shmonin": rep.es_bound,
        "sinc_threshold": None if rep.sinc_threshold is None else ratio(rep.sinc_threshold),
        "r": rep.rank,
        "h_squared": ratio(rep.h_squared),
        "max_norm": rep.max_norm,
    })


def _solver_instance(args) -> Instance:
    x = load_instance(args.instance)
    _need(x.is_nonnegative(), "solver commands need componentwise non-negative generators")
    return x


def _rhs(x: Instance, text: str) -> tuple[int, ...]:
    try:
        b = as_rhs(x, parse_vector(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _need(all(c >= 0 for c in b), "right-hand side must be non-negative")
    return b


def cmd_m0(args):
    x = _solver_instance(args)
    b = _rhs(x, args.rhs)
    sol = solver.min_support_solution(x, b)
    if sol is None:
        raise DomainOutcome({"member": False, "m0": None, "witness": None})
    _emit({"member": True, "m0": sol.size, "witness": list(sol.coeffs)})


def cmd_sweep(args):
    x = load_instance(args.instance)
    _need(x.is_knapsack(), "sweep needs d = 1 with positive generators")
    _need(args.max >= 0, "--max must be non-negative")
    res = solver.m0_sweep(x, args.max, workers=args.threads)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["b", "m0"])
        for b in range(args.max + 1):
            v = res.values[b]
            writer.writerow([b, "" if v is None else v])
    finally:
        if out is not sys.stdout:
            out.close()


def _knapsack(args) -> Instance:
    x = load_instance(args.instance)
    _need(x.is_knapsack(), "this command needs d = 1 with positive generators")
    return x


def cmd_period(args):
    x = _knapsack(args)
    rep = period.period_report(x, args.window)
    _emit({
        "L": rep.L,
        "N0_period": rep.N0_period,
        "verified_window": list(rep.verified_window),
        "verified": rep.verified,
        "first_violation": rep.first_violation,
        "minimal_period_observed": rep.minimal_period_observed,
        "eventual_bound_m": rep.eventual_bound_m,
        "N0_bound": rep.N0_bound,
        "M0_exact": rep.M0_exact,
        "M0_argmax": list(rep.M0_argmax),
    })


def _frob_json(f: period.FrobeniusData, vals) -> dict:
    return {
        "subset": [vals[i] for i in f.subset],
        "g": f.g,
        "frobenius": f.frobenius,
    }


def cmd_frobenius(args):
    x = _knapsack(args)
    vals = x.values
    out = {"set": _frob_json(period.frobenius(vals), vals)}
    if args.subsets:
        out["subsets"] = [_frob_json(f, vals) for f in period.subset_frobenius(x)]
        out["N0"] = period.n0_threshold(x)
    _emit(out)


def cmd_sparsify(args):
    x = load_instance(args.instance)
    b = as_rhs(x, parse_vector(args.rhs)) if args.rhs else None
    if args.find:
        _need(b is not None, "--find needs --rhs")
        _need(x.is_nonnegative() and all(c >= 0 for c in b), "--find needs non-negative data")
        ok, sol = solver.is_member(x, b)
        if not ok:
            raise DomainOutcome({"error": "right-hand side is not in the semigroup"})
    else:
        _need(args.solution is not None, "give --solution or --find")
        coeffs = parse_vector(args.solution)
        if len(coeffs) != x.t or any(c < 0 for c in coeffs):
            raise DomainOutcome({"error": "solution must have one non-negative entry per generator"})
        sol = Solution(coeffs)
        if b is not None and sol.rhs(x) != b:
            raise DomainOutcome({"error": f"solution sums to {list(sol.rhs(x))}, not {list(b)}"})
    if x.is_knapsack():
        method = "knapsack"
        final, trace = sparsify.knapsack_sparsify(x, sol)
        guarantee = bounds.bound_knapsack_positive(x)
    else:
        method = "siegel"
        final, trace = sparsify.sparsify(x, sol)
        guarantee = bounds.bound_rank_height(x)
    _emit({
        "method": method,
        "rhs": list(sol.rhs(x)),
        "initial": list(trace.initial.coeffs),
        "final": list(final.coeffs),
        "final_support": list(final.support),
        "guarantee": guarantee,
        "steps": [
            {"kernel": list(s.kernel), "step": s.step, "zeroed": list(s.zeroed)}
            for s in trace.steps
        ],
    })


def cmd_dilate(args):
    x = _solver_instance(args)
    b = _rhs(x, args.rhs)
    ok, _ = solver.is_member(x, b)
    if not ok:
        raise DomainOutcome({"error": "right-hand side is not in the semigroup"})
    res = solver.dilation_sequence(x, b, args.lambda_max)
    per = res.observed_period
    _emit({
        "rhs": list(b),
        "values": [res.values[k] for k in range(1, args.lambda_max + 1)],
        "observed_period": None if per is None else {"start": per[0], "period": per[1]},
    })


def cmd_sumdistinct(args):
    x = _knapsack(args)
    _need(len(set(x.values)) == x.t, "generators must be distinct")
    res = bounds.sum_distinct_check(x)
    thr = bounds.sinc_reduction_threshold(x)
    _emit({
        "is_sum_distinct": res.is_sum_distinct,
        "lower_bound_ok": res.lower_bound_ok,
        "kernel": None if res.kernel is None else list(res.kernel),
        "sinc_bound": ratio(thr.bound),
        "reduction_condition": thr.holds,
    })


def cmd_conjecture(args):
    """Report M0 - floor(log2 max) for a knapsack; an experiment, nothing asserted."""
    x = _knapsack(args)
    top = period.M0_knapsack_exact(x)
    base = max(x.values).bit_length() - 1
    _emit({"M0": top.value, "floor_log2_max": base, "excess": top.value - base})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparsedio", description="Sparse non-negative integer solutions of Ax = b.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("instance", help="JSON instance file")
        sp.set_defaults(func=func)
        return sp

    add("bounds", cmd_bounds, "upper bounds on M0(X)")
    sp = add("m0", cmd_m0, "minimal support for one right-hand side")
    sp.add_argument("--rhs", required=True)
    sp = add("sweep", cmd_sweep, "CSV of m0(b) for b = 0..MAX")
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int, default=1)
    sp = add("period", cmd_period, "periodicity report for a knapsack")
    sp.add_argument("--window", type=int)
    sp = add("frobenius", cmd_frobenius, "Frobenius data")
    sp.add_argument("--subsets", action="store_true")
    sp = add("sparsify", cmd_sparsify, "constructive support reduction")
    sp.add_argument("--rhs")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--solution")
    group.add_argument("--find", action="store_true")
    sp = add("dilate", cmd_dilate, "m0 along dilations of b")
    sp.add_argument("--rhs", required=True)
    sp.add_argument("--lambda-max", type=int, default=60)
    add("sumdistinct", cmd_sumdistinct, "sum-distinct check")
    add("conjecture", cmd_conjecture, "M0 against floor(log2 max(X))")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainOutcome as exc:
        _emit(exc.payload)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
