"""Command line driver.

Every operation is exposed as a subcommand that emits one report
payload: JSON with a fixed envelope {config, results, checks, version},
or the primary table as CSV, or a short text summary.  Payloads are
deterministic: randomized commands draw from counter-based Philox
streams keyed by (seed, trial index), worker pools merge results by
index, and nothing timestamped enters the output, so equal configs give
byte-identical reports at any --jobs value.

Exit codes: 0 all checks hold (and searches proved optimality), 1 a
checked inequality failed or a search exhausted its budget, 2 bad
arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .certificates import (
    InequalityReport,
    end_to_end_lower_bound,
    sphere_cover_report,
)
from .numtheory import sieve
from .productsets import (
    construct_interval_basis,
    exact_min_basis,
    icbrt,
    verify_cover,
)
from .reduction import (
    ReducedPair,
    factorial_divisibility_check,
    random_divisibility_instance,
    random_injected_pair,
    reduce_pair,
)
from .spherelab import (
    SMALL_SET_DIVISOR,
    TernaryVector,
    difference_census,
    enumerate_sphere,
    overlap_refined_trial,
    overlap_trial,
    sphere_basis_construct,
    sphere_cover_verify,
    sphere_min_basis,
)

__all__ = ["RunConfig", "run", "main", "main_entry", "rng_stream"]

_MASK64 = (1 << 64) - 1

_COLUMNS = {
    "primes": ["limit", "lo", "hi", "count", "primes"],
    "min-basis": ["M", "size", "optimal", "nodes", "basis"],
    "interval-basis": ["M", "size", "size_bound", "covered"],
    "mbp-search": ["a", "d", "size", "optimal", "is_best"],
    "reduce": [
        "M",
        "in_offset",
        "in_step",
        "out_g",
        "out_u",
        "out_v",
        "basis_size_in",
        "basis_size_out",
        "covered",
        "product_decreased",
    ],
    "factorial-check": ["u", "v", "M", "marked_count", "exceptional_count", "surviving_count", "divides"],
    "sphere-enumerate": ["n", "k", "index", "vector"],
    "sphere-cases": ["n", "case", "formula_count", "enumerated_count", "bound", "holds"],
    "sphere-min-basis": ["n", "size", "optimal", "nodes", "basis"],
    "sphere-construct": ["n", "size", "covered"],
    "sphere-overlap": ["trial", "n", "x_size", "y_size", "lhs", "bound", "holds", "hypotheses_ok", "n_large_enough"],
    "sphere-overlap-general": ["trial", "n", "a_size", "b_size", "lhs", "pair_bound", "linear_bound", "holds"],
    "sphere-certificate": ["name", "lhs", "rhs", "hypotheses_ok", "holds"],
    "pipeline-bound": [
        "M",
        "u",
        "g",
        "basis_size",
        "bound",
        "m1_size",
        "m2_size",
        "p1_size",
        "p2_size",
        "bprime_size",
        "tree_count",
        "sphere_size",
        "sphere_ran",
        "all_hold",
    ],
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict
    seed: int = 0
    jobs: int = 1
    output_format: str = "json"

    def __post_init__(self):
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    def to_record(self) -> dict:
        # jobs is execution plumbing and cannot influence results, so it is
        # left out of the provenance block: reports must be byte-identical
        # at every pool size.
        return {
            "command": self.command,
            "parameters": {k: self.parameters[k] for k in sorted(self.parameters)},
            "seed": self.seed,
            "format": self.output_format,
        }


def rng_stream(seed: int, stream: int) -> np.random.Generator:
    """Independent deterministic generator for one trial of one run."""
    return np.random.Generator(np.random.Philox(key=[seed & _MASK64, stream & _MASK64]))


def _indexed_map(fn, items, jobs: int) -> list:
    """Apply fn(index, item); results ordered by index whatever the pool does."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(i, x) for i, x in enumerate(items)]
    out = [None] * len(items)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = {pool.submit(fn, i, x): i for i, x in enumerate(items)}
        for fut in as_completed(futures):
            out[futures[fut]] = fut.result()
    return out


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt(v) for v in value)
    return str(value)


def _render(config: RunConfig, results: list[dict], checks: list[InequalityReport]) -> str:
    if config.output_format == "json":
        payload = {
            "config": config.to_record(),
            "results": results,
            "checks": [c.to_record() for c in checks],
            "version": __version__,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if config.output_format == "csv":
        if config.command in ("sphere-certificate",):
            columns = _COLUMNS["sphere-certificate"]
            rows = [c.to_record() for c in checks]
        else:
            columns = _COLUMNS[config.command]
            rows = results
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in columns])
        return buf.getvalue()
    lines = [f"# {config.command} seed={config.seed}"]
    for row in results:
        lines.append(" ".join(f"{k}={_fmt(v)}" for k, v in row.items()))
    for c in checks:
        mark = "ok" if c.holds else "FAIL"
        if not c.hypotheses_ok:
            mark += " (hypotheses not met)"
        lines.append(f"check {c.name}: lhs={_fmt(c.lhs)} rhs={_fmt(c.rhs)} {mark}")
    return "\n".join(lines) + "\n"


def _exit_code(checks: list[InequalityReport], proven: bool = True) -> int:
    if not proven:
        return 1
    if any(c.hypotheses_ok and not c.holds for c in checks):
        return 1
    return 0


def _vector_str(v) -> str:
    return "".join(str(c) for c in v.coords)


# ---------------------------------------------------------------- commands


def _cmd_primes(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    limit = p["limit"]
    lo = p.get("lo") or 2
    hi = p.get("hi") or limit
    table = sieve(limit)
    primes = [int(x) for x in table.primes_in(lo, hi)]
    row = {"limit": limit, "lo": lo, "hi": hi, "count": len(primes), "primes": primes}
    return [row], [], 0


def _cmd_min_basis(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    if p.get("interval") is not None:
        M = p["interval"]
        elements = list(range(1, M + 1))
    else:
        elements = sorted(set(p["elements"]))
        M = None
    budget = p.get("budget_nodes") or 2_000_000
    sol = exact_min_basis(elements, budget=budget)
    row = {
        "M": M,
        "size": sol.size,
        "optimal": sol.optimal,
        "nodes": sol.nodes_explored,
        "basis": list(sol.basis),
    }
    return [row], [], 0 if sol.optimal else 1


def _cmd_interval_basis(config: RunConfig) -> tuple[list, list, int]:
    M = config.parameters["m"]
    sol = construct_interval_basis(M)
    table = sieve(max(M, 4))
    two_thirds = icbrt(M * M)
    if two_thirds**3 < M * M:
        two_thirds += 1
    size_bound = two_thirds + table.prime_count(M) + 1
    cover = verify_cover(list(range(1, M + 1)), sol.basis)
    checks = [
        InequalityReport.of("interval_basis_size", sol.size, size_bound),
        InequalityReport.of("interval_cover_complete", 1 if cover.covered else 2, 1),
    ]
    row = {"M": M, "size": sol.size, "size_bound": size_bound, "covered": cover.covered}
    return [row], checks, _exit_code(checks)


def _cmd_mbp_search(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    M, a_max, d_max = p["m"], p["a_max"], p["d_max"]
    budget = p.get("budget_nodes") or 2_000_000
    grid = [(a, d) for a in range(0, a_max + 1) for d in range(1, d_max + 1)]

    def work(_, ad):
        a, d = ad
        elements = [a + m * d for m in range(1, M + 1)]
        sol = exact_min_basis(elements, budget=budget)
        return {"a": a, "d": d, "size": sol.size, "optimal": sol.optimal}

    rows = _indexed_map(work, grid, config.jobs)
    best = min(rows, key=lambda r: (r["size"], r["a"], r["d"]))
    for r in rows:
        r["is_best"] = r is best
    proven = all(r["optimal"] for r in rows)
    return rows, [], 0 if proven else 1


def _cmd_reduce(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    pairs: list[ReducedPair] = []
    if p.get("json_file"):
        with open(p["json_file"], "r", encoding="utf-8") as fh:
            rec = json.load(fh)
        pairs = [ReducedPair.from_record(rec)]
    else:
        count = p.get("random") or 1
        pairs = [random_injected_pair(rng_stream(config.seed, i)) for i in range(count)]

    def work(_, pair):
        before = math.prod(pair.basis)
        out = reduce_pair(pair)
        after = math.prod(out.basis)
        return {
            "M": pair.ap.M,
            "in_offset": pair.ap.offset,
            "in_step": pair.ap.step,
            "out_g": out.ap.g,
            "out_u": out.ap.u,
            "out_v": out.ap.v,
            "basis_size_in": len(pair.basis),
            "basis_size_out": len(out.basis),
            "covered": out.verify().covered,
            "product_decreased": after <= before,
        }

    rows = _indexed_map(work, pairs, config.jobs)
    ok = all(r["covered"] and r["product_decreased"] for r in rows)
    checks = [
        InequalityReport.of("reduce_all_covered", sum(1 for r in rows if not r["covered"]), 0),
    ]
    return rows, checks, 0 if ok else 1


def _cmd_factorial_check(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    if p.get("random"):
        instances = [
            random_divisibility_instance(rng_stream(config.seed, i)) for i in range(p["random"])
        ]
    else:
        instances = [(p["u"], p["v"], p["m"])]
    top = max(u + M * v for u, v, M in instances)
    table = sieve(max(top, 4))

    def work(_, inst):
        u, v, M = inst
        res = factorial_divisibility_check(u, v, M, table)
        return {
            "u": u,
            "v": v,
            "M": M,
            "marked_count": len(res.marked_large),
            "exceptional_count": len(res.exceptional),
            "surviving_count": len(res.surviving),
            "divides": res.divides,
        }

    rows = _indexed_map(work, instances, config.jobs)
    failed = sum(1 for r in rows if not r["divides"])
    checks = [InequalityReport.of("factorial_divisibility_failures", failed, 0)]
    return rows, checks, _exit_code(checks)


def _cmd_sphere_enumerate(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    n, k = p["n"], p.get("k") or 3
    rows = [
        {"n": n, "k": k, "index": i, "vector": _vector_str(v)}
        for i, v in enumerate(enumerate_sphere(n, k))
    ]
    return rows, [], 0


def _cmd_sphere_cases(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    census = difference_census(p["n"])
    wanted = p.get("case")
    rows = []
    for r in census.rows:
        label = r.case.value
        if wanted is not None and label != f"case{wanted}":
            continue
        rows.append(
            {
                "n": r.n,
                "case": label,
                "formula_count": r.formula_count,
                "enumerated_count": r.enumerated_count,
                "bound": r.bound,
                "holds": r.holds,
            }
        )
    checks = [
        InequalityReport.of("census_total_pairs", census.total_pairs, math.comb(p["n"], 3) ** 2),
        InequalityReport.of("census_unknown_cases", census.other_seen, 0),
        InequalityReport.of(
            "census_rows_hold", sum(1 for r in census.rows if not r.holds), 0
        ),
    ]
    return rows, checks, _exit_code(checks)


def _cmd_sphere_min_basis(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    budget = p.get("budget_nodes") or 5_000_000
    sol = sphere_min_basis(p["n"], budget=budget)
    row = {
        "n": p["n"],
        "size": sol.size,
        "optimal": sol.optimal,
        "nodes": sol.nodes_explored,
        "basis": [_vector_str(v) for v in sorted(sol.basis)],
    }
    return [row], [], 0 if sol.optimal else 1


def _cmd_sphere_construct(config: RunConfig) -> tuple[list, list, int]:
    n = config.parameters["n"]
    sol = sphere_basis_construct(n)
    check = sphere_cover_verify(sol.basis, n)
    checks = [
        InequalityReport.of("construct_size", sol.size, n * (n + 1) // 2),
        InequalityReport.of("construct_cover", 1 if check.covered else 2, 1),
    ]
    row = {"n": n, "size": sol.size, "covered": check.covered}
    return [row], checks, _exit_code(checks)


def _cmd_sphere_overlap(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    n, x_size, y_size = p["n"], p["x_size"], p["y_size"]
    trials = p.get("trials") or 1
    if SMALL_SET_DIVISOR * x_size > n:
        raise ValueError(
            f"x-size {x_size} cannot satisfy |X| <= n/{SMALL_SET_DIVISOR} at n={n}"
        )
    if 100 * y_size > n * n:
        raise ValueError(f"y-size {y_size} cannot satisfy |Y| <= n^2/100 at n={n}")

    def work(i, _):
        res = overlap_trial(n, x_size, y_size, rng_stream(config.seed, i))
        return {
            "trial": i,
            "n": res.n,
            "x_size": res.x_size,
            "y_size": res.y_size,
            "lhs": res.lhs,
            "bound": res.bound,
            "holds": res.holds,
            "hypotheses_ok": res.hypotheses_ok,
            "n_large_enough": res.n_large_enough,
        }

    rows = _indexed_map(work, range(trials), config.jobs)
    worst = max(r["lhs"] for r in rows)
    checks = [
        InequalityReport.of(
            "overlap_worst_trial", worst, n * n / 50.0, hypotheses_ok=n >= 2048
        )
    ]
    code = 1 if any(not r["holds"] for r in rows) else 0
    return rows, checks, code


def _cmd_sphere_overlap_general(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    n, a_size, b_size = p["n"], p["a_size"], p["b_size"]
    trials = p.get("trials") or 1
    if SMALL_SET_DIVISOR * a_size > n:
        raise ValueError(
            f"a-size {a_size} cannot satisfy |A| <= n/{SMALL_SET_DIVISOR} at n={n}"
        )

    def work(i, _):
        res = overlap_refined_trial(n, a_size, b_size, rng_stream(config.seed, i))
        return {
            "trial": i,
            "n": res.n,
            "a_size": res.a_size,
            "b_size": res.b_size,
            "lhs": res.lhs,
            "pair_bound": res.pair_bound,
            "linear_bound": res.linear_bound,
            "holds": res.holds,
        }

    rows = _indexed_map(work, range(trials), config.jobs)
    worst = max((r["lhs"] - r["pair_bound"] for r in rows), default=0)
    checks = [InequalityReport.of("overlap_general_worst_trial", worst, 0)]
    code = 1 if any(not r["holds"] for r in rows) else 0
    return rows, checks, code


def _read_vector_file(path: str, n: int):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if len(line) != n:
                raise ValueError(f"vector {line!r} does not have {n} coordinates")
            out.append([int(ch) for ch in line])
    return out


def _cmd_sphere_certificate(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    n = p["n"]
    if p.get("basis_file"):
        basis = [TernaryVector.from_coords(r) for r in _read_vector_file(p["basis_file"], n)]
    else:
        basis = sorted(sphere_basis_construct(n).basis)
    checks = sphere_cover_report(basis, n)
    row = {
        "n": n,
        "basis_size": len(set(basis)),
        "reports_hold": all(c.holds for c in checks if c.hypotheses_ok),
    }
    return [row], checks, _exit_code(checks)


def _cmd_pipeline_bound(config: RunConfig) -> tuple[list, list, int]:
    p = config.parameters
    M = p["m"]
    u = p.get("u") or 0
    g = p.get("g") or 1
    if p.get("basis_file"):
        with open(p["basis_file"], "r", encoding="utf-8") as fh:
            basis = [int(line) for line in fh if line.strip()]
    else:
        basis = construct_interval_basis(M).basis
    res = end_to_end_lower_bound(M, basis, u=u, g=g)
    checks = list(res.chain) + list(res.sphere_reports)
    row = {
        "M": res.M,
        "u": res.u,
        "g": res.g,
        "basis_size": res.basis_size,
        "bound": res.bound,
        "m1_size": res.m1_size,
        "m2_size": res.m2_size,
        "p1_size": res.p1_size,
        "p2_size": res.p2_size,
        "bprime_size": res.bprime_size,
        "tree_count": res.tree_count,
        "sphere_size": res.sphere_size,
        "sphere_ran": res.sphere_ran,
        "all_hold": res.all_hold,
    }
    return [row], checks, _exit_code(checks)


_DISPATCH = {
    "primes": _cmd_primes,
    "min-basis": _cmd_min_basis,
    "interval-basis": _cmd_interval_basis,
    "mbp-search": _cmd_mbp_search,
    "reduce": _cmd_reduce,
    "factorial-check": _cmd_factorial_check,
    "sphere-enumerate": _cmd_sphere_enumerate,
    "sphere-cases": _cmd_sphere_cases,
    "sphere-min-basis": _cmd_sphere_min_basis,
    "sphere-construct": _cmd_sphere_construct,
    "sphere-overlap": _cmd_sphere_overlap,
    "sphere-overlap-general": _cmd_sphere_overlap_general,
    "sphere-certificate": _cmd_sphere_certificate,
    "pipeline-bound": _cmd_pipeline_bound,
}


def run(config: RunConfig, out=None) -> int:
    """Execute one configured command, write its report, return the exit code."""
    if config.command not in _DISPATCH:
        raise ValueError(f"unknown command {config.command!r}")
    results, checks, code = _DISPATCH[config.command](config)
    text = _render(config, results, checks)
    (out or sys.stdout).write(text)
    if config.parameters.get("out"):
        with open(config.parameters["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mulbasis",
        description="Multiplicative-basis experiments: exact searches, reductions, sphere covers, certified bounds.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="seed for all randomized draws")
        sp.add_argument("--jobs", type=int, default=1, help="worker pool size")
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--out", type=str, default=None, help="also write the report to FILE")

    sp = sub.add_parser("primes", help="list primes up to a limit")
    sp.add_argument("--limit", type=int, required=True)
    sp.add_argument("--lo", type=int, default=None)
    sp.add_argument("--hi", type=int, default=None)
    common(sp)

    sp = sub.add_parser("min-basis", help="exact smallest multiplicative basis")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--interval", type=int, help="target set [1..M]")
    group.add_argument("--elements", type=str, help="comma-separated targets")
    sp.add_argument("--budget-nodes", type=int, default=None)
    common(sp)

    sp = sub.add_parser("interval-basis", help="explicit small basis for [1..M]")
    sp.add_argument("--m", type=int, required=True)
    common(sp)

    sp = sub.add_parser("mbp-search", help="exact minima over a grid of progressions")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--a-max", type=int, required=True)
    sp.add_argument("--d-max", type=int, required=True)
    sp.add_argument("--budget-nodes", type=int, default=None)
    common(sp)

    sp = sub.add_parser("reduce", help="normal-form reduction of covered progressions")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--json-file", type=str, help="pair record to reduce")
    group.add_argument("--random", type=int, help="number of seeded instances")
    common(sp)

    sp = sub.add_parser("factorial-check", help="surviving-term product divides (M-1)!")
    sp.add_argument("--u", type=int)
    sp.add_argument("--v", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--random", type=int, help="number of seeded instances")
    common(sp)

    sp = sub.add_parser("sphere-enumerate", help="weight-k 0-1 vectors in support order")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=3)
    common(sp)

    sp = sub.add_parser("sphere-cases", help="difference census against the closed formulas")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--case", type=int, choices=[1, 2, 3], default=None)
    common(sp)

    sp = sub.add_parser("sphere-min-basis", help="exact smallest additive cover of the 3-sphere")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget-nodes", type=int, default=None)
    common(sp)

    sp = sub.add_parser("sphere-construct", help="weight-1 plus weight-2 cover")
    sp.add_argument("--n", type=int, required=True)
    common(sp)

    sp = sub.add_parser("sphere-overlap", help="seeded fixed-fraction overlap trials")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--x-size", type=int, required=True)
    sp.add_argument("--y-size", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1)
    common(sp)

    sp = sub.add_parser("sphere-overlap-general", help="seeded pair-count overlap trials")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a-size", type=int, required=True)
    sp.add_argument("--b-size", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1)
    common(sp)

    sp = sub.add_parser("sphere-certificate", help="degree-counting inequality reports")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--basis-file", type=str, default=None, help="one 0/1/2 string per line")
    common(sp)

    sp = sub.add_parser("pipeline-bound", help="end-to-end certified lower bound")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--u", type=int, default=0)
    sp.add_argument("--g", type=int, default=1)
    sp.add_argument("--basis-file", type=str, default=None, help="one integer per line")
    common(sp)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "seed", "jobs", "format"}
    params = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if "elements" in params:
        params["elements"] = [int(x) for x in str(params["elements"]).split(",") if x.strip()]
    return RunConfig(
        command=args.command,
        parameters=params,
        seed=args.seed,
        jobs=args.jobs,
        output_format=args.format,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "factorial-check":
        have_explicit = args.u is not None and args.v is not None and args.m is not None
        if not have_explicit and args.random is None:
            parser.error("factorial-check needs either --u/--v/--m or --random")
    try:
        config = _config_from_args(args)
        return run(config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
