"""Command-line entry points: solve, verify, bounds-compare and bench.

Every flag default can be overridden with an environment variable named
``KDEFECT_<FLAG>`` (for example ``KDEFECT_TIME_LIMIT=60``); explicit flags
win over the environment.

Exit codes: 0 solved, 2 out of time, 3 verification or bench mismatch,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .bounds import BOUND_NAMES
from .graph import Graph, ParseError, load_graph
from .model import ValidationError, check_solution
from .oracle import DEFAULT_LIMITS, brute_max_kdc
from .solver import DEFAULT_TIME_LIMIT, SolveReport, solve

log = logging.getLogger("kdefect")

EXIT_OK = 0
EXIT_OOT = 2
EXIT_MISMATCH = 3
EXIT_USAGE = 64

BOUND_CHOICES = (*BOUND_NAMES, "none")
MODES = ("solve", "verify", "bounds-compare", "bench")
DATA_DIR = Path(__file__).with_name("data")
DATASET_SUFFIXES = ("", ".mtx", ".mtx.gz", ".edges", ".txt", ".txt.gz", ".gz")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    mode: str = "solve"
    graph: str | None = None
    k: int = 1
    bound: str = "pcc"
    time_limit: float = DEFAULT_TIME_LIMIT
    seed: int = 42
    format: str = "json"
    instances: int = 1000
    manifest: str | None = None
    data_dir: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.k < 0:
            raise UsageError("k must be non-negative")
        if self.time_limit <= 0:
            raise UsageError("time limit must be positive")
        if self.bound not in BOUND_CHOICES:
            raise UsageError(f"bound must be one of {', '.join(BOUND_CHOICES)}")
        if self.format not in ("json", "tsv"):
            raise UsageError("format must be json or tsv")


@dataclass
class BenchRow:
    graph: str
    k: int
    opt: int | str
    nodes_k: float
    time_s: float
    bound: str
    status: str
    expected: int | str = "?"
    match: bool | None = None

    @classmethod
    def from_report(cls, graph: str, rep: SolveReport, expected: int | str = "?") -> "BenchRow":
        sol = rep.solution
        opt: int | str = sol.size if sol else "no"
        if rep.status == "OOT":
            opt = f">={rep.size}"
        match = None
        if expected != "?" and rep.status == "solved":
            match = opt == expected
        return cls(graph, rep.k, opt, round(rep.stats.nodes / 1000, 3),
                   round(rep.stats.wall_time, 3), rep.bound, rep.status, expected, match)

    def tsv(self) -> list:
        return [self.graph, self.k, self.opt, self.nodes_k, self.time_s, self.bound, self.status]


TSV_HEADER = ["graph", "k", "opt", "nodes_1e3", "time_s", "bound", "status"]


def _env(name: str, default, cast=str):
    raw = os.environ.get(f"KDEFECT_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise UsageError(f"bad value for KDEFECT_{name}: {raw!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--graph", default=_env("GRAPH", None), help="edge list or .mtx file")
    common.add_argument("--k", type=int, default=_env("K", 1, int))
    common.add_argument("--bound", choices=BOUND_CHOICES, default=_env("BOUND", "pcc"))
    common.add_argument("--time-limit", type=float,
                        default=_env("TIME_LIMIT", DEFAULT_TIME_LIMIT, float), help="seconds")
    common.add_argument("--format", choices=("json", "tsv"), default=_env("FORMAT", "json"))
    common.add_argument("--seed", type=int, default=_env("SEED", 42, int))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="kdefect", description="Exact maximum k-defective clique solver.")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="solve one graph")
    sub.add_parser("verify", parents=[common],
                   help="solve and check the answer (against brute force when small)")
    bc = sub.add_parser("bounds-compare", parents=[common],
                        help="run every bound on one graph, or the random dominance suite")
    bc.add_argument("--instances", type=int, default=_env("INSTANCES", 1000, int))
    bench = sub.add_parser("bench", parents=[common], help="run a manifest of expected optima")
    bench.add_argument("manifest", nargs="?", default=str(DATA_DIR / "reference_optima.tsv"))
    bench.add_argument("--data-dir", default=_env("DATA", None),
                       help="where dataset files live (default: next to the manifest)")
    bench.add_argument("--jobs", type=int, default=_env("JOBS", 1, int),
                       help="run rows in parallel worker processes")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(mode=ns.mode, graph=ns.graph, k=ns.k, bound=ns.bound,
                     time_limit=ns.time_limit, seed=ns.seed, format=ns.format,
                     instances=getattr(ns, "instances", 1000),
                     manifest=getattr(ns, "manifest", None),
                     data_dir=getattr(ns, "data_dir", None), jobs=getattr(ns, "jobs", 1))


def _load(path: str | None) -> Graph:
    if not path:
        raise UsageError("--graph is required")
    try:
        return load_graph(path)
    except (OSError, ParseError) as exc:
        raise UsageError(f"cannot read graph {path}: {exc}") from exc


def solve_record(graph_name: str, rep: SolveReport) -> dict:
    sol = rep.solution
    return {
        "graph": graph_name, "n": rep.n, "m": rep.m, "degeneracy": rep.degeneracy,
        "k": rep.k, "opt": sol.size if sol else "no", "nontrivial": sol is not None,
        "nodes": rep.stats.nodes, "bound_prunes": rep.stats.bound_prunes,
        "mc_calls": rep.stats.mc_calls, "time_ms": round(rep.stats.wall_time * 1000, 3),
        "bound": rep.bound, "status": rep.status,
    }


def run_solve(cfg: RunConfig) -> tuple[dict, int]:
    g = _load(cfg.graph)
    rep = solve(g, cfg.k, cfg.bound, cfg.time_limit)
    rec = solve_record(Path(cfg.graph).name, rep)
    return rec, EXIT_OK if rep.status == "solved" else EXIT_OOT


def run_verify(cfg: RunConfig) -> tuple[dict, int]:
    """Solve, re-check the returned set, and compare with brute force when feasible."""
    g = _load(cfg.graph)
    rep = solve(g, cfg.k, cfg.bound, cfg.time_limit)
    rec = solve_record(Path(cfg.graph).name, rep)
    ok = True
    if rep.best is not None:
        try:
            check_solution(g, rep.best.vertices, cfg.k)
        except ValidationError as exc:
            log.error("returned set is invalid: %s", exc)
            ok = False
    if ok and g.n <= DEFAULT_LIMITS.max_n and rep.status == "solved":
        ref = brute_max_kdc(g, cfg.k)
        expect = ref.size if ref.size >= cfg.k + 2 else "no"
        rec["reference_opt"] = expect
        ok = expect == rec["opt"]
    rec["verified"] = ok
    if not ok:
        return rec, EXIT_MISMATCH
    return rec, EXIT_OK if rep.status == "solved" else EXIT_OOT


def run_bounds_compare(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.graph:
        g = _load(cfg.graph)
        name = Path(cfg.graph).name
        rows = [BenchRow.from_report(name, solve(g, cfg.k, b, cfg.time_limit))
                for b in BOUND_CHOICES]
        code = EXIT_OK if all(r.status == "solved" for r in rows) else EXIT_OOT
        return {"rows": [asdict(r) for r in rows]}, code

    from .harness import dominance_suite
    s = dominance_suite(cfg.seed, cfg.instances)
    out = {
        "seed": cfg.seed, "instances": s.instances, "violations": s.total_violations,
        "by_relation": s.violations, "pcc_strictly_tighter": s.strict_pcc,
        "node_totals": s.nodes, "pcc_le_dp_node_share": round(s.node_share, 4),
    }
    return out, EXIT_OK if s.total_violations == 0 else EXIT_MISMATCH


def read_manifest(path: str | Path) -> list[tuple[str, int, int | str]]:
    """Rows of ``graph k expected``; ``expected`` is an int or ``"?"``."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise UsageError(f"{path}:{lineno}: expected 'graph k opt', got {line!r}")
            graph, k, exp = parts
            try:
                rows.append((graph, int(k), exp if exp == "?" else int(exp)))
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return rows


def resolve_dataset(name: str, roots: Sequence[Path]) -> Path | None:
    for root in roots:
        for suffix in DATASET_SUFFIXES:
            cand = root / f"{name}{suffix}"
            if cand.is_file():
                return cand
    return None


def _bench_one(args) -> BenchRow:
    path, name, k, expected, bound, time_limit = args
    rep = solve(load_graph(path), k, bound, time_limit)
    return BenchRow.from_report(name, rep, expected)


def run_bench(cfg: RunConfig) -> tuple[list[BenchRow], int]:
    manifest = Path(cfg.manifest or DATA_DIR / "reference_optima.tsv")
    try:
        rows = read_manifest(manifest)
    except OSError as exc:
        raise UsageError(f"cannot read manifest: {exc}") from exc
    roots = [Path(cfg.data_dir)] if cfg.data_dir else []
    roots.append(manifest.parent)
    jobs = []
    for name, k, expected in rows:
        path = resolve_dataset(name, roots)
        if path is None:
            log.warning("skipping %s k=%d: dataset not found", name, k)
            continue
        jobs.append((str(path), name, k, expected, cfg.bound, cfg.time_limit))

    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_bench_one, jobs))
    else:
        results = [_bench_one(j) for j in jobs]

    code = EXIT_OK
    for r in results:
        if r.match is False:
            log.error("%s k=%d: opt %s, expected %s", r.graph, r.k, r.opt, r.expected)
            code = EXIT_MISMATCH
        elif r.status == "OOT" and code == EXIT_OK:
            code = EXIT_OOT
    return results, code


def _emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        if isinstance(obj, list):
            obj = [asdict(r) for r in obj]
        json.dump(obj, out, indent=None if isinstance(obj, dict) else 1)
        out.write("\n")
        return
    w = csv.writer(out, delimiter="\t", lineterminator="\n")
    if isinstance(obj, list):
        w.writerow(TSV_HEADER)
        w.writerows(r.tsv() for r in obj)
    elif "rows" in obj:
        w.writerow(TSV_HEADER)
        w.writerows(BenchRow(**r).tsv() for r in obj["rows"])
    elif "instances" in obj:
        out.write(f"violations: {obj['violations']}\n")
        for rel, n in obj["by_relation"].items():
            out.write(f"{rel}\t{n}\n")
        w.writerow(["strategy", "nodes"])
        w.writerows(obj["node_totals"].items())
        out.write(f"pcc<=dp node share\t{obj['pcc_le_dp_node_share']}\n")
    else:
        w.writerow(list(obj))
        w.writerow(list(obj.values()))


RUNNERS = {"solve": run_solve, "verify": run_verify,
           "bounds-compare": run_bounds_compare, "bench": run_bench}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        parser = build_parser()
        try:
            ns = parser.parse_args(argv)
        except SystemExit as exc:
            return exc.code if isinstance(exc.code, int) else EXIT_USAGE
        logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        cfg = config_from_args(ns)
        result, code = RUNNERS[cfg.mode](cfg)
    except UsageError as exc:
        print(f"kdefect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(result, cfg.format, out)
    return code


def run_to_string(argv: Sequence[str]) -> tuple[int, str]:
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
