"""Command-line front end.

Exit codes: 0 feasible / verified, 1 infeasible or FAIL, 2 error,
3 a size cap was exceeded (raise it with EQUISCHED_CAP).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import io
from .approx import StarInstance, approx_essd_star
from .core import CapExceeded, Instance, InstanceError, Solution, Variant, verify_solution
from .essd import build_essd_ilp, solve_essd_dp_clients, solve_essd_dp_days, solve_essd_ilp
from .espc import build_espc_ilp, solve_espc
from .ip import export_lp
from .matching import solve_esup
from .oracle import brute_force_decide, brute_force_max_k
from .reductions import (
    BinPacking,
    GeneratorSpec,
    Graph,
    NaeFormula,
    ReductionError,
    expand_to_espc_star,
    generate_random,
    reduce_bin_packing,
    reduce_clique,
    reduce_independent_set,
    reduce_nae_sat,
    shorten_paths,
)

EXIT_OK, EXIT_NO, EXIT_ERROR, EXIT_CAP = 0, 1, 2, 3

ALGORITHMS = ("auto", "matching", "dp-days", "dp-clients", "ilp", "espc-ilp", "approx", "oracle")
CSV_COLUMNS = ("instance", "algorithm", "k", "result", "k_prime", "millis", "seed")


class VerificationError(RuntimeError):
    """A solver claimed feasibility but its schedule does not verify."""


@dataclass
class RunRecord:
    instance: str
    algorithm: str
    k: int
    result: str  # feasible, infeasible, FAIL, cap, error
    k_prime: int | None
    millis: float
    seed: int | None = None
    solution: Solution | None = None
    reason: str | None = None

    def row(self) -> dict:
        return {
            "instance": self.instance,
            "algorithm": self.algorithm,
            "k": self.k,
            "result": self.result,
            "k_prime": "" if self.k_prime is None else self.k_prime,
            "millis": f"{self.millis:.3f}",
            "seed": "" if self.seed is None else self.seed,
        }


def pick_algorithm(instance: Instance, approx_ok: bool = False) -> str:
    if instance.variant is Variant.ESUP:
        return "matching"
    if instance.variant is Variant.ESPC:
        return "espc-ilp"
    if instance.variant is Variant.ESSD:
        if instance.starred and approx_ok:
            return "approx"
        days_table = math.prod(day.common_deadline + 1 for day in instance.days) * (instance.n + 1)
        clients_table = (instance.k + 1) ** instance.n * (instance.m + 1)
        return "dp-days" if days_table <= clients_table else "dp-clients"
    return "oracle"


_SOLVERS = {
    "matching": solve_esup,
    "dp-days": solve_essd_dp_days,
    "dp-clients": solve_essd_dp_clients,
    "ilp": solve_essd_ilp,
    "espc-ilp": solve_espc,
    "oracle": brute_force_decide,
}


def run_algorithm(instance: Instance, algorithm: str, label: str = "-", seed: int | None = None,
                  approx_ok: bool = False) -> RunRecord:
    """Run one solver and re-verify any schedule it returns."""
    if algorithm == "auto":
        algorithm = pick_algorithm(instance, approx_ok)
    start = time.perf_counter()
    k_prime = instance.k
    reason = None
    if algorithm == "approx":
        result = approx_essd_star(StarInstance.from_instance(instance))
        solution, k_prime, reason = result.solution, result.k_prime, result.reason
    elif algorithm in _SOLVERS:
        solution = _SOLVERS[algorithm](instance)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    millis = (time.perf_counter() - start) * 1000
    if solution is not None:
        report = verify_solution(instance, solution)
        if not (report.valid and report.min_count >= k_prime):
            raise VerificationError(f"{algorithm} returned a schedule that fails verification: {report}")
        status = "feasible"
    else:
        status = "FAIL" if algorithm == "approx" else "infeasible"
    return RunRecord(label, algorithm, instance.k, status, k_prime, millis, seed, solution, reason)


def _load(path: str, k: int | None) -> Instance:
    instance = io.read_instance(path)
    return instance if k is None else instance.with_k(k)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report_lines(instance: Instance, solution: Solution, k: int) -> list[str]:
    report = verify_solution(instance, solution)
    return [
        f"counts: {' '.join(map(str, report.counts))}",
        f"min_count: {report.min_count}",
        f"k_equitable: {str(report.valid and report.min_count >= k).lower()} (k={k})",
    ]


def cmd_solve(args) -> int:
    instance = _load(args.instance, args.k)
    algorithm = args.algorithm
    if algorithm == "auto":
        algorithm = pick_algorithm(instance, args.approx_ok)
    if args.export_lp:
        model = _build_model(instance)
        Path(args.export_lp).write_text(export_lp(model), encoding="utf-8")
    record = run_algorithm(instance, algorithm, args.instance, approx_ok=args.approx_ok)
    print(f"algorithm: {record.algorithm}")
    print(f"result: {record.result}")
    if record.algorithm == "approx":
        print(f"k_prime: {record.k_prime}")
        if record.reason:
            print(f"reason: {record.reason}")
    print(f"millis: {record.millis:.3f}")
    if record.solution is None:
        return EXIT_NO
    for line in _report_lines(instance, record.solution, record.k_prime):
        print(line)
    text = io.dumps(io.solution_to_dict(record.solution))
    if args.out:
        _emit(text, args.out)
    else:
        print("solution: " + json.dumps(io.solution_to_dict(record.solution)))
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = _load(args.instance, args.k)
    solution = io.read_solution(args.solution)
    report = verify_solution(instance, solution)
    for line in _report_lines(instance, solution, instance.k):
        print(line)
    if report.invalid_days:
        print(f"unrealizable days: {' '.join(str(j + 1) for j in report.invalid_days)}")
    return EXIT_OK if report.k_equitable else EXIT_NO


def _spec_from_args(args) -> GeneratorSpec:
    return GeneratorSpec(
        variant=Variant(args.variant),
        n=args.n,
        m=args.m,
        k=args.k,
        p_max=args.p_max,
        d_min=args.d_min,
        d_max=args.d_max,
        starred=args.starred,
        release_max=args.release_max,
        machines=args.machines,
        max_paths=args.max_paths,
        max_path_length=args.max_path_length,
        arc_clients=args.arc_clients,
    )


def cmd_generate(args) -> int:
    instance = generate_random(_spec_from_args(args), args.seed)
    _emit(io.dumps(io.instance_to_dict(instance)), args.out)
    return EXIT_OK


# --- reduce: source file formats ---------------------------------------------

def read_dimacs_graph(text: str) -> Graph:
    """``p edge N M`` header and ``e u v`` lines, 1-based; ``c`` lines are comments."""
    n = None
    edges = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise ReductionError(f"unexpected graph line {line!r}")
    if n is None:
        raise ReductionError("graph file lacks a 'p edge' header")
    return Graph(n, tuple(edges))


def read_items(text: str) -> BinPacking:
    """Whitespace-separated integers: bin count, capacity, then item sizes."""
    numbers = [int(x) for line in text.splitlines() if not line.lstrip().startswith("#") for x in line.split()]
    if len(numbers) < 2:
        raise ReductionError("items file needs bin count and capacity")
    return BinPacking(tuple(numbers[2:]), numbers[0], numbers[1])


def read_nae_cnf(text: str) -> NaeFormula:
    """DIMACS CNF restricted to positive literals, each clause ended by 0."""
    n_vars = None
    clauses = []
    current: list[int] = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n_vars = int(parts[2])
            continue
        for tok in parts:
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif lit < 0:
                raise ReductionError("NAE formulas must be monotone (no negated literals)")
            else:
                current.append(lit - 1)
    if current:
        raise ReductionError("last clause is not terminated by 0")
    if n_vars is None:
        raise ReductionError("CNF file lacks a 'p cnf' header")
    return NaeFormula(n_vars, tuple(clauses))


def cmd_reduce(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    source = args.source
    if source == "independent-set":
        if args.ell is None:
            raise ValueError("--ell is required")
        cert = reduce_independent_set(read_dimacs_graph(text), args.ell)
    elif source == "clique":
        if args.h is None:
            raise ValueError("--h is required")
        cert = reduce_clique(read_dimacs_graph(text), args.h)
    elif source == "bin-packing":
        cert = reduce_bin_packing(read_items(text))
    elif source == "nae-sat":
        cert = reduce_nae_sat(read_nae_cnf(text))
    elif source == "espc-star":
        cert = expand_to_espc_star(io.instance_from_dict(json.loads(text)))
    else:
        cert = shorten_paths(io.instance_from_dict(json.loads(text)))
    _emit(io.dumps(io.instance_to_dict(cert.instance)), args.out)
    sidecar = {
        "kind": cert.kind,
        "degenerate": cert.degenerate,
        "added_days": [j + 1 for j in cert.added_days],
        "source_file": str(args.input),
    }
    if args.out:
        Path(str(args.out) + ".cert.json").write_text(io.dumps(sidecar), encoding="utf-8")
    else:
        sys.stderr.write(json.dumps(sidecar) + "\n")
    return EXIT_OK


# --- bench -----------------------------------------------------------------

def _corpus(args) -> list[tuple[str, Instance, int | None]]:
    if args.instances:
        paths = sorted(Path(args.instances).glob("*.json"))
        return [(str(p), _load(str(p), args.k), None) for p in paths]
    spec = _spec_from_args(args)
    out = []
    for offset in range(args.count):
        seed = args.seed + offset
        out.append((f"gen-{spec.variant.value}-{seed}", generate_random(spec, seed), seed))
    return out


def cmd_bench(args) -> int:
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    records: list[RunRecord] = []
    disagreements = 0
    for label, instance, seed in _corpus(args):
        answers = set()
        for algorithm in algorithms:
            try:
                record = run_algorithm(instance, algorithm, label, seed, approx_ok=True)
            except CapExceeded:
                record = RunRecord(label, algorithm, instance.k, "cap", None, 0.0, seed)
            except (InstanceError, ValueError) as exc:
                record = RunRecord(label, algorithm, instance.k, "error", None, 0.0, seed, reason=str(exc))
            records.append(record)
            if record.result in ("feasible", "infeasible") and record.algorithm != "approx":
                answers.add(record.result)
        disagreements += len(answers) > 1
    records.sort(key=lambda r: (r.instance, algorithms.index(r.algorithm) if r.algorithm in algorithms else 0))
    handle = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for record in records:
            writer.writerow(record.row())
    finally:
        if args.csv:
            handle.close()
    counts = {}
    for record in records:
        counts[record.result] = counts.get(record.result, 0) + 1
    parts = [f"rows={len(records)}"] + [f"{key}={value}" for key, value in sorted(counts.items())]
    sys.stderr.write(" ".join(parts + [f"disagreements={disagreements}"]) + "\n")
    return EXIT_OK if disagreements == 0 else EXIT_NO


def _build_model(instance: Instance):
    if instance.variant is Variant.ESSD:
        return build_essd_ilp(instance)
    if instance.variant is Variant.ESPC:
        return build_espc_ilp(instance)
    raise ValueError(f"no integer program for {instance.variant.value} instances")


def cmd_export_lp(args) -> int:
    instance = _load(args.instance, args.k)
    _emit(export_lp(_build_model(instance)), args.out)
    return EXIT_OK


def cmd_max_k(args) -> int:
    instance = io.read_instance(args.instance)
    best, witness = brute_force_max_k(instance)
    print(f"max_k: {best}")
    if args.out:
        io.write_solution(args.out, witness)
    return EXIT_OK


def _add_generator_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--variant", choices=[v.value for v in Variant], required=required, default="ESSD")
    p.add_argument("--n", type=int, required=required, default=4)
    p.add_argument("--m", type=int, required=required, default=4)
    p.add_argument("--p-max", type=int, default=1)
    p.add_argument("--d-min", type=int, default=1)
    p.add_argument("--d-max", type=int)
    p.add_argument("--starred", action="store_true")
    p.add_argument("--release-max", type=int, default=0)
    p.add_argument("--machines", type=int, default=1)
    p.add_argument("--max-paths", type=int, default=2)
    p.add_argument("--max-path-length", type=int, default=4)
    p.add_argument("--arc-clients", type=int)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equisched", description="Equitable scheduling toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    p.add_argument("--k", type=int, help="override the instance's k")
    p.add_argument("--approx-ok", action="store_true", help="let auto pick the approximation for ESSD*")
    p.add_argument("--export-lp", metavar="FILE", help="write the integer program before solving")
    p.add_argument("--out", help="solution JSON path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a seeded random instance")
    _add_generator_args(p, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="build a scheduling instance from a source problem")
    p.add_argument("source", choices=("independent-set", "clique", "bin-packing", "nae-sat", "espc-star",
                                      "short-paths"))
    p.add_argument("input")
    p.add_argument("--ell", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="run algorithms over a corpus and write CSV")
    p.add_argument("--instances", help="directory of instance JSON files")
    p.add_argument("--count", type=int, default=10, help="generated instances when no directory is given")
    p.add_argument("--algorithms", default="auto")
    p.add_argument("--k", type=int)
    p.add_argument("--csv")
    _add_generator_args(p, required=False)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-lp", help="write the integer program in CPLEX LP format")
    p.add_argument("instance")
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("max-k", help="largest k with a k-equitable solution (exhaustive)")
    p.add_argument("instance")
    p.add_argument("--out", help="witness solution JSON path")
    p.set_defaults(func=cmd_max_k)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except VerificationError as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_ERROR
    except (InstanceError, ReductionError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
