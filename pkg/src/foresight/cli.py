"""Command-line entry point: ``foresight route | bench | gen``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import REPORT_VERSION, ROUTERS, load_corpus, make_record, run_router, run_suite, run_sweep
from .qasm import QasmError, emit_qasm, load_qasm
from .router import ForesightParams
from .topology import TopologyError, resolve_topology
from .verify import verify_schedule
from .workloads import FAMILIES, generate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAILED = 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stderr.write(text)
    else:
        Path(path).write_text(text)


def cmd_route(args) -> int:
    circuit = load_qasm(args.input)
    graph = resolve_topology(args.topology)
    if args.noise_adaptive and args.router == "greedy":
        raise ValueError("--noise-adaptive applies to the foresight and hybrid routers")
    params = ForesightParams(
        delta=args.delta,
        max_solutions=args.max_solutions,
        seed=args.seed,
        noise_adaptive=args.noise_adaptive,
        initial_policy=args.initial_mapping,
    )
    start = time.perf_counter()
    schedule = run_router(circuit, graph, args.router, params)
    wall = (time.perf_counter() - start) * 1000.0
    _write(emit_qasm(schedule.circuit), args.output)
    record = make_record(circuit, graph, schedule, params, wall)
    record["initial_mapping"] = list(schedule.initial_mapping.pi)
    record["final_mapping"] = list(schedule.final_mapping.pi)
    report = {"report_version": REPORT_VERSION, "records": [record]}
    code = EXIT_OK
    if args.verify:
        result = verify_schedule(circuit, schedule, graph)
        report["verification"] = result
        if not result["pass"]:
            code = EXIT_VERIFY_FAILED
    _dump(report, args.report)
    return code


def cmd_bench(args) -> int:
    circuits = load_corpus(args.corpus)
    graph = resolve_topology(args.topology)
    if args.sweep_delta or args.sweep_max_solutions:
        report = run_sweep(
            circuits,
            graph,
            args.sweep_delta or [args.delta],
            args.sweep_max_solutions or [args.max_solutions],
            seed=args.seeds[0],
        )
    else:
        params = ForesightParams(delta=args.delta, max_solutions=args.max_solutions)
        report = run_suite(circuits, graph, args.routers, args.seeds, params, jobs=args.jobs)
    if args.report:
        _dump(report, args.report)
    else:
        _write(json.dumps(report, indent=2, sort_keys=True) + "\n", None)
    return EXIT_OK


def cmd_gen(args) -> int:
    circuit = generate(args.family, args.qubits, args.seed)
    _write(emit_qasm(circuit), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foresight", description="Qubit routing for coupling-constrained devices.")
    sub = parser.add_subparsers(dest="command", required=True)

    route = sub.add_parser("route", help="route one OpenQASM file")
    route.add_argument("--input", required=True)
    route.add_argument("--topology", required=True, help="builtin name (tokyo, grid(5,5), ...) or JSON file")
    route.add_argument("--router", choices=("foresight", "greedy", "hybrid"), default="foresight")
    route.add_argument("--delta", type=int, default=2)
    route.add_argument("--max-solutions", type=int, default=64)
    route.add_argument("--seed", type=int, default=0)
    route.add_argument("--noise-adaptive", action="store_true")
    route.add_argument("--initial-mapping", choices=("degree_matched", "identity"), default="degree_matched")
    route.add_argument("--verify", action="store_true")
    route.add_argument("--output", help="routed QASM path (default: stdout)")
    route.add_argument("--report", help="JSON report path (default: stderr)")
    route.set_defaults(func=cmd_route)

    bench = sub.add_parser("bench", help="route a corpus directory and aggregate")
    bench.add_argument("--corpus", required=True)
    bench.add_argument("--topology", required=True)
    bench.add_argument("--routers", type=lambda s: [x for x in s.split(",") if x], default=["foresight", "greedy"])
    bench.add_argument("--seeds", type=_int_list, default=[0])
    bench.add_argument("--delta", type=int, default=2)
    bench.add_argument("--max-solutions", type=int, default=64)
    bench.add_argument("--sweep-delta", type=_int_list)
    bench.add_argument("--sweep-max-solutions", type=_int_list)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--report")
    bench.set_defaults(func=cmd_bench)

    gen = sub.add_parser("gen", help="write a generated benchmark circuit")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--qubits", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output")
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "routers", None):
        bad = [r for r in args.routers if r not in ROUTERS]
        if bad:
            parser.error(f"unknown router(s): {', '.join(bad)}")
    try:
        return args.func(args)
    except (OSError, QasmError, TopologyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
