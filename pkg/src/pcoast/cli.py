"""Command-line driver: parse -> compile -> optimize -> synthesize -> emit.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 verification failure, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import bench as bench_mod
from .circuit import Circuit, Gate, ParseError, emit, metrics, parse
from .graph import circuit_to_graph
from .nodes import render_cvar
from .opt import optimize
from .synth import SearchConfig, SynthResult, synthesize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_INTERNAL = 4

VERIFY_QUBIT_CAP = 5
VERIFY_TOL = 1e-9


def _render_msf(msf) -> list[str]:
    """One ``user := combo`` line per assignment; primes mark output-circuit
    variables (the synthesized circuit's own c<k> declarations)."""
    lines = []
    for target, srcs, const in msf.assignments:
        terms = sorted(f"{render_cvar(s)}'" for s in srcs)
        if const:
            terms.append("1")
        lines.append(f"{render_cvar(target)} := {' + '.join(terms) if terms else '0'}")
    return lines


def _pipeline(circuit: Circuit, outcome: str, cfg: SearchConfig):
    timings = {}
    t0 = time.perf_counter()
    prog = circuit_to_graph(circuit)
    timings["compile_s"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    opt_prog = optimize(prog, outcome)
    timings["optimize_s"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    result = synthesize(opt_prog, outcome, cfg)
    timings["synthesize_s"] = time.perf_counter() - t0
    return prog, opt_prog, result, timings


def _verify(circuit: Circuit, result: SynthResult, outcome: str) -> bool:
    from . import sim

    if circuit.n_qubits > VERIFY_QUBIT_CAP:
        raise sim.SimError(
            f"--verify capped at {VERIFY_QUBIT_CAP} qubits (got {circuit.n_qubits})"
        )
    user_vars = set(circuit.cvars)
    for initial in (
        sim.CqState.maximally_mixed(circuit.n_qubits),
        sim.CqState.zero_state(circuit.n_qubits),
    ):
        got_in = sim.restrict(sim.run_circuit(circuit, initial.copy()), user_vars)
        out_state = sim.run_circuit(result.circuit, initial.copy())
        out_state = sim.apply_node(out_state, sim.MsfNode(result.msf))
        got_out = sim.restrict(out_state, user_vars)
        if outcome == "release":
            if not sim.equiv_release(got_in, got_out, VERIFY_TOL):
                return False
        else:
            got_out = _apply_permutation(got_out, result.permutation)
            if not sim.equiv_hold(got_in, got_out, VERIFY_TOL):
                return False
    return True


def _apply_permutation(state, permutation):
    import numpy as np

    from . import sim

    n = state.n_qubits
    if tuple(permutation) == tuple(range(n)):
        return state
    # row j of the residual lives on wire permutation[j]; relabel back
    d = 1 << n
    perm_matrix = np.zeros((d, d), dtype=complex)
    for basis in range(d):
        bits = [(basis >> (n - 1 - q)) & 1 for q in range(n)]
        target_bits = [bits[permutation[q]] for q in range(n)]
        target = 0
        for b in target_bits:
            target = (target << 1) | b
        perm_matrix[target, basis] = 1.0
    return sim.CqState(
        n,
        {k: perm_matrix @ rho @ perm_matrix.conj().T for k, rho in state.branches.items()},
        state.measurements_done,
    )


def cmd_opt(args) -> int:
    try:
        text = open(args.infile, "r", encoding="utf-8").read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        circuit = parse(text)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    cfg = SearchConfig(
        parallelization_credit=args.credit,
        free_node_weighting=args.free_node_weighting,
        gateset=args.gateset,
        seed=args.seed,
        emit_swaps=args.emit_swaps,
    )
    try:
        prog, opt_prog, result, timings = _pipeline(circuit, args.outcome, cfg)
        if os.environ.get("PCOAST_FAULT_INJECT"):
            # testing hook: corrupt the output to exercise --verify
            broken = result.circuit.gates + (Gate("x", (0,)),)
            result = SynthResult(
                Circuit(result.circuit.n_qubits, result.circuit.n_cbits, broken),
                result.msf,
                result.permutation,
            )
    except Exception as e:  # noqa: BLE001 - surfaced as an exit code
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    report = {
        "input": metrics(circuit),
        "output": metrics(result.circuit),
        "outcome": args.outcome,
        "config": {
            "gateset": cfg.gateset,
            "credit": cfg.parallelization_credit,
            "free_node_weighting": cfg.free_node_weighting,
            "emit_swaps": cfg.emit_swaps,
            "seed": cfg.seed,
        },
        "timings": timings,
        "classical_map": _render_msf(result.msf),
        "qubit_permutation": list(result.permutation),
    }
    out_text = emit(result.circuit)
    out_text += "".join(f"# {line}\n" for line in report["classical_map"])
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8") as fh:
            fh.write(out_text)
    else:
        sys.stdout.write(out_text)
    if args.dump_graph:
        with open(args.dump_graph, "w", encoding="utf-8") as fh:
            fh.write(opt_prog.dump())
    if args.stats:
        with open(args.stats, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.verify:
        try:
            ok = _verify(circuit, result, args.outcome)
        except Exception as e:  # noqa: BLE001
            print(f"verification error: {e}", file=sys.stderr)
            return EXIT_INTERNAL
        if not ok:
            print("verification FAILED", file=sys.stderr)
            return EXIT_VERIFY
        print("verified", file=sys.stderr)
    summary = {k: report[k] for k in ("input", "output", "outcome")}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    family = bench_mod.FAMILIES.get(args.family)
    if family is None:
        print(f"unknown family {args.family!r}", file=sys.stderr)
        return EXIT_USAGE
    cfg = SearchConfig(
        parallelization_credit=args.credit,
        free_node_weighting=args.free_node_weighting,
        gateset=args.gateset,
        seed=args.seed,
    )
    rows = []
    for n in args.n:
        circuit = family(n, args)
        t0 = time.perf_counter()
        _, _, result, timings = _pipeline(circuit, args.outcome, cfg)
        wall = time.perf_counter() - t0
        m_in = metrics(circuit)
        m_out = metrics(result.circuit)
        row = {
            "family": args.family,
            "n": n,
            "outcome": args.outcome,
            "in_total": m_in["total_gates"],
            "in_two_qubit": m_in["two_qubit_gates"],
            "in_depth": m_in["depth"],
            "out_total": m_out["total_gates"],
            "out_two_qubit": m_out["two_qubit_gates"],
            "out_depth": m_out["depth"],
            "seconds": round(wall, 3),
        }
        if args.verify:
            ok = _verify(circuit, result, args.outcome)
            row["verified"] = bool(ok)
            if not ok:
                _print_rows(rows + [row], args.json)
                return EXIT_VERIFY
        rows.append(row)
    _print_rows(rows, args.json)
    return EXIT_OK


def _print_rows(rows, as_json: bool) -> None:
    if as_json:
        print(json.dumps(rows, sort_keys=True))
        return
    if not rows:
        return
    cols = list(rows[0].keys())
    print(",".join(cols))
    for row in rows:
        print(",".join(str(row[c]) for c in cols))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcoast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("opt", help="optimize a circuit file")
    p_opt.add_argument("--in", dest="infile", required=True)
    p_opt.add_argument("--out", dest="outfile")
    p_opt.add_argument("--outcome", choices=("hold", "release"), default="hold")
    p_opt.add_argument("--gateset", choices=("generic", "native"), default="generic")
    p_opt.add_argument("--credit", type=float, default=1.0)
    p_opt.add_argument("--free-node-weighting", action="store_true")
    p_opt.add_argument("--emit-swaps", action="store_true")
    p_opt.add_argument("--verify", action="store_true")
    p_opt.add_argument("--seed", type=int, default=0)
    p_opt.add_argument("--stats")
    p_opt.add_argument("--dump-graph")
    p_opt.set_defaults(func=cmd_opt)

    p_bench = sub.add_parser("bench", help="run a benchmark family")
    p_bench.add_argument("family", choices=sorted(bench_mod.FAMILIES))
    p_bench.add_argument("--n", type=int, nargs="+", required=True)
    p_bench.add_argument("--gates", type=int, default=30)
    p_bench.add_argument("--layers", type=int, default=2)
    p_bench.add_argument("--arrangement", default="linear")
    p_bench.add_argument("--edge-prob", type=float, default=0.5)
    p_bench.add_argument("--outcome", choices=("hold", "release"), default="hold")
    p_bench.add_argument("--gateset", choices=("generic", "native"), default="generic")
    p_bench.add_argument("--credit", type=float, default=1.0)
    p_bench.add_argument("--free-node-weighting", action="store_true")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--verify", action="store_true")
    p_bench.add_argument("--json", action="store_true")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
