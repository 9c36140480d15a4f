"""``fgs`` command line: count, compile, verify, simulate, bench.

Exit codes: 0 success, 2 parse error, 3 enumeration cap exceeded,
4 construction precondition violated, 5 verification failed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .boolean import (
    CnfFormula,
    EnumerationLimitError,
    ParseError,
    count,
    parse_circuit,
    parse_dimacs,
    unique_gap_reduction,
)
from .circuit import parse_quantum
from .constructions import TARGETS, build_target, load_instance
from .reversible import compile_boolean_naive, compile_cnf_counter

EXIT_PARSE, EXIT_CAP, EXIT_PRECONDITION, EXIT_VERIFY = 2, 3, 4, 5
MAX_BENCH_H = 26


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from exc


def _load_function(args):
    try:
        if args.cnf:
            return parse_dimacs(_read(args.cnf))
        return parse_circuit(_read(args.circuit))
    except ParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from exc


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _add_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--cnf", help="DIMACS CNF file")
    g.add_argument("--circuit", help="Boolean circuit file")


# ---------------------------------------------------------------- commands


def cmd_count(args) -> int:
    """unique-gap reports the counts of the reduced function g, where gap(g) = 0 iff #f = 1."""
    f = _load_function(args)
    rep = count(unique_gap_reduction(f) if args.mode == "unique-gap" else f)
    _emit({"mode": args.mode, **rep.as_dict()})
    return 0


def _compile_text(f, target: str) -> str:
    if target == "reversible":
        C = compile_cnf_counter(f) if isinstance(f, CnfFormula) else compile_boolean_naive(f)
        head = {"type": "reversible", **C.ledger.as_dict(), "gates": len(C.gates)}
        return json.dumps(head, sort_keys=True) + "\n" + C.to_text()
    return build_target(target, f).dumps()


def cmd_compile(args) -> int:
    f = _load_function(args)
    try:
        text = _compile_text(f, args.target)
    except ValueError as exc:
        raise CliError(f"precondition failed for {args.target}: {exc}", EXIT_PRECONDITION) from exc
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    from .verify import verify_instance

    if args.instance:
        try:
            inst = load_instance(_read(args.instance))
        except (ValueError, KeyError) as exc:
            raise CliError(f"parse error: {exc}", EXIT_PARSE) from exc
    else:
        if not (args.cnf or args.circuit) or not args.target:
            raise CliError("verify needs --instance, or --cnf/--circuit with --target", EXIT_PARSE)
        f = _load_function(args)
        try:
            inst = build_target(args.target, f)
        except ValueError as exc:
            raise CliError(f"precondition failed for {args.target}: {exc}", EXIT_PRECONDITION) from exc
    rep = verify_instance(inst)
    _emit(rep.as_dict())
    return 0 if rep.passed else EXIT_VERIFY


def cmd_simulate(args) -> int:
    from .statevector import amplitude

    text = _read(args.circuit)
    if text.lstrip().startswith("{"):
        # instance files carry a JSON header line
        text = text.lstrip().partition("\n")[2]
    try:
        qc, _ = parse_quantum(text)
    except ValueError as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from exc
    a = args.a if args.a is not None else "0" * qc.width
    b = args.b if args.b is not None else "0" * qc.width
    if args.method == "statevector":
        z = amplitude(qc, a, b)
        _emit({"method": "statevector", "amplitude_re": z.real, "amplitude_im": z.imag, "probability": abs(z) ** 2})
        return 0
    from .pathsum.affine import extract_path_sum, path_sum_amplitude, prepare_clifford_t, simplify
    from .pathsum.counting import choose_split

    ps = simplify(extract_path_sum(prepare_clifford_t(qc, args.borrowed), a, b))
    method = "direct" if args.method == "pathsum" else "counting"
    k = None
    if method == "counting" and not ps.zero and ps.v >= 2:
        k = args.k if args.k is not None else choose_split(ps.v)
    amp = path_sum_amplitude(ps, method, k)
    out = {"method": args.method, "v": ps.v, "h": ps.h, "k": k, "terms": ps.poly.num_terms}
    out.update(amp.as_dict())
    out["probability"] = amp.abs2()
    _emit(out)
    return 0


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError as exc:
        raise CliError(f"bad --h-range {text!r}; expected LO..HI", EXIT_PARSE) from exc
    if not 2 <= lo <= hi:
        raise CliError("--h-range needs 2 <= LO <= HI", EXIT_PARSE)
    if hi > MAX_BENCH_H:
        raise CliError(f"--h-range upper end exceeds {MAX_BENCH_H}", EXIT_PARSE)
    return lo, hi


def bench_instances(h: int, trials: int, seed: int):
    """Phase polynomials of <0|C|0> for random {H, T, CZ} circuits on 2 qubits with h Hadamards."""
    from .corpus import random_htcz_circuit
    from .pathsum.phase import extract_phase_polynomial

    rng = np.random.default_rng([seed, h])
    out = []
    for _ in range(trials):
        qc = random_htcz_circuit(rng, 2, h)
        out.append(extract_phase_polynomial(qc, (0, 0), (0, 0)))
    return out


def _fit(hs: list[int], times: list[float]) -> float | None:
    pts = [(h, t) for h, t in zip(hs, times) if t > 0]
    if len(pts) < 2:
        return None
    x, y = zip(*pts)
    return float(np.polyfit(x, np.log2(y), 1)[0])


def cmd_bench(args) -> int:
    from .pathsum.counting import counting_sum
    from .pathsum.phase import direct_sum

    lo, hi = _parse_range(args.h_range)
    rows = []
    if args.trials > 0:
        for h in range(lo, hi + 1):
            polys = bench_instances(h, args.trials, args.seed)
            td, tc = [], []
            for p in polys:
                t0 = time.perf_counter()
                d = direct_sum(p)
                t1 = time.perf_counter()
                c = counting_sum(p).amplitude
                t2 = time.perf_counter()
                if d != c:
                    raise CliError(f"direct and counting disagree at h={h}", EXIT_VERIFY)
                td.append(t1 - t0)
                tc.append(t2 - t1)
            rows.append(
                {
                    "h": h,
                    "v": [p.v for p in polys],
                    "direct_median_s": float(np.median(td)),
                    "counting_median_s": float(np.median(tc)),
                }
            )
    hs = [r["h"] for r in rows]
    _emit(
        {
            "seed": args.seed,
            "trials": args.trials,
            "rows": rows,
            "direct_exponent": _fit(hs, [r["direct_median_s"] for r in rows]),
            "counting_exponent": _fit(hs, [r["counting_median_s"] for r in rows]),
        }
    )
    return 0


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgs", description="Model counting and exact simulation for supremacy constructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="#f and gap(f) by enumeration")
    _add_source(p)
    p.add_argument("--mode", choices=("sharp", "gap", "unique-gap"), default="sharp")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("compile", help="build a reversible circuit or a hardness instance")
    _add_source(p)
    p.add_argument("--target", required=True, choices=("reversible",) + TARGETS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="compare an instance's formula with the statevector oracle")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--instance")
    g.add_argument("--cnf")
    g.add_argument("--circuit")
    p.add_argument("--target", choices=TARGETS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="one amplitude <a|C|b>")
    p.add_argument("--circuit", required=True, help="quantum circuit file")
    p.add_argument("--method", choices=("statevector", "pathsum", "counting"), default="statevector")
    p.add_argument("--a", help="output basis string (default all zeros)")
    p.add_argument("--b", help="input basis string (default all zeros)")
    p.add_argument("--k", type=int, help="split parameter for the counting method")
    p.add_argument("--borrowed", type=int, help="borrowed qubit for multi-controlled gates")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="direct enumeration versus root counting")
    p.add_argument("--pathsum", action="store_true", help="accepted for compatibility; path sums are the only benchmark")
    p.add_argument("--h-range", default="10..14")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"fgs: {exc}", file=sys.stderr)
        return exc.code
    except EnumerationLimitError as exc:
        print(f"fgs: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
