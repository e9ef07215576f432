"""Command-line interface.

Subcommands: check-matrix, build-code, search, verify-ccz,
simulate-hadamard, inject-faults, distill, cost-curve.  Every subcommand
takes ``--format text|json``; randomized ones print their effective seed in
the output header.  Exit codes: 0 success, 1 verification failure, 2 usage
error.  Identical invocations with identical seeds produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from . import codes as codes_mod
from . import cost as cost_mod
from . import distill as distill_mod
from .codes import TriorthogonalCode, TriorthogonalMatrix, build_code, builtin_15_1_3, distances
from .gf2 import _atomic_write_text, format_matrix, read_matrix
from .logical import (
    FaultSpec,
    SteaneReport,
    gauge_parities_of_state,
    logical_hadamard,
    pauli_residual,
)
from .simulator import (
    SparseState,
    prepare_logical,
    states_equal_up_to_global_phase,
    superpose,
    transversal_ccz_phase_check,
)

DEFAULT_SEED = 0x5EED

BUILTINS = {"15-1-3": builtin_15_1_3}


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def _emit_json(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _load_source(args: argparse.Namespace) -> TriorthogonalMatrix:
    if getattr(args, "builtin", None):
        return BUILTINS[args.builtin]()
    matrix = read_matrix(args.file)
    return TriorthogonalMatrix.from_matrix(matrix, level=getattr(args, "level", None))


def _parse_fault(text: str) -> FaultSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"fault must look like location:pauli:qubit, got {text!r}")
    return FaultSpec(location=parts[0], pauli=parts[1].upper(), qubit=int(parts[2]))


def _parse_input_state(text: str, code: TriorthogonalCode) -> SparseState:
    if text == "+":
        if code.k != 1:
            raise ValueError("input '+' needs a single logical qubit")
        return superpose(
            [
                (complex(1.0), prepare_logical(code, (0,))),
                (complex(1.0), prepare_logical(code, (1,))),
            ]
        )
    if text == "-":
        if code.k != 1:
            raise ValueError("input '-' needs a single logical qubit")
        return superpose(
            [
                (complex(1.0), prepare_logical(code, (0,))),
                (complex(-1.0), prepare_logical(code, (1,))),
            ]
        )
    bits = tuple(int(c) for c in text)
    if len(bits) != code.k or any(b not in (0, 1) for b in bits):
        raise ValueError(f"input label {text!r} does not fit k={code.k}")
    return prepare_logical(code, bits)


def _ideal_hadamard_image(text: str, code: TriorthogonalCode) -> SparseState:
    if text == "+":
        return prepare_logical(code, (0,))
    if text == "-":
        return prepare_logical(code, (1,))
    bits = tuple(int(c) for c in text)
    amp = complex(2.0 ** (-code.k / 2.0))
    terms = []
    for other in range(1 << code.k):
        other_bits = tuple((other >> i) & 1 for i in range(code.k))
        sign = -1.0 if sum(a * b for a, b in zip(bits, other_bits)) % 2 else 1.0
        terms.append((amp * sign, prepare_logical(code, other_bits)))
    return superpose(terms)


def _label_text(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def cmd_check_matrix(args: argparse.Namespace) -> int:
    matrix = read_matrix(args.file)
    violation = codes_mod.check_orthogonality(matrix, args.level)
    if args.format == "json":
        _emit_json(
            {
                "command": "check-matrix",
                "file": args.file,
                "level": args.level,
                "rows": matrix.row_count,
                "cols": matrix.col_count,
                "pass": violation is None,
                "violation": list(violation) if violation else None,
            }
        )
    else:
        if violation is None:
            _emit(f"PASS level={args.level} rows={matrix.row_count} cols={matrix.col_count}")
        else:
            _emit(f"FAIL level={len(violation)} rows={violation}")
    return 0 if violation is None else 1


def cmd_build_code(args: argparse.Namespace) -> int:
    source = _load_source(args)
    code = build_code(source)
    d_x = d_z = None
    if args.distances:
        d_x, d_z = distances(code)
    payload = {
        "command": "build-code",
        "n": code.n,
        "k": code.k,
        "level": source.level,
        "x_stabilizers": code.x_stabilizers.row_count,
        "z_stabilizers": code.z_stabilizers.row_count,
        "gauge_pairs": len(code.gauge_pairs),
        "d_x": d_x,
        "d_z": d_z,
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        _emit(
            f"n={code.n} k={code.k} level={source.level} "
            f"x_stabilizers={payload['x_stabilizers']} "
            f"z_stabilizers={payload['z_stabilizers']} "
            f"gauge_pairs={payload['gauge_pairs']}"
        )
        if args.distances:
            _emit(f"d_x={d_x} d_z={d_z} distance={min(d_x, d_z)}")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    found = codes_mod.search_triorthogonal(
        n=args.n, k=args.k, m_even=args.m_even, budget=args.budget, seed=args.seed
    )
    if args.format == "json":
        _emit_json(
            {
                "command": "search",
                "seed": args.seed,
                "budget": args.budget,
                "n": args.n,
                "k": args.k,
                "m_even": args.m_even,
                "found": found is not None,
                "rows": [r.to_string() for r in found.matrix.rows] if found else None,
                "out": args.out if found else None,
            }
        )
    else:
        _emit(f"# seed={args.seed} budget={args.budget}")
        _emit("found" if found else "not found")
    if found is None:
        return 1
    if args.out:
        comments = [
            "triorthogonal matrix found by seeded search",
            f"seed={args.seed} budget={args.budget} n={args.n} k={args.k} m_even={args.m_even}",
        ]
        _atomic_write_text(args.out, format_matrix(found.matrix, comments))
    return 0


def cmd_verify_ccz(args: argparse.Namespace) -> int:
    source = _load_source(args)
    code = build_code(source)
    k = code.k
    all_ok = True
    results = []
    for a in range(1 << k):
        for b in range(1 << k):
            for c in range(1 << k):
                labels = [
                    tuple((x >> i) & 1 for i in range(k)) for x in (a, b, c)
                ]
                check = transversal_ccz_phase_check(code, labels)
                ok = check.matches
                all_ok &= ok
                results.append((labels, check, ok))
    if args.format == "json":
        _emit_json(
            {
                "command": "verify-ccz",
                "n": code.n,
                "k": k,
                "all_ok": all_ok,
                "checks": [
                    {
                        "labels": ["".join(map(str, lab)) for lab in labels],
                        "phase": check.phase,
                        "expected": check.expected,
                        "uniform": check.uniform,
                        "ok": ok,
                    }
                    for labels, check, ok in results
                ],
            }
        )
    else:
        for labels, check, ok in results:
            rendered = ",".join(_label_text(lab) for lab in labels)
            sign = "+1" if check.phase > 0 else "-1"
            _emit(f"({rendered}) -> {sign}{'' if ok else ' MISMATCH'}")
        _emit("PASS" if all_ok else "FAIL")
    return 0 if all_ok else 1


def _report_payload(
    report: SteaneReport, matches: Optional[bool], gauge_zero: Optional[bool]
) -> dict:
    payload = report.to_json_dict()
    if matches is not None:
        payload["matches_ideal"] = matches
    if gauge_zero is not None:
        payload["gauge_restored"] = gauge_zero
    return payload


def cmd_simulate_hadamard(args: argparse.Namespace) -> int:
    source = _load_source(args)
    code = build_code(source)
    state = _parse_input_state(args.input, code)
    ideal = _ideal_hadamard_image(args.input, code)
    header = {
        "command": "simulate-hadamard",
        "input": args.input,
        "n": code.n,
        "k": code.k,
        "seed": args.seed,
        "rounds": args.seeds,
    }
    if args.format == "json":
        _emit_json(header)
    else:
        _emit(f"# seed={args.seed} rounds={args.seeds} input={args.input}")
    all_ok = True
    for offset in range(args.seeds):
        rng = random.Random(args.seed + offset)
        output, report = logical_hadamard(state, code, rng=rng)
        matches = states_equal_up_to_global_phase(output, ideal, tol=1e-10)
        gauge = gauge_parities_of_state(output, code)
        gauge_zero = gauge is not None and not any(gauge)
        all_ok &= matches and gauge_zero
        payload = _report_payload(report, matches, gauge_zero)
        payload["seed"] = args.seed + offset
        if args.format == "json":
            _emit_json(payload)
        else:
            _emit(
                f"seed={args.seed + offset} outcomes={report.raw_outcomes.to_string()} "
                f"syndrome={_label_text(report.x_syndrome)} "
                f"gauge={_label_text(report.gauge_parities)} "
                f"correction={report.applied_correction.to_string()} "
                f"ok={matches and gauge_zero}"
            )
    if args.format != "json":
        _emit("PASS" if all_ok else "FAIL")
    return 0 if all_ok else 1


def cmd_inject_faults(args: argparse.Namespace) -> int:
    source = _load_source(args)
    code = build_code(source)
    faults = tuple(_parse_fault(f) for f in args.fault)
    state = _parse_input_state(args.input, code)
    ideal = _ideal_hadamard_image(args.input, code)
    rng = random.Random(args.seed)
    output, report = logical_hadamard(state, code, faults=faults, rng=rng)
    residual = pauli_residual(output, ideal)
    tolerated = residual is not None and residual.sites <= len(faults)
    payload = _report_payload(report, None, None)
    payload.update(
        {
            "command": "inject-faults",
            "seed": args.seed,
            "faults": [f"{f.location}:{f.pauli}:{f.qubit}" for f in faults],
            "residual_sites": None if residual is None else residual.sites,
            "tolerated": tolerated,
        }
    )
    if args.format == "json":
        _emit_json(payload)
    else:
        _emit(f"# seed={args.seed} faults={len(faults)}")
        for f in faults:
            _emit(f"fault {f.location}:{f.pauli}:{f.qubit}")
        _emit(
            f"outcomes={report.raw_outcomes.to_string()} "
            f"syndrome={_label_text(report.x_syndrome)} "
            f"gauge={_label_text(report.gauge_parities)} "
            f"correction={report.applied_correction.to_string()}"
        )
        sites = "none" if residual is None else str(residual.sites)
        _emit(f"residual_sites={sites} tolerated={tolerated}")
    return 0 if tolerated else 1


def cmd_distill(args: argparse.Namespace) -> int:
    source = _load_source(args)
    with open(args.model, "r", encoding="ascii") as fh:
        model = distill_mod.ErrorModel.from_json_dict(json.load(fh))
    report = distill_mod.enumerate_order2(source, model)
    stats = distill_mod.monte_carlo(
        source, model, trials=args.trials, seed=args.seed, collect_trials=bool(args.per_trial)
    )
    payload = {
        "command": "distill",
        "seed": args.seed,
        "trials": args.trials,
        "n": source.n,
        "k": len(source.odd_rows),
        "p": model.p,
        "accepted": stats.accepted,
        "failures": stats.failures,
        "acceptance_rate": stats.acceptance_rate,
        "conditional_error_rate": stats.conditional_error_rate,
        "order2_coefficient": report.coefficient,
        "order2_pair_events": report.pair_events,
        "order2_identical_class_events": report.identical_class_events,
        "predicted_failure": report.predicted_failure(model.p),
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        _emit(f"# seed={args.seed} trials={args.trials} p={model.p!r}")
        _emit(
            f"accepted={stats.accepted} failures={stats.failures} "
            f"acceptance_rate={stats.acceptance_rate!r} "
            f"conditional_error_rate={stats.conditional_error_rate!r}"
        )
        _emit(
            f"order2_coefficient={report.coefficient!r} "
            f"predicted_failure={report.predicted_failure(model.p)!r}"
        )
    if args.out:
        _atomic_write_text(args.out, json.dumps(payload, sort_keys=True) + "\n")
    if args.per_trial:
        lines = ["trial,accepted,logical_failure"]
        flags = stats.trial_flags
        for i in range(stats.trials):
            lines.append(f"{i},{int(flags[i, 0])},{int(flags[i, 1])}")
        _atomic_write_text(args.per_trial, "\n".join(lines) + "\n")
    return 0


def cmd_cost_curve(args: argparse.Namespace) -> int:
    if args.menu:
        with open(args.menu, "r", encoding="ascii") as fh:
            menu = cost_mod.menu_from_json(json.load(fh))
    else:
        menu = cost_mod.default_menu()
    if args.targets:
        targets = [float(t) for t in args.targets.split(",")]
    else:
        targets = [10.0**-e for e in range(6, 21)]
    rows = cost_mod.cost_curve(
        menu, targets, physical_t_error=args.physical_t_error, max_depth=args.max_depth
    )
    csv_text = cost_mod.render_cost_curve_csv(rows)
    if args.out:
        _atomic_write_text(args.out, csv_text)
    if args.format == "json":
        _emit_json(
            {
                "command": "cost-curve",
                "physical_t_error": args.physical_t_error,
                "rows": [
                    {
                        "target_error": row.target_error,
                        "jones": row.jones,
                        "jones_double": row.jones_double,
                        "triortho_k_opt": row.triortho_k_opt,
                        "k_star": row.k_star,
                    }
                    for row in rows
                ],
                "out": args.out,
            }
        )
    elif not args.out:
        sys.stdout.write(csv_text)
    else:
        _emit(f"wrote {args.out}")
    return 0


def _add_source_args(parser: argparse.ArgumentParser, with_level: bool = False) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--file", help="matrix text file")
    group.add_argument("--builtin", choices=sorted(BUILTINS), help="built-in matrix")
    if with_level:
        parser.add_argument(
            "--level", type=int, default=None, help="orthogonality level to verify"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triortho",
        description="Triorthogonal code construction, simulation, and cost analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check-matrix", help="verify row-product parities of a matrix file")
    p.add_argument("--file", required=True)
    p.add_argument("--level", type=int, default=3)
    add_format(p)
    p.set_defaults(func=cmd_check_matrix)

    p = sub.add_parser("build-code", help="derive code parameters from a matrix")
    _add_source_args(p, with_level=True)
    p.add_argument("--distances", action="store_true", help="also compute exact distances")
    add_format(p)
    p.set_defaults(func=cmd_build_code)

    p = sub.add_parser("search", help="randomized search for a triorthogonal matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m-even", type=int, required=True, dest="m_even")
    p.add_argument("--budget", type=int, default=100000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="write the found matrix here")
    add_format(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-ccz", help="check the transversal CCZ phase on all labels")
    _add_source_args(p, with_level=True)
    add_format(p)
    p.set_defaults(func=cmd_verify_ccz)

    p = sub.add_parser("simulate-hadamard", help="run the measurement-based logical Hadamard")
    _add_source_args(p, with_level=True)
    p.add_argument("--input", default="0", help="logical input: bits, '+', or '-'")
    p.add_argument("--seeds", type=int, default=1, help="number of seeded rounds")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_format(p)
    p.set_defaults(func=cmd_simulate_hadamard)

    p = sub.add_parser("inject-faults", help="run the Hadamard procedure with chosen faults")
    _add_source_args(p, with_level=True)
    p.add_argument(
        "--fault",
        action="append",
        default=[],
        help="location:pauli:qubit, e.g. cnot_data:X:7 (repeatable)",
    )
    p.add_argument("--input", default="0")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_format(p)
    p.set_defaults(func=cmd_inject_faults)

    p = sub.add_parser("distill", help="distillation census and Monte Carlo")
    _add_source_args(p, with_level=True)
    p.add_argument("--model", required=True, help="error model JSON file")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="write the stats JSON here")
    p.add_argument("--per-trial", dest="per_trial", help="write per-trial CSV here")
    add_format(p)
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("cost-curve", help="per-family cost table over target errors")
    p.add_argument("--targets", help="comma-separated target errors")
    p.add_argument(
        "--physical-t-error", type=float, default=1e-2, dest="physical_t_error"
    )
    p.add_argument("--menu", help="protocol menu JSON file")
    p.add_argument("--max-depth", type=int, default=4, dest="max_depth")
    p.add_argument("--out", help="write the CSV here")
    add_format(p)
    p.set_defaults(func=cmd_cost_curve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
