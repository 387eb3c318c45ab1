"""Command-line entry point.

Exit status: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import hogg_operators as ops
from .hogg_search import run_search, run_search_density, sweep, verify_result
from .nmr_sim import BUILTIN_SEQUENCES, PulseSequence, builtin_sequence, builtin_target, convention_search
from .sat_core import FormulaError, format_formula, parse_formula
from .tomography import (
    effective_pure,
    max_spurious,
    modulus_table,
    normalized,
    reconstruct,
    simulate_dataset,
    table_csv,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _write(text: str, path: str | None):
    """Write to stdout, or atomically to ``path`` so no partial file is left behind."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hoggsearch-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _formula(text: str):
    try:
        return parse_formula(text)
    except FormulaError as exc:
        raise UsageError(f"invalid formula {text!r}: {exc}") from None


def cmd_solve(args) -> tuple[str, int]:
    f = _formula(args.formula)
    result = run_search(f)
    check = verify_result(f, result)
    failed = result.guaranteed and not check.passed
    if args.format == "json":
        out = result.to_json()
        out["verification"] = check.to_json()
        return _dump(out), EXIT_FAILED if failed else EXIT_OK
    lines = [f"formula: {format_formula(f)}"]
    if not result.guaranteed:
        lines.append("note: outside the single-step guarantee (exploratory run)")
    for bits, p in result.probabilities.items():
        lines.append(f"  |{bits}>  {p!r}")
    lines.append("solutions: " + " ".join(a.bits for a in result.decoded_solutions))
    lines.append(f"verification: {check.passed}")
    return "\n".join(lines) + "\n", EXIT_FAILED if failed else EXIT_OK


def cmd_sweep(args) -> tuple[str, int]:
    try:
        report = sweep(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    status = EXIT_OK if report.all_passed else EXIT_FAILED
    if args.format == "json":
        return _dump(report.to_json()), status
    text = (
        f"{report.summary()}\n"
        f"worst off-solution probability: {report.worst_offsolution_probability!r}\n"
        f"worst solution spread: {report.worst_solution_spread!r}\n"
    )
    for failure in report.failures:
        text += f"FAILED {failure}\n"
    return text, status


def cmd_pulse_check(args) -> tuple[str, int]:
    try:
        if args.sequence in BUILTIN_SEQUENCES:
            seq = builtin_sequence(args.sequence)
        else:
            seq = PulseSequence.parse(args.sequence)
        target = builtin_target(args.target)
        report = convention_search(seq, target)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    status = EXIT_OK if report.validating else EXIT_FAILED
    if args.format == "json":
        out = report.to_json()
        out["target"] = args.target
        return _dump(out), status
    if args.format == "csv":
        rows = ["pulse_sign,coupling_sign,label_map,fidelity,validates"]
        for c, fid in report.entries:
            rows.append(f"{c.pulse_sign},{c.coupling_sign},{''.join(str(q + 1) for q in c.label_map)},"
                        f"{fid!r},{int(fid >= report.threshold)}")
        return "\n".join(rows) + "\n", status
    return report.table() + "\n", status


def cmd_tomo(args) -> tuple[str, int]:
    f = _formula(args.formula)
    if f.n != 2:
        raise UsageError("tomography is simulated for two-qubit formulas only")
    if args.noise < 0:
        raise UsageError("--noise must be non-negative")
    theory = run_search_density(f)
    data = simulate_dataset(theory, args.noise, args.seed)
    rho = effective_pure(reconstruct(data))
    table = modulus_table(rho)
    if args.dataset_csv:
        _write(data.to_csv(), args.dataset_csv)
    if args.format == "csv":
        return table_csv(table), EXIT_OK
    out = {
        "formula": format_formula(f),
        "sigma_noise": args.noise,
        "seed": args.seed,
        "reconstructed": ops.to_pairs(rho),
        "modulus_table": table.tolist(),
        "normalized_modulus_table": normalized(table).tolist(),
        "theory_modulus_table": modulus_table(theory).tolist(),
        "max_spurious": max_spurious(rho, theory),
    }
    return _dump(out), EXIT_OK


def cmd_operators(args) -> tuple[str, int]:
    f = _formula(args.formula) if args.formula else None
    n = args.n if args.n is not None else (f.n if f else None)
    m = args.m if args.m is not None else (f.m if f else None)
    if n is None or m is None:
        raise UsageError("operators needs --n and --m, or --formula")
    if f is not None and (f.n, f.m) != (n, m):
        raise UsageError(f"--n/--m ({n}, {m}) disagree with the formula ({f.n}, {f.m})")
    if not 1 <= n <= ops.MAX_DENSE_N or m < 1:
        raise UsageError(f"need 1 <= n <= {ops.MAX_DENSE_N} and m >= 1")
    out = {
        "n": n,
        "m": m,
        "Gamma": ops.to_pairs(ops.build_Gamma(n, m)),
        "U": ops.to_pairs(ops.build_U(n, m)),
    }
    if f is not None:
        out["formula"] = format_formula(f)
        out["R"] = ops.to_pairs(ops.build_R(f))
    if args.format == "json":
        return _dump(out), EXIT_OK
    with np.printoptions(precision=6, suppress=True):
        text = f"n={n} m={m}\nGamma diag:\n{ops.build_Gamma(n, m)}\nU:\n{ops.build_U(n, m)}\n"
        if f is not None:
            text += f"R diag:\n{ops.build_R(f)}\n"
    return text, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hoggsearch", description="Single-step structured quantum search for 1-SAT.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the search on one formula")
    p.add_argument("--formula", required=True, help='e.g. "1, 2" or "n=2; -2"')
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="check every satisfiable 1-SAT formula on n variables")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pulse-check", help="fidelity of a pulse sequence under all sign/label conventions")
    p.add_argument("--sequence", required=True, help=f"builtin name ({', '.join(BUILTIN_SEQUENCES)}) or literal")
    p.add_argument("--target", required=True, help="builtin target name")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_pulse_check)

    p = sub.add_parser("tomo", help="simulate readout tomography of the search output")
    p.add_argument("--formula", required=True)
    p.add_argument("--noise", type=float, default=0.0, help="noise std as a fraction of the largest line")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--dataset-csv", help="also write the simulated line intensities here")
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("operators", help="dump Gamma, U (and R for a formula)")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--formula")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_operators)

    for action in sub.choices.values():
        action.add_argument("--output", help="write the artifact to this file instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, status = args.func(args)
    except UsageError as exc:
        print(f"hoggsearch {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(text, args.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
