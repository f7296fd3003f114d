"""Command-line front end: bank design, verification, transforms, benchmarks.

Exit codes: 0 success, 1 a mathematical verification failed, 2 bad input
(parse errors, violated preconditions, I/O). Reports go to stdout as plain
text; ``--json PATH`` writes a machine-readable duplicate alongside.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import dataio
from .errors import PcswaveError
from .filterbank import (bank_from_json, bank_report, bank_to_json,
                         build_pcs_bank, verify_combined_biorthogonality)
from .filters import filter_from_json, is_biorthogonal, is_interpolatory, to_1d
from .transform import count_ops, decompose_direct, decompose_fast, reconstruct_fast


def _load_json(path):
    from .errors import FormatError
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def _dump_json(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_filter_1d(path, p: int):
    f = filter_from_json(_load_json(path))
    if f.dim != 1:
        raise PcswaveError(f"{path}: expected a 1-D filter, got dim={f.dim}")
    if f.p != p:
        raise PcswaveError(f"{path}: filter dilation {f.p} does not match --p {p}")
    return to_1d(f)


def _nu_label(nu) -> str:
    return "(" + ",".join(str(x) for x in nu) + ")"


def cmd_design(args) -> int:
    G = _load_filter_1d(args.g, args.p)
    H = _load_filter_1d(args.h, args.p)
    bank = build_pcs_bank(G, H, args.dim, args.gamma)
    _dump_json(args.output, bank_to_json(bank))

    rep = bank_report(bank, args.max_order)
    sizes = {"tau": bank.tau.support_size, "tau_d": bank.tau_d.support_size,
             "t": sorted({f.support_size for f in bank.t.values()}),
             "t_d": sorted({f.support_size for f in bank.t_d.values()})}
    print(f"bank written to {args.output}")
    print(f"p={bank.p} dim={bank.n} convention={bank.sys.convention} q={bank.q}")
    print(f"support sizes: tau={sizes['tau']} tau_d={sizes['tau_d']} "
          f"t={sizes['t']} t_d={sizes['t_d']}")
    print(f"vanishing-moment guarantee floor: {rep.guarantee_floor}")
    if args.json:
        _dump_json(args.json, {"output": args.output, "p": bank.p, "dim": bank.n,
                               "convention": bank.sys.convention,
                               "support_sizes": sizes,
                               "guarantee_floor": rep.guarantee_floor})
    return 0


def _diag_row(name, nu, d) -> str:
    label = name if nu is None else f"{name}{_nu_label(nu)}"
    return (f"  {label:<16} support={d.support_size:<4} accuracy={d.accuracy:<3} "
            f"vmoments={d.vanishing_moments:<3} flatness={d.flatness:<3} "
            f"lowpass={'y' if d.is_lowpass else 'n'} "
            f"interpolatory={'y' if d.is_interpolatory else 'n'}")


def cmd_verify(args) -> int:
    bank = bank_from_json(_load_json(args.bank), cross_check=False)
    if args.dump_polyphase:
        from .filterbank import bank_polyphase_matrices
        from .polyphase import matrix_to_json
        A, S = bank_polyphase_matrices(bank)
        _dump_json(args.dump_polyphase,
                   {"A": matrix_to_json(A), "S": matrix_to_json(S)})
    ver = verify_combined_biorthogonality(bank)
    interp = is_interpolatory(bank.tau_d)
    biorth = is_biorthogonal(bank.tau, bank.tau_d)
    rep = bank_report(bank, args.max_order)

    checks = [
        ("combined biorthogonality (S.A = (1/q) I)", ver.passed, ver.describe()),
        ("tau_d interpolatory", interp, ""),
        ("(tau, tau_d) biorthogonal", biorth, ""),
        ("vanishing-moment floor respected", not rep.floor_violations,
         "; ".join(rep.floor_violations)),
    ]
    ok = True
    for label, passed, detail in checks:
        ok = ok and passed
        line = f"{'PASS' if passed else 'FAIL'}  {label}"
        if detail and not passed:
            line += f"  [{detail}]"
        print(line)
    print(f"guarantee floor: {rep.guarantee_floor}")
    print("diagnostics:")
    for fr in rep.filters:
        print(_diag_row(fr.name, fr.nu, fr.diag))
    if args.json:
        _dump_json(args.json, {
            "checks": {label: passed for label, passed, _ in checks},
            "guarantee_floor": rep.guarantee_floor,
            "floor_violations": rep.floor_violations,
            "diagnostics": [{
                "name": fr.name,
                "nu": None if fr.nu is None else list(fr.nu),
                "support": fr.diag.support_size,
                "accuracy": fr.diag.accuracy,
                "vanishing_moments": fr.diag.vanishing_moments,
                "flatness": fr.diag.flatness,
                "lowpass": fr.diag.is_lowpass,
                "interpolatory": fr.diag.is_interpolatory,
            } for fr in rep.filters],
            "passed": ok,
        })
    return 0 if ok else 1


def cmd_analyze(args) -> int:
    bank = bank_from_json(_load_json(args.bank))
    y = dataio.read_tensor(args.input)
    coeffs = decompose_fast(y, bank, args.levels)
    dataio.write_coeffs(args.output, coeffs)
    print(f"analyzed {args.input} shape={'x'.join(map(str, y.shape))} "
          f"levels={args.levels} -> {args.output}")
    report = {"input": args.input, "output": args.output,
              "shape": list(y.shape), "levels": args.levels}
    if args.oracle:
        ref = decompose_direct(y, bank, args.levels)
        dev = coeffs.coarse.max_abs_diff(ref.coarse)
        for key, t in coeffs.details.items():
            dev = max(dev, t.max_abs_diff(ref.details[key]))
        print(f"oracle cross-check: max abs deviation from direct transform = {dev:.3e}")
        report["oracle_max_abs_deviation"] = dev
    if args.json:
        _dump_json(args.json, report)
    return 0


def cmd_synthesize(args) -> int:
    bank = bank_from_json(_load_json(args.bank))
    coeffs = dataio.read_coeffs(args.input, bank)
    if args.levels is not None and args.levels != coeffs.levels:
        raise PcswaveError(f"--levels {args.levels} does not match file ({coeffs.levels})")
    y = reconstruct_fast(coeffs, bank)
    dataio.write_tensor(args.output, y)
    print(f"synthesized {args.input} levels={coeffs.levels} -> {args.output} "
          f"shape={'x'.join(map(str, y.shape))}")
    report = {"input": args.input, "output": args.output,
              "shape": list(y.shape), "levels": coeffs.levels}
    if args.check_against:
        ref = dataio.read_tensor(args.check_against)
        err = y.max_abs_diff(ref)
        scale = float(np.max(np.abs(ref.data))) or 1.0
        print(f"round-trip check vs {args.check_against}: max abs error = {err:.3e} "
              f"({err / scale:.3e} of peak)")
        report["max_abs_error"] = err
    if args.json:
        _dump_json(args.json, report)
    return 0


def _parse_shape(text: str):
    try:
        shape = tuple(int(s) for s in text.lower().replace(",", "x").split("x"))
    except ValueError as exc:
        raise PcswaveError(f"bad shape {text!r}; use e.g. 81x81") from exc
    if not shape or any(s < 1 for s in shape):
        raise PcswaveError(f"bad shape {text!r}")
    return shape


def cmd_bench(args) -> int:
    bank = bank_from_json(_load_json(args.bank))
    shape = _parse_shape(args.shape)
    if len(shape) != bank.n:
        raise PcswaveError(f"shape {args.shape} is {len(shape)}-D, bank is {bank.n}-D")
    oc = count_ops(bank, shape, args.levels)
    per_sample = Fraction(oc.multiplicative_ops, oc.data_points)
    print(f"shape={'x'.join(map(str, shape))} levels={oc.levels} "
          f"alpha={oc.alpha} beta={oc.beta} alpha_tilde={oc.alpha_tilde}")
    print(f"measured multiplicative ops: {oc.multiplicative_ops}")
    print(f"predicted (closed form):     {oc.predicted} "
          f"[{'match' if oc.predicted == oc.multiplicative_ops else 'MISMATCH'}]")
    print(f"per-sample constant (1 cycle): {oc.pcs_constant} "
          f"~= {float(oc.pcs_constant):.3f}")
    report = {"shape": list(shape), "levels": oc.levels,
              "alpha": oc.alpha, "beta": oc.beta, "alpha_tilde": oc.alpha_tilde,
              "measured": oc.multiplicative_ops, "predicted": str(oc.predicted),
              "per_sample_measured": str(per_sample),
              "pcs_constant": str(oc.pcs_constant)}
    if args.compare_tensor_model:
        print(f"tensor-product model per sample: (alpha+beta)*n = {oc.tensor_model}")
        report["tensor_model"] = str(oc.tensor_model)
        if bank.p == 2:
            c_pcs = oc.alpha + 2 * oc.beta + 2
            c_tp = (oc.alpha + oc.beta) * bank.n
            rel = "<=" if c_pcs <= c_tp else ">"
            print(f"dyadic bound: C_PCS = alpha+2*beta+2 = {c_pcs} {rel} "
                  f"C_TP = (alpha+beta)*n = {c_tp}")
            report["c_pcs"] = c_pcs
            report["c_tp"] = c_tp
    if args.json:
        _dump_json(args.json, report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pcswave",
        description="Non-separable wavelet filter banks from 1-D filters via "
                    "the prime coset sum, with exact verification and fast "
                    "n-D transforms.")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="build a bank from two 1-D lowpass filters")
    d.add_argument("--p", type=int, required=True, help="prime dilation")
    d.add_argument("--dim", type=int, required=True, help="spatial dimension n")
    d.add_argument("--g", required=True, help="path to the 1-D filter G (JSON)")
    d.add_argument("--h", required=True, help="path to the interpolatory 1-D filter H (JSON)")
    d.add_argument("--gamma", choices=["standard", "centered"], default="standard")
    d.add_argument("-o", "--output", required=True, help="bank JSON output path")
    d.add_argument("--max-order", type=int, default=20, dest="max_order")
    d.add_argument("--json", help="write a JSON summary to this path")
    d.set_defaults(func=cmd_design)

    v = sub.add_parser("verify", help="verify a bank's exact identities")
    v.add_argument("bank", help="bank JSON path")
    v.add_argument("--max-order", type=int, default=20, dest="max_order")
    v.add_argument("--json", help="write a JSON report to this path")
    v.add_argument("--dump-polyphase", dest="dump_polyphase",
                   help="write the bank's A and S term maps to this path")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="decompose a PCST tensor into PCSC subbands")
    a.add_argument("--bank", required=True)
    a.add_argument("--levels", type=int, required=True)
    a.add_argument("input", help="PCST input path")
    a.add_argument("-o", "--output", required=True, help="PCSC output path")
    a.add_argument("--oracle", action="store_true",
                   help="cross-check against the direct filter-and-resample transform")
    a.add_argument("--json", help="write a JSON summary to this path")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synthesize", help="reconstruct a PCST tensor from PCSC subbands")
    s.add_argument("--bank", required=True)
    s.add_argument("--levels", type=int, default=None,
                   help="optional consistency check against the file header")
    s.add_argument("input", help="PCSC input path")
    s.add_argument("-o", "--output", required=True, help="PCST output path")
    s.add_argument("--check-against", dest="check_against",
                   help="PCST reference to compare the reconstruction with")
    s.add_argument("--json", help="write a JSON summary to this path")
    s.set_defaults(func=cmd_synthesize)

    b = sub.add_parser("bench", help="count multiplicative ops against the closed form")
    b.add_argument("--bank", required=True)
    b.add_argument("--shape", required=True, help="e.g. 81x81")
    b.add_argument("--levels", type=int, default=1)
    b.add_argument("--compare-tensor-model", action="store_true")
    b.add_argument("--json", help="write a JSON report to this path")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PcswaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
