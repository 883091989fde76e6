"""Command-line verification surface.

Subcommands: validate, invariants, theta-eval, wf-eval, heisenberg,
gram-center, gram-manybody, verify-all.  Input documents follow the
canonical schema of :mod:`torushall.serialize`; all numeric output is
deterministic for a fixed configuration and seed.  Exit status: 0 when
every reported check passes, 1 when any check fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from pathlib import Path

import numpy as np

from . import bundles, checks, gram, heisenberg, wavefunctions, wen
from .serialize import (
    InputDocument,
    SchemaError,
    complex_to_pair,
    load_input,
    render_checks_human,
    render_json,
)
from .theta import NonconvergentModulusError, TorusParams, jacobi_theta

SCHEMA_VERSION = 1


def _default_n(K: wen.WenMatrix) -> tuple[int, ...]:
    """Smallest particle vector proportional to the adjugate row sums."""
    sums = [sum(row) for row in K.adjugate]
    g0 = gcd(*sums)
    return tuple(x // g0 for x in sums)


def _document(args) -> InputDocument:
    if not getattr(args, "input", None):
        raise SchemaError("this command requires --input")
    return load_input(args.input)


def _resolve(doc: InputDocument):
    K = wen.validate_wen_matrix(doc.K)
    n_vec = doc.n if doc.n is not None else _default_n(K)
    datum = wen.validate_wen_datum(K, n_vec)
    tau = doc.tau if doc.tau is not None else 1j
    xi = doc.xi if doc.xi is not None else (0j,) * K.g
    if len(xi) != K.g:
        raise SchemaError(f'"xi" must have {K.g} entries')
    return K, datum, complex(tau), tuple(xi)


def _emit(args, payload: dict, human: str) -> None:
    if args.format == "json":
        payload["schema_version"] = SCHEMA_VERSION
        print(render_json(payload))
    else:
        print(human)


def _finish_checks(args, command: str, records: list[dict]) -> int:
    ok = all(c["verdict"] == "PASS" for c in records)
    payload = {"command": command, "checks": records, "all_pass": ok}
    _emit(args, payload, render_checks_human(records))
    return 0 if ok else 1


def cmd_validate(args) -> int:
    doc = _document(args)
    K = wen.validate_wen_matrix(doc.K)
    lines = [
        f"valid coupling matrix ({K.g} layers)",
        f"delta = {K.delta}, rho = {K.rho}, statistics = "
        + ("bosonic (+1)" if K.epsilon == 1 else "fermionic (-1)"),
        "u = (" + ", ".join(str(x) for x in K.u) + ")",
        f"primary = {K.primary}",
    ]
    payload = {
        "command": "validate",
        "delta": K.delta,
        "rho": K.rho,
        "epsilon": K.epsilon,
        "u": [str(x) for x in K.u],
        "primary": K.primary,
    }
    if doc.n is not None:
        datum = wen.validate_wen_datum(K, doc.n)
        lines.append(f"datum: d = {datum.d}, n = {datum.n}")
        payload["d"] = datum.d
        payload["n_total"] = datum.n
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_invariants(args) -> int:
    doc = _document(args)
    K = wen.validate_wen_matrix(doc.K)
    inv = bundles.restricted_invariants(K)
    grp = wen.pi_group(K)
    tau = doc.tau if doc.tau is not None else 1j
    offset = bundles.max_pairing_offset(K, tau)
    lines = [
        f"delta = {K.delta}, rho = {K.rho}, primary = {K.primary}",
        f"invariant factors: {list(grp.invariant_factors)}",
        f"rank = {inv.rank}, degree = {inv.degree}, slope = {inv.slope_display}",
        f"stable = {inv.stable}",
        "total Chern coefficients: "
        + ", ".join(f"c{i}: {c}" for i, c in enumerate(inv.total_chern)),
        "c1 coefficient matrix (units -i/(2t)): "
        + "; ".join(" ".join(str(x) for x in row) for row in inv.c1_coeff),
        f"dual pairing max offset at tau = {tau}: {offset:.3e}",
    ]
    if inv.jain_params:
        p, g = inv.jain_params
        lines.append(f"standard family (p={p}, g={g}); filling fraction {bundles.jain_fraction(p, g)}")
    payload = {
        "command": "invariants",
        "delta": K.delta,
        "rho": K.rho,
        "primary": K.primary,
        "invariant_factors": list(grp.invariant_factors),
        "rank": inv.rank,
        "degree": inv.degree,
        "slope": inv.slope_display,
        "slope_reduced": str(inv.slope),
        "stable": inv.stable,
        "total_chern": [str(c) for c in inv.total_chern],
        "c1_coeff": [list(r) for r in inv.c1_coeff],
        "dual_pairing_offset": offset,
        "jain": list(inv.jain_params) if inv.jain_params else None,
    }
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_theta_eval(args) -> int:
    tau = TorusParams(complex(args.tau[0], args.tau[1]))
    z = complex(args.z[0], args.z[1])
    val = jacobi_theta(args.a, args.b, z, tau, args.tol)
    payload = {
        "command": "theta-eval",
        "value": complex_to_pair(val),
        "modulus": abs(val),
        "phase": float(np.angle(val)),
    }
    human = (
        f"theta[{args.a}, {args.b}]({z} | {tau.tau}) = {complex_to_pair(val)}\n"
        f"modulus = {abs(val):.15g}\nphase = {float(np.angle(val)):.15g}"
    )
    _emit(args, payload, human)
    return 0


def _load_config(path: str, datum: wen.WenDatum) -> wavefunctions.Configuration:
    try:
        nested = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid configuration JSON: {exc}") from exc
    try:
        layers = tuple(
            tuple(complex(p[0], p[1]) for p in layer) for layer in nested
        )
    except (TypeError, IndexError) as exc:
        raise SchemaError("configuration must be nested [re, im] pairs per layer") from exc
    config = wavefunctions.Configuration(layers)
    if config.sizes != datum.n_vec:
        raise SchemaError(
            f"configuration sizes {config.sizes} do not match n = {datum.n_vec}"
        )
    return config


def cmd_wf_eval(args) -> int:
    doc = _document(args)
    K, datum, tau, xi = _resolve(doc)
    spec = wavefunctions.WaveFunctionSpec(datum=datum, xi=xi, torus=TorusParams(tau))
    grp = wen.pi_group(K)
    if not 0 <= args.c < len(grp):
        raise SchemaError(f"--c must index a coset in 0..{len(grp) - 1}")
    c = grp.elements[args.c]
    config = _load_config(args.config, datum)
    val = wavefunctions.kvw_wavefunction(spec, c, config, args.tol)
    payload = {
        "command": "wf-eval",
        "c": [str(x) for x in c],
        "value": complex_to_pair(val),
        "modulus": abs(val),
        "phase": float(np.angle(val)),
    }
    human = (
        f"Phi_c at c = ({', '.join(str(x) for x in c)}):\n"
        f"value = {complex_to_pair(val)}\nmodulus = {abs(val):.15g}\n"
        f"phase = {float(np.angle(val)):.15g}"
    )
    _emit(args, payload, human)
    return 0


def cmd_heisenberg(args) -> int:
    doc = _document(args)
    _K, datum, _tau, _xi = _resolve(doc)
    rep = heisenberg.rep_matrices(datum)
    lines = [
        f"dimension = {rep.delta}, q = zeta^{rep.q_exponent} with zeta = exp(2 pi i/{rep.delta})",
        f"q primitive: {rep.q_is_primitive()}",
        "basis: " + "; ".join("(" + ", ".join(str(x) for x in c) + ")" for c in rep.basis),
        f"T1 diagonal exponents: {list(rep.t1_exponents)}",
        f"T2 permutation (slot -> image): {list(rep.t2_permutation)}",
    ]
    payload = {
        "command": "heisenberg",
        "delta": rep.delta,
        "q_exponent": rep.q_exponent,
        "q_primitive": rep.q_is_primitive(),
        "basis": [[str(x) for x in c] for c in rep.basis],
        "t1_exponents": list(rep.t1_exponents),
        "t2_permutation": list(rep.t2_permutation),
    }
    if args.matrices:
        t1 = rep.t1_matrix()
        t2 = rep.t2_matrix()
        payload["t1_matrix"] = [[complex_to_pair(x) for x in row] for row in t1]
        payload["t2_matrix"] = [[complex_to_pair(x) for x in row] for row in t2]
        lines.append("T1 = " + np.array2string(t1, precision=6))
        lines.append("T2 = " + np.array2string(t2, precision=6))
    _emit(args, payload, "\n".join(lines))
    return 0


def _gram_payload(report: gram.GramReport) -> dict:
    return {
        "basis": list(report.basis_labels),
        "scheme": report.scheme,
        "total_points": report.total_points,
        "seed": report.seed,
        "matrix": [[complex_to_pair(x) for x in row] for row in report.matrix],
        "stderr": [[float(x) for x in row] for row in report.stderr],
        "kappa_ref": report.kappa_ref,
        "offdiag_ratio": report.offdiag_ratio,
        "diag_spread": report.diag_spread,
        "kappa_rel_err": report.kappa_rel_err,
        "hermiticity": report.hermiticity,
        "doubling_shift": report.doubling_shift,
        "offdiag_sigmas": report.offdiag_sigmas,
        "diag_pair_sigmas": report.diag_pair_sigmas,
        "scalar_pass": report.scalar_pass,
    }


def _gram_human(report: gram.GramReport, checks_: list[dict]) -> str:
    lines = [
        f"scheme = {report.scheme}, points = {report.total_points}"
        + (f", seed = {report.seed}" if report.seed is not None else ""),
        "basis: " + "; ".join(report.basis_labels),
    ]
    for i, row in enumerate(report.matrix):
        lines.append(
            "row %d: " % i + "  ".join(f"{x.real:+.9e}{x.imag:+.9e}j" for x in row)
        )
    lines.append(render_checks_human(checks_))
    return "\n".join(lines)


def cmd_gram_center(args) -> int:
    doc = _document(args)
    K, _datum, tau, xi = _resolve(doc)
    quad = gram.QuadratureSpec(points_per_axis=args.points, seed=args.seed)
    report = gram.gram_center(K, xi, tau, quad)
    records = [
        {
            "name": "gram.center_orthogonal",
            "law": "distinct basis thetas are orthogonal",
            "measured": report.offdiag_ratio,
            "threshold": args.tol_gram,
            "verdict": "PASS" if report.offdiag_ratio < args.tol_gram else "FAIL",
        },
        {
            "name": "gram.center_kappa",
            "law": "diagonal equals the closed-form Gaussian norm",
            "measured": report.kappa_rel_err,
            "threshold": 1e-6,
            "verdict": "PASS" if report.kappa_rel_err < 1e-6 else "FAIL",
        },
    ]
    payload = {"command": "gram-center", "checks": records, **_gram_payload(report)}
    _emit(args, payload, _gram_human(report, records))
    return 0 if all(c["verdict"] == "PASS" for c in records) else 1


def cmd_gram_manybody(args) -> int:
    doc = _document(args)
    K, datum, tau, xi = _resolve(doc)
    spec = wavefunctions.WaveFunctionSpec(datum=datum, xi=xi, torus=TorusParams(tau))
    quad = gram.QuadratureSpec(
        scheme=args.scheme,
        points_per_axis=args.points,
        samples=args.samples,
        seed=args.seed,
    )
    report = gram.gram_manybody(spec, quad, tol=args.tol)
    records = []
    if report.scalar_pass is not None:
        records.append(
            {
                "name": "gram.manybody_scalar",
                "law": "Gram matrix of the many-body basis is scalar",
                "measured": max(report.offdiag_ratio, report.diag_spread),
                "threshold": 0.02,
                "verdict": "PASS" if report.scalar_pass else "FAIL",
            }
        )
    payload = {"command": "gram-manybody", "checks": records, **_gram_payload(report)}
    _emit(args, payload, _gram_human(report, records))
    return 0 if all(c["verdict"] == "PASS" for c in records) else 1


def cmd_verify_all(args) -> int:
    doc = _document(args)
    K, datum, tau, xi = _resolve(doc)
    records = checks.run_verify_all(
        K, datum.n_vec, tau, xi, seed=args.seed, points=args.points
    )
    return _finish_checks(args, "verify-all", records)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torushall",
        description="Verification suite for multilayer torus Hall states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="input document (JSON or matrix text)")
        p.add_argument("--tol", type=float, default=1e-12, help="series tolerance")
        p.add_argument("--points", type=int, default=48, help="quadrature points per axis")
        p.add_argument("--samples", type=int, default=1 << 20, help="QMC sample total")
        p.add_argument("--seed", type=int, default=0, help="QMC scrambling seed")
        p.add_argument(
            "--format", choices=("human", "json"), default="human", help="output format"
        )

    common(sub.add_parser("validate", help="validate a coupling matrix / datum"))
    common(sub.add_parser("invariants", help="exact bundle and group invariants"))

    p = sub.add_parser("theta-eval", help="evaluate theta[a,b](z | tau)")
    common(p, needs_input=False)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--z", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"))
    p.add_argument("--tau", type=float, nargs=2, default=(0.0, 1.0), metavar=("RE", "IM"))

    p = sub.add_parser("wf-eval", help="evaluate a many-body wave function")
    common(p)
    p.add_argument("--c", type=int, default=0, help="coset index (lexicographic)")
    p.add_argument("--config", required=True, help="configuration JSON (nested [re, im])")

    p = sub.add_parser("heisenberg", help="magnetic-translation matrices")
    common(p)
    p.add_argument("--matrices", action="store_true", help="include floating matrices")

    p = sub.add_parser("gram-center", help="center-of-mass Gram matrix")
    common(p)
    p.add_argument("--tol-gram", type=float, default=1e-8, help="orthogonality threshold")

    p = sub.add_parser("gram-manybody", help="many-body Gram matrix")
    common(p)
    p.add_argument("--scheme", choices=("auto", "tensor-gauss", "qmc"), default="auto")

    common(sub.add_parser("verify-all", help="run the composed verification suite"))
    return parser


HANDLERS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "theta-eval": cmd_theta_eval,
    "wf-eval": cmd_wf_eval,
    "heisenberg": cmd_heisenberg,
    "gram-center": cmd_gram_center,
    "gram-manybody": cmd_gram_manybody,
    "verify-all": cmd_verify_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except (
        SchemaError,
        wen.WenValidationError,
        NonconvergentModulusError,
        FileNotFoundError,
    ) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
