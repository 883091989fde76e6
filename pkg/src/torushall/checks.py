"""Composed verification checks behind the verify-all command.

Each check exercises one law at desk scale and returns a record with the
measured defect, the threshold, and a PASS/FAIL verdict.  Laws are named
by self-describing identifiers so a FAIL line states which identity broke.
All randomness is seeded, so output is deterministic for a fixed seed.
"""

from __future__ import annotations

from math import gcd

import numpy as np

from . import bundles, gram, heisenberg, wavefunctions, wen
from .serialize import check_record
from .theta import (
    OmegaMatrix,
    ThetaCharacteristics,
    TorusParams,
    jacobi_theta,
    riemann_theta,
    theta_odd,
)


def _residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def check_theta_laws(seed: int = 0, samples: int = 100, tol: float = 1e-12) -> list[dict]:
    rng = np.random.default_rng(seed)
    worst_shift1 = worst_shift_tau = worst_odd = 0.0
    for _ in range(samples):
        tau = TorusParams(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2.0)))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        a, b = rng.uniform(-0.5, 0.5, size=2)
        base = jacobi_theta(a, b, z, tau, tol)
        lhs1 = jacobi_theta(a, b, z + 1, tau, tol)
        worst_shift1 = max(worst_shift1, _residual(lhs1, np.exp(2j * np.pi * a) * base))
        lhs2 = jacobi_theta(a, b, z + tau.tau, tau, tol)
        fac = np.exp(-2j * np.pi * (z + b) - 1j * np.pi * tau.tau)
        worst_shift_tau = max(worst_shift_tau, _residual(lhs2, fac * base))
        worst_odd = max(worst_odd, abs(theta_odd(z, tau, tol) + theta_odd(-z, tau, tol)))
    zero = max(
        abs(theta_odd(0.0, TorusParams(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2.0))), tol))
        for _ in range(10)
    )
    return [
        check_record(
            "theta.shift_one",
            "theta[a,b](z+1) = exp(2 pi i a) theta[a,b](z)",
            worst_shift1,
            1e-11,
            worst_shift1 < 1e-11,
        ),
        check_record(
            "theta.shift_tau",
            "theta[a,b](z+tau) = exp(-2 pi i (z+b) - pi i tau) theta[a,b](z)",
            worst_shift_tau,
            1e-11,
            worst_shift_tau < 1e-11,
        ),
        check_record(
            "theta.odd_zero", "theta_odd(0) = 0", zero, 1e-12, zero < 1e-12
        ),
        check_record(
            "theta.oddness", "theta_odd(-z) = -theta_odd(z)", worst_odd, 1e-12, worst_odd < 1e-12
        ),
    ]


def random_omega(rng: np.random.Generator, g: int) -> OmegaMatrix:
    m = rng.uniform(-0.5, 0.5, size=(g, g))
    y = m @ m.T + np.eye(g) * rng.uniform(0.6, 1.4)
    s = rng.uniform(-0.4, 0.4, size=(g, g))
    return OmegaMatrix.create((s + s.T) / 2 + 1j * y)


def check_multitheta_laws(seed: int = 0, samples: int = 20, tol: float = 1e-12) -> list[dict]:
    rng = np.random.default_rng(seed)
    worst1 = worst2 = worst_fac = 0.0
    for g in (1, 2, 3):
        for _ in range(samples):
            om = random_omega(rng, g)
            chars = ThetaCharacteristics(
                a=tuple(rng.uniform(-0.5, 0.5, size=g)),
                b=tuple(rng.uniform(-0.5, 0.5, size=g)),
            )
            z = rng.uniform(-0.5, 0.5, size=g) + 1j * rng.uniform(-0.5, 0.5, size=g)
            l = rng.integers(-1, 2, size=g).astype(float)
            base = riemann_theta(chars, z, om, tol)
            a = np.asarray(chars.a)
            b = np.asarray(chars.b)
            lhs = riemann_theta(chars, z + l, om, tol)
            worst1 = max(worst1, _residual(lhs, np.exp(2j * np.pi * (a @ l)) * base))
            lhs = riemann_theta(chars, z + om.omega @ l, om, tol)
            fac = np.exp(-2j * np.pi * (l @ (z + b)) - 1j * np.pi * (l @ om.omega @ l))
            worst2 = max(worst2, _residual(lhs, fac * base))
        # diagonal factorization
        for _ in range(5):
            diag = rng.uniform(-0.4, 0.4, size=g) + 1j * rng.uniform(0.6, 1.6, size=g)
            omd = OmegaMatrix.create(np.diag(diag))
            chars = ThetaCharacteristics(
                a=tuple(rng.uniform(-0.5, 0.5, size=g)),
                b=tuple(rng.uniform(-0.5, 0.5, size=g)),
            )
            z = rng.uniform(-0.5, 0.5, size=g) + 1j * rng.uniform(-0.5, 0.5, size=g)
            whole = riemann_theta(chars, z, omd, tol)
            prod = 1.0 + 0.0j
            for j in range(g):
                prod *= jacobi_theta(
                    chars.a[j], chars.b[j], z[j], TorusParams(complex(diag[j])), tol
                )
            worst_fac = max(worst_fac, abs(whole - prod) / max(1.0, abs(whole)))
    return [
        check_record(
            "mtheta.shift_lattice",
            "Theta[a,b](z+l) = exp(2 pi i a.l) Theta[a,b](z)",
            worst1,
            1e-10,
            worst1 < 1e-10,
        ),
        check_record(
            "mtheta.shift_omega",
            "Theta[a,b](z+Omega l) = exp(-2 pi i l.(z+b) - pi i l.Omega l) Theta",
            worst2,
            1e-10,
            worst2 < 1e-10,
        ),
        check_record(
            "mtheta.diag_factor",
            "diagonal Omega: Theta factorizes into one-variable thetas",
            worst_fac,
            1e-11,
            worst_fac < 1e-11,
        ),
    ]


def check_wen_exactness(pmax: int = 6, gmax: int = 6) -> list[dict]:
    ok_inv = ok_adj = ok_pi = True
    for p in range(1, pmax + 1):
        for g in range(1, gmax + 1):
            K = wen.jain_matrix(p, g)
            ok_inv &= (
                K.delta == p * g + 1
                and K.rho == g
                and K.primary
                and all(x == wen.Fraction(1, K.delta) for x in K.u)
            )
            for i in range(g):
                for j in range(g):
                    want = K.delta - p if i == j else -p
                    ok_adj &= K.adjugate[i][j] == want
            if g <= 4:
                grp = wen.pi_group(K)
                prod = 1
                for f in grp.invariant_factors:
                    prod *= f
                ok_pi &= len(grp) == K.delta and prod == K.delta
    return [
        check_record(
            "wen.family_invariants",
            "det = p g + 1, adjugate sum = g, gcd = 1, u = e/delta",
            0.0 if ok_inv else 1.0,
            0.5,
            ok_inv,
        ),
        check_record(
            "wen.adjugate_entries",
            "adjugate has delta - p on the diagonal and -p off it",
            0.0 if ok_adj else 1.0,
            0.5,
            ok_adj,
        ),
        check_record(
            "wen.group_order",
            "|Pi| = delta = product of invariant factors",
            0.0 if ok_pi else 1.0,
            0.5,
            ok_pi,
        ),
    ]


def check_heisenberg(datum: wen.WenDatum) -> list[dict]:
    K = datum.matrix
    rep = heisenberg.rep_matrices(datum)
    try:
        rep.verify_relations()
        relations_ok = True
    except AssertionError:
        relations_ok = False
    t1 = rep.t1_matrix()
    t2 = rep.t2_matrix()
    unit = max(
        float(np.max(np.abs(t1 @ t1.conj().T - np.eye(K.delta)))),
        float(np.max(np.abs(t2 @ t2.conj().T - np.eye(K.delta)))),
    )
    prim_ok = rep.q_is_primitive() == K.primary
    out = [
        check_record(
            "heisenberg.relations",
            "T1^delta = T2^delta = 1 and T1 T2 = q T2 T1 (exponent arithmetic)",
            0.0 if relations_ok else 1.0,
            0.5,
            relations_ok,
        ),
        check_record(
            "heisenberg.unitarity", "T_i are unitary", unit, 1e-14, unit < 1e-14
        ),
        check_record(
            "heisenberg.primitivity",
            "q = exp(2 pi i rho/delta) primitive iff gcd(delta, rho) = 1",
            0.0 if prim_ok else 1.0,
            0.5,
            prim_ok,
        ),
    ]
    if K.delta <= 7:
        norm = heisenberg.irreducibility_norm(K)
        out.append(
            check_record(
                "heisenberg.character_norm",
                "(chi, chi) = 1 for the standard representation",
                abs(norm - 1.0),
                1e-10,
                abs(norm - 1.0) < 1e-10,
            )
        )
    return out


def check_gram_center(
    K: wen.WenMatrix, xi, tau, points: int = 32
) -> list[dict]:
    report = gram.gram_center(K, xi, tau, gram.QuadratureSpec(points_per_axis=points))
    return [
        check_record(
            "gram.center_orthogonal",
            "distinct basis thetas are orthogonal",
            report.offdiag_ratio,
            1e-8,
            report.offdiag_ratio < 1e-8,
        ),
        check_record(
            "gram.center_scalar",
            "all basis norms agree",
            report.diag_spread,
            1e-8,
            report.diag_spread < 1e-8,
        ),
        check_record(
            "gram.center_kappa",
            "diagonal equals the closed-form Gaussian norm",
            report.kappa_rel_err,
            1e-6,
            report.kappa_rel_err < 1e-6,
        ),
    ]


def check_kvw_quasi_periodicity(
    spec: wavefunctions.WaveFunctionSpec, seed: int = 0, samples: int = 10
) -> list[dict]:
    rng = np.random.default_rng(seed)
    grp = wen.pi_group(spec.datum.matrix)
    worst1 = worst_tau = 0.0
    for _ in range(samples):
        config = wavefunctions.random_configuration(spec.datum, rng)
        c = grp.elements[rng.integers(0, len(grp))]
        base = wavefunctions.kvw_wavefunction(spec, c, config)
        k = int(rng.integers(0, spec.g))
        p = int(rng.integers(0, spec.datum.n_vec[k]))
        z = config.layers[k][p]
        shifted = wavefunctions.kvw_wavefunction(spec, c, config.shift_one(k, p, 1.0))
        fac = wavefunctions.lattice_shift_factor(spec, k, z, "1")
        worst1 = max(worst1, _residual(shifted, fac * base))
        shifted = wavefunctions.kvw_wavefunction(
            spec, c, config.shift_one(k, p, spec.torus.tau)
        )
        fac = wavefunctions.lattice_shift_factor(spec, k, z, "tau")
        worst_tau = max(worst_tau, _residual(shifted, fac * base))
    return [
        check_record(
            "wavefn.shift_one",
            "moving one coordinate by 1 multiplies Phi_c by the sector sign",
            worst1,
            1e-9,
            worst1 < 1e-9,
        ),
        check_record(
            "wavefn.shift_tau",
            "moving one coordinate by tau multiplies Phi_c by sign*exp(-2 pi i xi_k)*phi(z)^d",
            worst_tau,
            1e-9,
            worst_tau < 1e-9,
        ),
    ]


def check_magnetic_action(
    spec: wavefunctions.WaveFunctionSpec, seed: int = 0, samples: int = 10
) -> list[dict]:
    rng = np.random.default_rng(seed)
    grp = wen.pi_group(spec.datum.matrix)
    configs = [wavefunctions.random_configuration(spec.datum, rng) for _ in range(samples)]
    worst_t1 = max(
        wavefunctions.magnetic_action_residual(spec, c, "t1", configs)
        for c in grp.elements
    )
    worst_t2 = max(
        wavefunctions.magnetic_action_residual(spec, c, "t2", configs)
        for c in grp.elements
    )
    return [
        check_record(
            "magnetic.t1_eigenvalue",
            "T1 Phi_c = upsilon(u, c) Phi_c",
            worst_t1,
            1e-9,
            worst_t1 < 1e-9,
        ),
        check_record(
            "magnetic.t2_shift",
            "T2 Phi_c = Phi_{c+u}",
            worst_t2,
            1e-9,
            worst_t2 < 1e-9,
        ),
    ]


def check_bundle_exactness(K: wen.WenMatrix, tau) -> list[dict]:
    inv = bundles.restricted_invariants(K)
    exact_ok = (
        inv.slope * inv.rank == inv.degree
        and inv.degree == -K.rho
        and inv.rank == K.delta
        and inv.stable == (gcd(K.delta, K.rho) == 1)
    )
    offset = bundles.max_pairing_offset(K, tau)
    return [
        check_record(
            "bundle.slope_exact",
            "slope * rank = degree = -rho, stable iff gcd(delta, rho) = 1",
            0.0 if exact_ok else 1.0,
            0.5,
            exact_ok,
        ),
        check_record(
            "bundle.dual_pairing",
            "dual and primal lattice generators pair integrally",
            offset,
            1e-12,
            offset < 1e-12,
        ),
    ]


def run_verify_all(
    K: wen.WenMatrix,
    n_vec,
    tau,
    xi,
    seed: int = 0,
    points: int = 32,
) -> list[dict]:
    """The full composed suite on one datum, at desk-scale sizes."""
    checks: list[dict] = []
    checks += check_theta_laws(seed=seed, samples=40)
    checks += check_multitheta_laws(seed=seed, samples=8)
    checks += check_wen_exactness(pmax=4, gmax=4)
    datum = wen.validate_wen_datum(K, n_vec)
    checks += check_heisenberg(datum)
    checks += check_gram_center(K, xi, tau, points=points)
    spec = wavefunctions.WaveFunctionSpec(
        datum=datum, xi=tuple(xi), torus=TorusParams(complex(tau))
    )
    checks += check_kvw_quasi_periodicity(spec, seed=seed)
    if K.delta <= 5:
        checks += check_magnetic_action(spec, seed=seed, samples=6)
    checks += check_bundle_exactness(K, tau)
    return checks
