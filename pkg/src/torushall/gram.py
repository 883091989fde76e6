"""Hermitian metrics, scalar products by quadrature, and Gram verification.

On the center-of-mass torus, sections are weighed by

    h(z) = exp(-2 pi t (y, K y + 2 a)),   z = x + tau y,  xi = b + tau a,

and the scalar product is the integral of h * F1 * conj(F2) over the unit
box [0, 1]^{2g} in (x, y).  The distinguished theta basis is orthogonal
with the common norm

    kappa(xi) = (2 t)^{-g/2} delta^{-1/2} exp(2 pi t (a, K^{-1} a)),

the value of the Gaussian integral obtained by unfolding the lattice sum
(for g = 1 this is the familiar (2 t delta)^{-1/2} exp(2 pi t a^2 / k)).

Center-of-mass Gram matrices are computed by tensor Gauss-Legendre
quadrature; the basis functions are evaluated on the grid through the
separable structure of the theta series (every lattice term is a product
of per-axis phase vectors), which turns the grid evaluation into one
complex matrix product per basis element.  Many-body Gram matrices use
either tensor quadrature (small particle numbers) or replicated scrambled
Sobol sampling with replicate-mean standard errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.stats import qmc

from .theta import OmegaMatrix, TorusParams, _tail_halfwidth
from .wavefunctions import WaveFunctionSpec, jastrow_batch, center_basis_batch
from .wen import PiElement, WenMatrix, pi_group, pi_scale

DEFAULT_TOL = 1e-12


class QuadratureTooCoarseError(RuntimeError):
    """Halving the per-axis points moved the result by more than the tolerance."""


class SamplingBudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """How to integrate: tensor Gauss-Legendre or scrambled Sobol.

    scheme 'auto' picks the tensor grid when points_per_axis**dim stays
    within budget and falls back to QMC otherwise.  QMC totals are split
    into ``replicates`` independently scrambled streams whose spread gives
    the standard error.
    """

    scheme: str = "auto"
    points_per_axis: int = 48
    samples: int = 1 << 20
    seed: int = 0
    replicates: int = 16
    budget: int = 1 << 26

    def __post_init__(self) -> None:
        if self.scheme not in ("auto", "tensor-gauss", "qmc"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if min(self.points_per_axis, self.samples, self.replicates, self.budget) <= 0:
            raise ValueError("quadrature sizes must be positive")


@dataclass
class GramReport:
    """Measured Gram matrix with error estimates and scalarness diagnostics.

    ``stderr`` is zero for tensor quadrature and the replicate-mean standard
    error (combined real/imaginary) for QMC.  ``offdiag_ratio`` is the largest
    off-diagonal magnitude over the mean diagonal; ``diag_spread`` the diagonal
    peak-to-peak over the mean.  Sigma-normalized versions are present for QMC
    runs only.
    """

    matrix: np.ndarray
    stderr: np.ndarray
    basis_labels: tuple[str, ...]
    scheme: str
    total_points: int
    seed: int | None
    kappa_ref: float | None
    offdiag_ratio: float
    diag_spread: float
    kappa_rel_err: float | None
    hermiticity: float
    doubling_shift: float | None = None
    offdiag_sigmas: float | None = None
    diag_pair_sigmas: float | None = None
    scalar_pass: bool | None = None


# ---------------------------------------------------------------------------
# metric weights


def decompose(z, tau: TorusParams | complex):
    """Real coordinates (x, y) of z = x + tau y."""
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    zz = np.asarray(z, dtype=complex)
    y = zz.imag / tp.t
    x = zz.real - tp.s * y
    return x, y


def metric_weight_1d(k: int, xi: complex, tau: TorusParams | complex, z):
    """exp(-2 pi k t y^2 - 4 pi a t y) with z = x + tau y, xi = b + tau a."""
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    _, y = decompose(z, tp)
    a = complex(xi).imag / tp.t
    return np.exp(-2 * np.pi * k * tp.t * y**2 - 4 * np.pi * a * tp.t * y)


def metric_weight_g(K: WenMatrix, xi, tau: TorusParams | complex, z):
    """exp(-2 pi t (y, K y + 2 a)) for z an (..., g) array."""
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    zz = np.asarray(z, dtype=complex)
    _, y = decompose(zz, tp)
    a = np.asarray(xi, dtype=complex).imag / tp.t
    kmat = np.array(K.entries, dtype=float)
    quad = np.einsum("...i,ij,...j->...", y, kmat, y)
    return np.exp(-2 * np.pi * tp.t * (quad + 2 * y @ a))


def kappa_closed_form(K: WenMatrix, xi, tau: TorusParams | complex) -> float:
    """Common squared norm of the orthogonal center-of-mass basis.

    (2 t)^{-g/2} delta^{-1/2} exp(2 pi t (a, K^{-1} a)); the Gaussian
    unfolding of the lattice sum fixes the delta power at -1/2 for every g.
    """
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    a = np.asarray(xi, dtype=complex).imag / tp.t
    kinv_a = np.linalg.solve(np.array(K.entries, dtype=float), a)
    return float(
        (2 * tp.t) ** (-K.g / 2)
        * K.delta ** (-0.5)
        * np.exp(2 * np.pi * tp.t * float(a @ kinv_a))
    )


# ---------------------------------------------------------------------------
# tensor Gauss-Legendre machinery


def gauss_nodes_01(p: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(p)
    return (x + 1) / 2, w / 2


def _tensor_grid(nodes: np.ndarray, g: int) -> np.ndarray:
    grids = np.meshgrid(*([nodes] * g), indexing="ij")
    return np.stack([gr.ravel() for gr in grids], axis=-1)


def _tensor_weights(weights: np.ndarray, g: int) -> np.ndarray:
    out = weights
    for _ in range(g - 1):
        out = np.multiply.outer(out, weights).ravel()
    return out


def inner_product_center(
    K: WenMatrix,
    xi,
    tau: TorusParams | complex,
    f1: Callable[[np.ndarray], np.ndarray],
    f2: Callable[[np.ndarray], np.ndarray],
    quad: QuadratureSpec | None = None,
    check_tol: float | None = None,
) -> complex:
    """Tensor Gauss-Legendre estimate of the weighted scalar product.

    f1, f2 must accept an (M, g) complex array of points z = x + tau y and
    return (M,) values.  With check_tol set, the estimate is recomputed at
    half the per-axis points and QuadratureTooCoarseError is raised when
    the two results differ by more than check_tol.
    """
    quad = quad or QuadratureSpec()
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))

    def estimate(p: int) -> complex:
        if p ** (2 * K.g) > quad.budget:
            raise SamplingBudgetExceededError(
                f"{p}^{2 * K.g} tensor points exceed the budget {quad.budget}"
            )
        nodes, wts = gauss_nodes_01(p)
        xg = _tensor_grid(nodes, K.g)
        yg = _tensor_grid(nodes, K.g)
        wx = _tensor_weights(wts, K.g)
        a = np.asarray(xi, dtype=complex).imag / tp.t
        kmat = np.array(K.entries, dtype=float)
        hy = np.exp(
            -2 * np.pi * tp.t * (np.einsum("ij,jk,ik->i", yg, kmat, yg) + 2 * yg @ a)
        )
        wy = _tensor_weights(wts, K.g) * hy
        total = 0.0 + 0.0j
        block = max(1, (1 << 22) // max(1, xg.shape[0]))
        for start in range(0, yg.shape[0], block):
            stop = min(start + block, yg.shape[0])
            zb = xg[None, :, :] + tp.tau * yg[start:stop, None, :]
            flat = zb.reshape(-1, K.g)
            v = (f1(flat) * np.conj(f2(flat))).reshape(stop - start, -1)
            total += wy[start:stop] @ (v @ wx)
        return complex(total)

    value = estimate(quad.points_per_axis)
    if check_tol is not None:
        coarse = estimate(max(2, quad.points_per_axis // 2))
        if abs(value - coarse) > check_tol:
            raise QuadratureTooCoarseError(
                f"halving the grid moved the result by {abs(value - coarse):.3e}"
            )
    return value


# ---------------------------------------------------------------------------
# center-of-mass Gram (separable fast path)


def _center_basis_grid(
    K: WenMatrix,
    xi,
    tau: TorusParams,
    cs: Sequence[PiElement],
    xnodes: np.ndarray,
    tol: float,
):
    """Values of every H_c on the tensor grid (x_i, y_j), as (x, y) matrices.

    Each lattice term of Theta[c,0](K(x + tau y) + xi | tau K) has integer
    frequency vector m = K(k + c), so its grid values factor into per-axis
    phase vectors; stacking terms turns the evaluation into one matrix
    product per basis element.  Yields (c, H_c-block) column blocks.
    """
    g = K.g
    kmat = np.array(K.entries, dtype=float)
    omega = OmegaMatrix.create(tp_omega := tau.tau * kmat)
    hw = _tail_halfwidth(omega.lambda_min, g, tol) + 1
    a = np.asarray(xi, dtype=complex).imag / tau.t
    kinv_a = np.linalg.solve(kmat, a)
    xiv = np.asarray(xi, dtype=complex)
    p = xnodes.size
    mgrid = p**g
    for c in cs:
        cf = np.array([float(q) for q in c])
        lo = np.floor(-cf - 1 - kinv_a).astype(int) - hw
        hi = np.ceil(-cf - kinv_a).astype(int) + hw
        axes = [np.arange(l, h + 1) for l, h in zip(lo, hi)]
        kk = np.stack([gr.ravel() for gr in np.meshgrid(*axes, indexing="ij")], axis=-1)
        ka = kk + cf[None, :]
        # integer frequencies K(k+c); exact because K c is integral
        kc = [sum(Fraction(K.entries[i][j]) * c[j] for j in range(g)) for i in range(g)]
        assert all(f.denominator == 1 for f in kc)
        m = kk @ np.array(K.entries).T + np.array([int(f) for f in kc])[None, :]
        coeff = np.exp(
            1j * np.pi * np.einsum("ij,jk,ik->i", ka, tp_omega, ka)
            + 2j * np.pi * (ka @ xiv)
        )
        px = np.ones((len(kk), 1), dtype=complex)
        py = np.ones((len(kk), 1), dtype=complex)
        for j in range(g):
            vx = np.exp(2j * np.pi * np.outer(m[:, j], xnodes))
            vy = np.exp(2j * np.pi * tau.tau * np.outer(m[:, j], xnodes))
            px = (px[:, :, None] * vx[:, None, :]).reshape(len(kk), -1)
            py = (py[:, :, None] * vy[:, None, :]).reshape(len(kk), -1)
        yield c, px, coeff[:, None] * py, mgrid


def _gram_center_at(
    K: WenMatrix,
    xi,
    tp: TorusParams,
    cs: Sequence[PiElement],
    p: int,
    tol: float,
) -> np.ndarray:
    nodes, wts = gauss_nodes_01(p)
    wx = _tensor_weights(wts, K.g)
    yg = _tensor_grid(nodes, K.g)
    kmat = np.array(K.entries, dtype=float)
    a = np.asarray(xi, dtype=complex).imag / tp.t
    hy = np.exp(-2 * np.pi * tp.t * (np.einsum("ij,jk,ik->i", yg, kmat, yg) + 2 * yg @ a))
    wy = _tensor_weights(wts, K.g) * hy
    blocks = list(_center_basis_grid(K, xi, tp, cs, nodes, tol))
    d = len(cs)
    gmat = np.zeros((d, d), dtype=complex)
    mgrid = blocks[0][3]
    step = max(1, (1 << 23) // mgrid)
    for start in range(0, mgrid, step):
        stop = min(start + step, mgrid)
        hcs = [px.T @ apy[:, start:stop] for _c, px, apy, _m in blocks]
        wyb = wy[start:stop]
        for i in range(d):
            wxh = wx @ (hcs[i] * np.conj(hcs[i]))
            gmat[i, i] += wxh @ wyb
            for j in range(i + 1, d):
                # orient each pair by basis value, not slot, so a permuted
                # ordering reproduces bit-identical estimates
                lo_, hi_ = (i, j) if cs[i] <= cs[j] else (j, i)
                val = (wx @ (hcs[lo_] * np.conj(hcs[hi_]))) @ wyb
                gmat[lo_, hi_] += val
        del hcs
    for i in range(d):
        for j in range(d):
            if i != j and gmat[i, j] == 0:
                gmat[i, j] = np.conj(gmat[j, i])
    return gmat


def _report_stats(gmat: np.ndarray):
    d = gmat.shape[0]
    diag = np.real(np.diag(gmat))
    mean_diag = float(np.mean(diag))
    off = gmat - np.diag(np.diag(gmat))
    offdiag = float(np.max(np.abs(off))) if d > 1 else 0.0
    spread = float(diag.max() - diag.min()) if d > 1 else 0.0
    herm = float(np.max(np.abs(gmat - gmat.conj().T)))
    return mean_diag, offdiag / mean_diag, spread / mean_diag, herm


def _labels(cs: Sequence[PiElement]) -> tuple[str, ...]:
    return tuple("(" + ", ".join(str(x) for x in c) + ")" for c in cs)


def gram_center(
    K: WenMatrix,
    xi,
    tau: TorusParams | complex,
    quad: QuadratureSpec | None = None,
    ordering: Sequence[PiElement] | None = None,
    tol: float = DEFAULT_TOL,
    check_tol: float | None = None,
) -> GramReport:
    """Gram matrix of the center-of-mass theta basis by tensor quadrature.

    Reports the off-diagonal/diagonal ratio, the diagonal spread, and the
    relative mismatch against the closed-form kappa, plus the shift seen
    when halving the per-axis points (a convergence indicator).
    """
    quad = quad or QuadratureSpec()
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    cs = tuple(ordering) if ordering is not None else pi_group(K).elements
    p = quad.points_per_axis
    if p ** (2 * K.g) * len(cs) > quad.budget:
        raise SamplingBudgetExceededError(
            f"grid {p}^{2 * K.g} x {len(cs)} basis functions exceeds budget {quad.budget}"
        )
    gmat = _gram_center_at(K, xi, tp, cs, p, tol)
    coarse = _gram_center_at(K, xi, tp, cs, max(2, p // 2), tol)
    shift = float(np.max(np.abs(gmat - coarse)))
    if check_tol is not None and shift > check_tol:
        raise QuadratureTooCoarseError(
            f"halving the grid moved Gram entries by {shift:.3e} > {check_tol:.3e}"
        )
    kappa = kappa_closed_form(K, xi, tp)
    mean_diag, offratio, spread, herm = _report_stats(gmat)
    return GramReport(
        matrix=gmat,
        stderr=np.zeros_like(gmat, dtype=float),
        basis_labels=_labels(cs),
        scheme="tensor-gauss",
        total_points=p ** (2 * K.g),
        seed=None,
        kappa_ref=kappa,
        offdiag_ratio=offratio,
        diag_spread=spread,
        kappa_rel_err=float(abs(mean_diag / kappa - 1.0)),
        hermiticity=herm,
        doubling_shift=shift,
    )


# ---------------------------------------------------------------------------
# many-body Gram


def _manybody_basis(spec: WaveFunctionSpec) -> tuple[PiElement, ...]:
    K = spec.datum.matrix
    if K.primary:
        u = K.u_class()
        return tuple(pi_scale(i, u) for i in range(K.delta))
    return pi_group(K).elements


def _manybody_values(
    spec: WaveFunctionSpec, pts: np.ndarray, basis: Sequence[PiElement], tol: float
):
    """Weight vector and Phi values at sample points in the unit box.

    Columns 0..n-1 of pts are the x coordinates of the particles in layer
    order, columns n..2n-1 the y coordinates; z = x + tau y.  The weight is
    the product over particles of the one-particle metric at strength d with
    the owning layer's xi.
    """
    datum = spec.datum
    tau = spec.torus
    n = datum.n
    xs = pts[:, :n]
    ys = pts[:, n:]
    zs = xs + tau.tau * ys
    a_vec, _ = spec.xi_characteristics()
    weight = np.ones(pts.shape[0])
    layers = []
    start = 0
    for k, nk in enumerate(datum.n_vec):
        yk = ys[:, start : start + nk]
        layers.append(zs[:, start : start + nk])
        weight *= np.exp(
            -2 * np.pi * datum.d * tau.t * np.sum(yk**2, axis=1)
            - 4 * np.pi * a_vec[k] * tau.t * np.sum(yk, axis=1)
        )
        start += nk
    w = np.stack([layer.sum(axis=1) for layer in layers], axis=-1)
    dfac = jastrow_batch(datum, tau, layers, tol)
    values = np.stack(
        [center_basis_batch(spec, c, w, tol) * dfac for c in basis], axis=0
    )
    return weight, values


def gram_manybody(
    spec: WaveFunctionSpec,
    quad: QuadratureSpec | None = None,
    rel_tol: float = 0.02,
    tol: float = DEFAULT_TOL,
) -> GramReport:
    """Gram matrix of the many-body basis under the product metric.

    Tensor Gauss-Legendre is used when the 2n-dimensional grid fits the
    budget, otherwise replicated scrambled Sobol sampling; QMC reports
    replicate-mean standard errors and sigma-normalized scalarness checks.
    The PASS/FAIL verdict is only asserted for primary matrices; for others
    the deviations are reported without a verdict.
    """
    quad = quad or QuadratureSpec()
    basis = _manybody_basis(spec)
    d = len(basis)
    dim = 2 * spec.datum.n
    scheme = quad.scheme
    if scheme == "auto":
        scheme = (
            "tensor-gauss" if quad.points_per_axis**dim <= quad.budget else "qmc"
        )

    if scheme == "tensor-gauss":
        total = quad.points_per_axis**dim
        if total > quad.budget:
            raise SamplingBudgetExceededError(
                f"{quad.points_per_axis}^{dim} tensor points exceed budget {quad.budget}"
            )
        nodes, wts = gauss_nodes_01(quad.points_per_axis)
        gmat = np.zeros((d, d), dtype=complex)
        step = max(1, (1 << 22) // max(1, d))
        for start in range(0, total, step):
            idx = np.arange(start, min(start + step, total))
            coords = np.stack(
                np.unravel_index(idx, (quad.points_per_axis,) * dim), axis=-1
            )
            pts = nodes[coords]
            wq = np.prod(wts[coords], axis=1)
            weight, values = _manybody_values(spec, pts, basis, tol)
            gmat += (values * (wq * weight)[None, :]) @ values.conj().T
        mean_diag, offratio, spread, herm = _report_stats(gmat)
        report = GramReport(
            matrix=gmat,
            stderr=np.zeros((d, d)),
            basis_labels=_labels(basis),
            scheme=scheme,
            total_points=total,
            seed=None,
            kappa_ref=None,
            offdiag_ratio=offratio,
            diag_spread=spread,
            kappa_rel_err=None,
            hermiticity=herm,
        )
        if spec.datum.matrix.primary:
            report.scalar_pass = offratio < rel_tol and spread < rel_tol
        return report

    if scheme != "qmc":
        raise ValueError(f"unknown scheme {scheme!r}")
    reps = quad.replicates
    per_rep = 1 << max(1, math.ceil(math.log2(max(2, quad.samples // reps))))
    if per_rep * reps > quad.budget:
        raise SamplingBudgetExceededError(
            f"{per_rep} x {reps} QMC samples exceed budget {quad.budget}"
        )
    seeds = np.random.SeedSequence(quad.seed).spawn(reps)
    samples_g = []
    for seq in seeds:
        sob = qmc.Sobol(d=dim, scramble=True, seed=np.random.default_rng(seq))
        pts = sob.random_base2(int(math.log2(per_rep)))
        weight, values = _manybody_values(spec, pts, basis, tol)
        samples_g.append((values * weight[None, :]) @ values.conj().T / pts.shape[0])
    stack = np.stack(samples_g, axis=0)
    gmat = stack.mean(axis=0)
    se_re = np.std(stack.real, axis=0, ddof=1) / math.sqrt(reps)
    se_im = np.std(stack.imag, axis=0, ddof=1) / math.sqrt(reps)
    stderr = np.sqrt(se_re**2 + se_im**2)
    mean_diag, offratio, spread, herm = _report_stats(gmat)

    offdiag_sigmas = 0.0
    diag_pair_sigmas = 0.0
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            offdiag_sigmas = max(
                offdiag_sigmas,
                abs(gmat[i, j].real) / max(se_re[i, j], 1e-300),
                abs(gmat[i, j].imag) / max(se_im[i, j], 1e-300),
            )
    for i in range(d):
        for j in range(i + 1, d):
            diffs = stack[:, i, i].real - stack[:, j, j].real
            se = np.std(diffs, ddof=1) / math.sqrt(reps)
            diag_pair_sigmas = max(
                diag_pair_sigmas, abs(float(np.mean(diffs))) / max(se, 1e-300)
            )
    report = GramReport(
        matrix=gmat,
        stderr=stderr,
        basis_labels=_labels(basis),
        scheme="qmc",
        total_points=per_rep * reps,
        seed=quad.seed,
        kappa_ref=None,
        offdiag_ratio=offratio,
        diag_spread=spread,
        kappa_rel_err=None,
        hermiticity=herm,
        offdiag_sigmas=offdiag_sigmas if d > 1 else 0.0,
        diag_pair_sigmas=diag_pair_sigmas if d > 1 else 0.0,
    )
    if spec.datum.matrix.primary:
        sigma_ok = (d == 1) or (offdiag_sigmas < 3.0 and diag_pair_sigmas < 3.0)
        report.scalar_pass = sigma_ok and offratio < rel_tol and spread < rel_tol
    return report
