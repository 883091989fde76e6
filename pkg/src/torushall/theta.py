"""Error-bounded evaluation of theta functions with real characteristics.

One variable:

    theta[a,b](z | tau) = sum_{k in Z} exp(pi i tau (k+a)^2 + 2 pi i (k+a)(z+b))

g variables, for a symmetric Omega with positive-definite imaginary part:

    Theta[a,b](z | Omega) = sum_{k in Z^g} exp(pi i (k+a)' Omega (k+a)
                                               + 2 pi i (k+a)' (z+b))

Truncation strategy: term magnitudes are a Gaussian in k centred at
mu = -a - Im(Omega)^{-1} Im(z).  Summation runs over the axis-aligned
integer box of halfwidth r around mu, where r is the smallest integer
making the infinity-norm shell bound

    sum_{j >= r} 2 g (2j+1)^{g-1} exp(-pi lambda_min j^2)

fall below tol/4 (lambda_min the smallest eigenvalue of Im(Omega); the
extra factor 2 is the safety margin on the tol/2 budget).  Characteristics
are used exactly as given; nothing is reduced modulo 1.

Batch entry points share one truncation window across all evaluation
points of a call, sized from the range of Im(z) in the batch.  Set
TORUSHALL_THREADS=<n> to split large batches over n worker threads
(chunks are written to disjoint slices, so results are deterministic).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class NonconvergentModulusError(ValueError):
    """Im(tau) <= 0: the theta series does not converge."""


class AsymmetricOmegaError(ValueError):
    pass


class ImagNotPositiveDefiniteError(ValueError):
    pass


MIN_TOL_1D = 1e-15
MIN_TOL_ND = 1e-14
_CHUNK = 1 << 21  # max term-matrix entries per chunk


@dataclass(frozen=True)
class TorusParams:
    """Modulus tau = s + i t of the torus, with t > 0."""

    tau: complex

    def __post_init__(self) -> None:
        if not (self.tau.imag > 0):
            raise NonconvergentModulusError(f"Im(tau) = {self.tau.imag} must be positive")

    @property
    def t(self) -> float:
        return self.tau.imag

    @property
    def s(self) -> float:
        return self.tau.real


@dataclass(frozen=True)
class ThetaCharacteristics:
    """Real characteristic vectors (a, b); kept exactly as given."""

    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have equal length")
        if not all(math.isfinite(x) for x in self.a + self.b):
            raise ValueError("characteristics must be finite")

    @property
    def g(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class OmegaMatrix:
    """Symmetric period matrix with positive-definite imaginary part.

    Stores the lower Cholesky factor of Im(Omega) and its smallest
    eigenvalue, which drive the truncation bound.
    """

    omega: np.ndarray
    imag_cholesky: np.ndarray = field(compare=False)
    lambda_min: float = field(compare=False)

    @classmethod
    def create(cls, omega: Sequence[Sequence[complex]]) -> "OmegaMatrix":
        om = np.asarray(omega, dtype=complex)
        if om.ndim != 2 or om.shape[0] != om.shape[1]:
            raise ValueError("Omega must be a square matrix")
        scale = max(1.0, float(np.max(np.abs(om))))
        if float(np.max(np.abs(om - om.T))) > 1e-14 * scale:
            raise AsymmetricOmegaError("Omega is not symmetric")
        om = (om + om.T) / 2
        y = om.imag
        try:
            chol = np.linalg.cholesky(y)
        except np.linalg.LinAlgError as exc:
            raise ImagNotPositiveDefiniteError(
                "Im(Omega) is not positive definite"
            ) from exc
        lam = float(np.min(np.linalg.eigvalsh(y)))
        om.setflags(write=False)
        chol.setflags(write=False)
        return cls(omega=om, imag_cholesky=chol, lambda_min=lam)

    @property
    def g(self) -> int:
        return self.omega.shape[0]


@dataclass(frozen=True)
class TruncationPlan:
    """Integer window that keeps the discarded theta tail below tol/2."""

    halfwidth: int
    radius: float  # ellipsoid radius in the Im(Omega) metric
    lambda_min: float
    g: int
    a: tuple[float, ...]
    tol: float

    def axis_bounds(
        self, center_lo: Sequence[float], center_hi: Sequence[float]
    ) -> tuple[np.ndarray, np.ndarray]:
        """Integer summation bounds covering peaks in [center_lo, center_hi]."""
        lo = np.floor(np.asarray(center_lo)).astype(int) - self.halfwidth
        hi = np.ceil(np.asarray(center_hi)).astype(int) + self.halfwidth
        return lo, hi


def _tail_halfwidth(lambda_min: float, g: int, tol: float) -> int:
    """Smallest integer r whose infinity-norm shell tail is below tol/4."""
    if lambda_min <= 0:
        raise ImagNotPositiveDefiniteError("need a positive smallest eigenvalue")
    target = tol / 4.0
    r = 1
    while r < 100000:
        j = np.arange(r, r + 256, dtype=float)
        tail = float(np.sum(2 * g * (2 * j + 1) ** (g - 1) * np.exp(-np.pi * lambda_min * j * j)))
        if tail < target:
            return r
        r += 1
    raise RuntimeError("truncation search did not converge")


def truncation_plan(omega: OmegaMatrix, a: Sequence[float], tol: float) -> TruncationPlan:
    """Shared summation window for Theta[a, .](. | Omega) at tolerance tol."""
    if tol < MIN_TOL_ND:
        raise ValueError(f"tol must be >= {MIN_TOL_ND}")
    g = omega.g
    r = _tail_halfwidth(omega.lambda_min, g, tol)
    return TruncationPlan(
        halfwidth=r + 1,
        radius=float(r * math.sqrt(omega.lambda_min)),
        lambda_min=omega.lambda_min,
        g=g,
        a=tuple(float(x) for x in a),
        tol=tol,
    )


def _thread_count() -> int:
    raw = os.environ.get("TORUSHALL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_chunks(fn, n_points: int, chunk: int):
    """Apply fn to index ranges; deterministic regardless of thread count."""
    spans = [(i, min(i + chunk, n_points)) for i in range(0, n_points, chunk)]
    workers = _thread_count()
    if workers == 1 or len(spans) == 1:
        for span in spans:
            fn(*span)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda sp: fn(*sp), spans))


# ---------------------------------------------------------------------------
# one-variable series


def jacobi_theta_batch(
    a: float, b: float, z, tau: TorusParams | complex, tol: float = 1e-12
) -> np.ndarray:
    """theta[a,b] at an array of points z, one shared summation window."""
    if tol < MIN_TOL_1D:
        raise ValueError(f"tol must be >= {MIN_TOL_1D}")
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    zz = np.asarray(z, dtype=complex)
    flat = zz.ravel()
    t = tp.t
    hw = _tail_halfwidth(t, 1, tol) + 1
    imz = flat.imag
    c_lo = -a - (imz.max() if flat.size else 0.0) / t
    c_hi = -a - (imz.min() if flat.size else 0.0) / t
    ks = np.arange(math.floor(c_lo) - hw, math.ceil(c_hi) + hw + 1, dtype=float)
    ka = ks + a
    coeff = np.exp(1j * np.pi * tp.tau * ka * ka + 2j * np.pi * ka * b)
    out = np.empty(flat.shape, dtype=complex)
    chunk = max(1, _CHUNK // max(1, ka.size))

    def work(lo: int, hi: int) -> None:
        out[lo:hi] = np.exp(2j * np.pi * np.outer(flat[lo:hi], ka)) @ coeff

    _run_chunks(work, flat.size, chunk)
    return out.reshape(zz.shape)


def jacobi_theta(
    a: float, b: float, z: complex, tau: TorusParams | complex, tol: float = 1e-12
) -> complex:
    """theta[a,b](z | tau) with truncation error below tol."""
    return complex(jacobi_theta_batch(a, b, np.asarray([z]), tau, tol)[0])


def theta_odd(z: complex, tau: TorusParams | complex, tol: float = 1e-12) -> complex:
    """The odd theta function theta[1/2,1/2](z | tau); vanishes at z = 0."""
    return jacobi_theta(0.5, 0.5, z, tau, tol)


def theta_odd_batch(z, tau: TorusParams | complex, tol: float = 1e-12) -> np.ndarray:
    return jacobi_theta_batch(0.5, 0.5, z, tau, tol)


# ---------------------------------------------------------------------------
# g-variable series


def _lattice_box(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    axes = [np.arange(l, h + 1, dtype=float) for l, h in zip(lo, hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([gr.ravel() for gr in grids], axis=-1)


def riemann_theta_batch(
    chars: ThetaCharacteristics,
    z,
    omega: OmegaMatrix,
    tol: float = 1e-12,
    plan: TruncationPlan | None = None,
) -> np.ndarray:
    """Theta[a,b] at an (M, g) array of points, one shared window."""
    zz = np.asarray(z, dtype=complex)
    if zz.ndim == 1:
        zz = zz[None, :]
    if zz.shape[1] != omega.g or chars.g != omega.g:
        raise ValueError("dimension mismatch between z, Omega, characteristics")
    if plan is None:
        plan = truncation_plan(omega, chars.a, tol)
    a = np.asarray(chars.a, dtype=float)
    b = np.asarray(chars.b, dtype=float)
    y = omega.omega.imag
    centers = -a[None, :] - np.linalg.solve(y, zz.imag.T).T
    lo, hi = plan.axis_bounds(centers.min(axis=0), centers.max(axis=0))
    ks = _lattice_box(lo, hi)
    ka = ks + a[None, :]
    quad = np.einsum("ij,jk,ik->i", ka, omega.omega, ka)
    coeff = np.exp(1j * np.pi * quad + 2j * np.pi * (ka @ b))
    zb = zz
    out = np.empty(zz.shape[0], dtype=complex)
    chunk = max(1, _CHUNK // max(1, ka.shape[0]))

    def work(s: int, e: int) -> None:
        out[s:e] = np.exp(2j * np.pi * (zb[s:e] @ ka.T)) @ coeff

    _run_chunks(work, zz.shape[0], chunk)
    return out


def riemann_theta(
    chars: ThetaCharacteristics,
    z,
    omega: OmegaMatrix,
    tol: float = 1e-12,
) -> complex:
    """Theta[a,b](z | Omega) with truncation error below tol."""
    zz = np.asarray(z, dtype=complex).reshape(1, -1)
    return complex(riemann_theta_batch(chars, zz, omega, tol)[0])
