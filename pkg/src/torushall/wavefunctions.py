"""Many-body torus wave functions and their magnetic-translation action.

Building blocks, for a datum (K, n) with K n = d e on the torus of modulus
tau and boundary parameter xi:

* one-particle basis   h_j(z) = theta[(j-1)/k, 0](k z + xi | k tau),
* center-of-mass basis H_c(w) = Theta[c, 0](K w + xi | tau K),
* coincidence factor   D = prod_k prod_{p<q} v(z_p^k - z_q^k)^{K_kk}
                         * prod_{k<l} prod_{p,q} v(z_p^k - z_q^l)^{K_kl},
  with v the odd theta function, vanishing on every coupled diagonal,
* the many-body wave function Phi_c = H_c(w) * D, labelled by cosets c.

Shifting any single coordinate by 1 multiplies Phi_c by the sector sign
(+1 or -1 depending on d and the diagonal parity of K); shifting by tau
multiplies by the same sign times exp(-2 pi i xi_k) phi(z)^d with
phi(z) = exp(-pi i tau - 2 pi i z).

The magnetic translations move every coordinate by 1/d (T1) or tau/d (T2);
on the Phi basis T1 acts diagonally with eigenvalue upsilon(u, c) and T2
permutes c -> c + u.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .heisenberg import upsilon
from .theta import (
    OmegaMatrix,
    ThetaCharacteristics,
    TorusParams,
    jacobi_theta,
    riemann_theta_batch,
    theta_odd,
    theta_odd_batch,
)
from .wen import PiElement, WenDatum, pi_add, pi_canonical


class ShapeMismatchError(ValueError):
    pass


class IndexOutOfRangeError(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    """Particle coordinates grouped by layer; sizes must match the datum."""

    layers: tuple[tuple[complex, ...], ...]

    @classmethod
    def from_nested(cls, nested: Sequence[Sequence[complex]]) -> "Configuration":
        return cls(tuple(tuple(complex(z) for z in layer) for layer in nested))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def w(self) -> np.ndarray:
        """Per-layer coordinate sums, recomputed on every call."""
        return np.array([sum(layer) for layer in self.layers], dtype=complex)

    def total(self) -> complex:
        return complex(sum(sum(layer) for layer in self.layers))

    def shift_all(self, delta: complex) -> "Configuration":
        return Configuration(
            tuple(tuple(z + delta for z in layer) for layer in self.layers)
        )

    def shift_one(self, k: int, p: int, delta: complex) -> "Configuration":
        layers = [list(layer) for layer in self.layers]
        layers[k][p] += delta
        return Configuration(tuple(tuple(layer) for layer in layers))


@dataclass(frozen=True)
class WaveFunctionSpec:
    """Datum, boundary parameter xi, and modulus bundled for evaluation."""

    datum: WenDatum
    xi: tuple[complex, ...]
    torus: TorusParams

    def __post_init__(self) -> None:
        if len(self.xi) != self.datum.matrix.g:
            raise ShapeMismatchError("xi must have one entry per layer")

    @property
    def g(self) -> int:
        return self.datum.matrix.g

    def omega(self) -> OmegaMatrix:
        K = np.array(self.datum.matrix.entries, dtype=float)
        return OmegaMatrix.create(self.torus.tau * K)

    def sector_sign(self) -> int:
        """Sign picked up when one coordinate moves by a lattice vector.

        Equals epsilon(K) * (-1)^d: each coordinate sits in d - K_kk odd
        theta factors, and the diagonal entries all share one parity.
        """
        return self.datum.matrix.epsilon * (-1) ** self.datum.d

    def xi_characteristics(self) -> tuple[np.ndarray, np.ndarray]:
        """Real decomposition xi = b + tau a, componentwise."""
        xi = np.asarray(self.xi, dtype=complex)
        a = xi.imag / self.torus.t
        b = xi.real - self.torus.s * a
        return a, b

    def check(self, config: Configuration) -> None:
        if config.sizes != self.datum.n_vec:
            raise ShapeMismatchError(
                f"configuration sizes {config.sizes} do not match n = {self.datum.n_vec}"
            )


def one_particle_basis(
    k: int,
    xi: complex,
    tau: TorusParams | complex,
    j: int,
    z: complex,
    tol: float = 1e-12,
) -> complex:
    """h_j(z) = theta[(j-1)/k, 0](k z + xi | k tau) for j = 1..k."""
    if not 1 <= j <= k:
        raise IndexOutOfRangeError(f"j = {j} outside 1..{k}")
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    return jacobi_theta((j - 1) / k, 0.0, k * z + xi, TorusParams(k * tp.tau), tol)


def center_basis(
    spec: WaveFunctionSpec, c: PiElement, w, tol: float = 1e-12
) -> complex:
    """H_c(w) = Theta[c, 0](K w + xi | tau K) at one center point w."""
    return complex(center_basis_batch(spec, c, np.asarray(w, dtype=complex)[None, :], tol)[0])


def center_basis_batch(
    spec: WaveFunctionSpec, c: PiElement, w, tol: float = 1e-12
) -> np.ndarray:
    """H_c at an (M, g) array of center points."""
    ww = np.asarray(w, dtype=complex)
    K = np.array(spec.datum.matrix.entries, dtype=float)
    arg = ww @ K.T + np.asarray(spec.xi, dtype=complex)[None, :]
    chars = ThetaCharacteristics(
        a=tuple(float(x) for x in c), b=(0.0,) * spec.g
    )
    return riemann_theta_batch(chars, arg, spec.omega(), tol)


def jastrow_factor(
    datum: WenDatum, tau: TorusParams | complex, config: Configuration, tol: float = 1e-12
) -> complex:
    """The coincidence factor D at one configuration."""
    if config.sizes != datum.n_vec:
        raise ShapeMismatchError(
            f"configuration sizes {config.sizes} do not match n = {datum.n_vec}"
        )
    layers = [np.asarray(layer, dtype=complex)[None, :] for layer in config.layers]
    return complex(jastrow_batch(datum, tau, layers, tol)[0])


def jastrow_batch(
    datum: WenDatum,
    tau: TorusParams | complex,
    layers: Sequence[np.ndarray],
    tol: float = 1e-12,
) -> np.ndarray:
    """D at a batch of configurations, one (M, n_k) array per layer."""
    K = datum.matrix.entries
    g = datum.matrix.g
    m_count = layers[0].shape[0]
    out = np.ones(m_count, dtype=complex)
    for k in range(g):
        e = K[k][k]
        if e:
            nk = layers[k].shape[1]
            for p in range(nk):
                for q in range(p + 1, nk):
                    out *= theta_odd_batch(layers[k][:, p] - layers[k][:, q], tau, tol) ** e
    for k in range(g):
        for l in range(k + 1, g):
            e = K[k][l]
            if e:
                for p in range(layers[k].shape[1]):
                    for q in range(layers[l].shape[1]):
                        out *= theta_odd_batch(layers[k][:, p] - layers[l][:, q], tau, tol) ** e
    return out


def kvw_wavefunction(
    spec: WaveFunctionSpec, c: PiElement, config: Configuration, tol: float = 1e-12
) -> complex:
    """Phi_c = H_c(w) * D at one configuration."""
    spec.check(config)
    return center_basis(spec, c, config.w(), tol) * jastrow_factor(
        spec.datum, spec.torus, config, tol
    )


def kvw_batch(
    spec: WaveFunctionSpec,
    c: PiElement,
    layers: Sequence[np.ndarray],
    tol: float = 1e-12,
) -> np.ndarray:
    """Phi_c at a batch of configurations given as per-layer (M, n_k) arrays."""
    w = np.stack([layer.sum(axis=1) for layer in layers], axis=-1)
    return center_basis_batch(spec, c, w, tol) * jastrow_batch(
        spec.datum, spec.torus, layers, tol
    )


def hr_wavefunction(
    m: int,
    n: int,
    xi: complex,
    tau: TorusParams | complex,
    j: int,
    z: Sequence[complex],
    tol: float = 1e-12,
) -> complex:
    """Single-layer wave function theta[(j-1)/m, 0](m w + xi | m tau) * D_m.

    Symmetric in the coordinates for even m, antisymmetric for odd m;
    vanishes to order m on every coincidence diagonal.
    """
    if not 1 <= j <= m:
        raise IndexOutOfRangeError(f"j = {j} outside 1..{m}")
    zs = tuple(complex(x) for x in z)
    if len(zs) != n:
        raise ShapeMismatchError(f"got {len(zs)} coordinates, expected n = {n}")
    tp = tau if isinstance(tau, TorusParams) else TorusParams(complex(tau))
    w = sum(zs)
    center = jacobi_theta((j - 1) / m, 0.0, m * w + xi, TorusParams(m * tp.tau), tol)
    d = 1.0 + 0.0j
    for p in range(n):
        for q in range(p + 1, n):
            d *= theta_odd(zs[p] - zs[q], tp, tol) ** m
    return center * d


def lattice_shift_factor(spec: WaveFunctionSpec, k: int, z: complex, direction: str) -> complex:
    """Predicted multiplier of Phi_c when z_p^(k) moves by 1 or by tau."""
    eps = spec.sector_sign()
    if direction == "1":
        return complex(eps)
    if direction == "tau":
        phi = np.exp(-1j * np.pi * spec.torus.tau - 2j * np.pi * z)
        return eps * np.exp(-2j * np.pi * spec.xi[k]) * phi**spec.datum.d
    raise ValueError("direction must be '1' or 'tau'")


def magnetic_translation(
    spec: WaveFunctionSpec,
    which: str,
    wavefn: Callable[[Configuration], complex],
    config: Configuration,
) -> complex:
    """Apply T1 or T2 to a many-body wave function, evaluated at config.

    T1 shifts every coordinate by 1/d.  T2 shifts every coordinate by tau/d
    and multiplies by the product of the one-particle prefactors
    exp((2 pi i xi_k + pi i tau)/d) exp(2 pi i z), which collapses to
    exp(2 pi i (u, xi) + pi i tau n/d) exp(2 pi i sum z).
    """
    d = spec.datum.d
    if which == "t1":
        return wavefn(config.shift_all(1.0 / d))
    if which == "t2":
        nvec = np.asarray(spec.datum.n_vec, dtype=float)
        xi = np.asarray(spec.xi, dtype=complex)
        pref = np.exp(
            (2j * np.pi * (nvec @ xi) + 1j * np.pi * spec.torus.tau * spec.datum.n) / d
            + 2j * np.pi * config.total()
        )
        return pref * wavefn(config.shift_all(spec.torus.tau / d))
    raise ValueError("which must be 't1' or 't2'")


def magnetic_action_residual(
    spec: WaveFunctionSpec,
    c: PiElement,
    which: str,
    configs: Sequence[Configuration],
    tol: float = 1e-12,
) -> float:
    """Largest normalized defect of the T1/T2 eigenvalue and shift laws.

    Compares T1 Phi_c with upsilon(u, c) Phi_c, and T2 Phi_c with
    Phi_{c + u}; residuals are |lhs - rhs| / max(1, |lhs|, |rhs|).
    """
    K = spec.datum.matrix
    u = K.u_class()
    worst = 0.0
    for config in configs:
        lhs = magnetic_translation(
            spec, which, lambda cfg: kvw_wavefunction(spec, c, cfg, tol), config
        )
        if which == "t1":
            rhs = upsilon(u, c, K) * kvw_wavefunction(spec, c, config, tol)
        else:
            rhs = kvw_wavefunction(spec, pi_add(pi_canonical(c), u), config, tol)
        scale = max(1.0, abs(lhs), abs(rhs))
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def random_configuration(
    datum: WenDatum, rng: np.random.Generator, box: float = 0.8
) -> Configuration:
    """A configuration with coordinates in a box around the cell center."""
    layers = []
    for nk in datum.n_vec:
        pts = box * (rng.random(nk) - 0.5) + 1j * box * (rng.random(nk) - 0.5)
        layers.append(tuple(complex(z) for z in pts))
    return Configuration(tuple(layers))
