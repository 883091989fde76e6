"""Finite Heisenberg groups of magnetic translations.

The group attached to a coupling matrix K is the set Pi x Pi x Gamma_delta
with the product twisted by the pairing

    upsilon(a, b) = exp(2 pi i a' K b),

a root of unity of order dividing delta.  Roots of unity are carried as
integer exponents modulo delta throughout, so all group-law identities
checked here are exact integer statements; complex matrices are only
materialized at the API boundary.

The representation matrices are those of the magnetic translations on the
distinguished theta basis: T1 acts diagonally with eigenvalue
upsilon(u, c) on the basis vector labelled c, and T2 permutes labels by
c -> c + u, where u = K^{-1} e.  For a primary matrix the basis is ordered
along the powers of u, which makes T1 = diag(1, q, ..., q^{delta-1}) and
T2 the full cycle, with q = exp(2 pi i rho / delta) primitive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .wen import (
    PiElement,
    WenDatum,
    WenMatrix,
    pi_add,
    pi_canonical,
    pi_group,
    pi_neg,
    pi_scale,
)


class NonCyclicBasisOrderError(ValueError):
    """Cyclic (powers-of-u) ordering requested for a non-primary matrix."""


def upsilon_exponent(a: Sequence[Fraction], b: Sequence[Fraction], K: WenMatrix) -> int:
    """Integer m with upsilon(a, b) = exp(2 pi i m / delta), exactly.

    a' K b is a rational with denominator dividing delta whenever a and b
    lie in K^{-1}Z^g, so m = delta * a' K b is an integer.
    """
    acc = Fraction(0)
    for i in range(K.g):
        for j in range(K.g):
            acc += Fraction(a[i]) * K.entries[i][j] * Fraction(b[j])
    m = acc * K.delta
    if m.denominator != 1:
        raise ValueError("arguments do not lie in K^{-1}Z^g")
    return int(m) % K.delta


def upsilon(a: Sequence[Fraction], b: Sequence[Fraction], K: WenMatrix) -> complex:
    """The pairing value as a complex root of unity."""
    return root_of_unity(upsilon_exponent(a, b, K), K.delta)


def root_of_unity(exponent: int, order: int) -> complex:
    return complex(np.exp(2j * np.pi * (exponent % order) / order))


@dataclass(frozen=True)
class HeisenbergElement:
    """Group element ((a, b), gamma); gamma stored as an exponent mod delta.

    ``sign`` is the extra central +-1 of the sign-twisted double cover used
    in the odd-sector setting; the group law multiplies signs independently
    and the representation matrices are unchanged.
    """

    a: PiElement
    b: PiElement
    gamma: int
    sign: int = 1


def identity_element(K: WenMatrix) -> HeisenbergElement:
    zero = pi_canonical([Fraction(0)] * K.g)
    return HeisenbergElement(a=zero, b=zero, gamma=0)


def multiply(x: HeisenbergElement, y: HeisenbergElement, K: WenMatrix) -> HeisenbergElement:
    """Group law: the cocycle contributes upsilon(a_x, b_y) to the center."""
    return HeisenbergElement(
        a=pi_add(x.a, y.a),
        b=pi_add(x.b, y.b),
        gamma=(x.gamma + y.gamma + upsilon_exponent(x.a, y.b, K)) % K.delta,
        sign=x.sign * y.sign,
    )


def inverse(x: HeisenbergElement, K: WenMatrix) -> HeisenbergElement:
    """Inverse solved from the group law: gamma^{-1} = upsilon(a,b) - gamma."""
    return HeisenbergElement(
        a=pi_neg(x.a),
        b=pi_neg(x.b),
        gamma=(upsilon_exponent(x.a, x.b, K) - x.gamma) % K.delta,
        sign=x.sign,
    )


@dataclass(frozen=True)
class RepMatrices:
    """Magnetic-translation matrices on the distinguished basis.

    ``t1_exponents[i]`` is the exponent of the diagonal entry of T1 at basis
    slot i, ``t2_permutation[i]`` the slot that T2 sends slot i to, and
    ``q_exponent`` the exponent of q in T1 T2 = q T2 T1 -- all modulo delta,
    all exact.
    """

    delta: int
    q_exponent: int
    t1_exponents: tuple[int, ...]
    t2_permutation: tuple[int, ...]
    basis: tuple[PiElement, ...]

    @property
    def q(self) -> complex:
        return root_of_unity(self.q_exponent, self.delta)

    def t1_matrix(self) -> np.ndarray:
        return np.diag([root_of_unity(e, self.delta) for e in self.t1_exponents])

    def t2_matrix(self) -> np.ndarray:
        mat = np.zeros((self.delta, self.delta), dtype=complex)
        for i, j in enumerate(self.t2_permutation):
            mat[j, i] = 1.0
        return mat

    def q_is_primitive(self) -> bool:
        from math import gcd

        return gcd(self.q_exponent % self.delta, self.delta) == 1

    def verify_relations(self) -> None:
        """Exact exponent-arithmetic check of the translation relations."""
        d = self.delta
        if any((d * e) % d for e in self.t1_exponents):
            raise AssertionError("T1^delta != identity")
        perm = list(range(d))
        for _ in range(d):
            perm = [self.t2_permutation[i] for i in perm]
        if perm != list(range(d)):
            raise AssertionError("T2^delta != identity")
        for i in range(d):
            lhs = self.t1_exponents[self.t2_permutation[i]]
            rhs = (self.q_exponent + self.t1_exponents[i]) % d
            if lhs != rhs:
                raise AssertionError("T1 T2 != q T2 T1")


def rep_matrices(datum: WenDatum, ordering: str = "auto") -> RepMatrices:
    """Representation matrices of the magnetic translations.

    ordering='cyclic' lists the basis along powers of u (requires a primary
    matrix), 'group' uses the lexicographic coset order, and 'auto' picks
    cyclic when available.
    """
    K = datum.matrix
    u = K.u_class()
    if ordering not in ("auto", "cyclic", "group"):
        raise ValueError(f"unknown ordering {ordering!r}")
    if ordering == "cyclic" and not K.primary:
        raise NonCyclicBasisOrderError(
            "powers of u do not exhaust the group for a non-primary matrix"
        )
    if ordering == "group" or (ordering == "auto" and not K.primary):
        basis = pi_group(K).elements
    else:
        basis = tuple(pi_scale(i, u) for i in range(K.delta))
        if len(set(basis)) != K.delta:
            raise NonCyclicBasisOrderError("u does not generate the group")
    index = {c: i for i, c in enumerate(basis)}
    q_exp = upsilon_exponent(u, u, K)
    if q_exp != K.rho % K.delta:
        raise AssertionError("pairing of u with itself must equal rho mod delta")
    t1 = tuple(upsilon_exponent(u, c, K) for c in basis)
    t2 = tuple(index[pi_add(c, u)] for c in basis)
    rep = RepMatrices(
        delta=K.delta,
        q_exponent=q_exp,
        t1_exponents=t1,
        t2_permutation=t2,
        basis=basis,
    )
    rep.verify_relations()
    return rep


def standard_representation(
    K: WenMatrix,
) -> Callable[[PiElement, PiElement, int], np.ndarray]:
    """Matrices of ((a, b), gamma) -> gamma R_b S_a on the coset-ordered basis.

    S_a is diagonal with entries upsilon(a, c); R_b permutes c -> c + b; the
    central root of unity gamma (given by its exponent) scales the whole
    matrix.
    """
    group = pi_group(K)
    basis = group.elements

    def rep(a: PiElement, b: PiElement, gamma: int) -> np.ndarray:
        mat = np.zeros((K.delta, K.delta), dtype=complex)
        for i, c in enumerate(basis):
            mat[group.index_of(pi_add(c, b)), i] = upsilon(a, c, K)
        return root_of_unity(gamma, K.delta) * mat

    return rep


def character_norm(
    K: WenMatrix, rep: Callable[[PiElement, PiElement, int], np.ndarray]
) -> float:
    """(chi, chi) = (1/delta^3) sum over all delta^3 group elements of |trace|^2."""
    group = pi_group(K)
    d = K.delta
    acc = 0.0
    for a in group:
        for b in group:
            for gamma in range(d):
                acc += abs(np.trace(rep(a, b, gamma))) ** 2
    return acc / d**3


def irreducibility_norm(K: WenMatrix) -> float:
    """Character norm of the standard representation; 1.0 when irreducible."""
    if K.delta > 10:
        raise ValueError("character sum is capped at delta <= 10")
    return character_norm(K, standard_representation(K))
