import numpy as np
import pytest

from torushall.heisenberg import upsilon
from torushall.theta import TorusParams, jacobi_theta, theta_odd
from torushall.wavefunctions import (
    Configuration,
    IndexOutOfRangeError,
    ShapeMismatchError,
    WaveFunctionSpec,
    center_basis,
    hr_wavefunction,
    jastrow_factor,
    kvw_wavefunction,
    lattice_shift_factor,
    magnetic_action_residual,
    magnetic_translation,
    one_particle_basis,
    random_configuration,
)
from torushall.wen import (
    pi_add,
    pi_group,
    validate_wen_datum,
    validate_wen_matrix,
)

TAU = TorusParams(0.2 + 0.9j)


def _residual(lhs, rhs):
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _spec(kmat, nvec, xi, tau=TAU):
    K = validate_wen_matrix(kmat)
    datum = validate_wen_datum(K, nvec)
    return WaveFunctionSpec(datum=datum, xi=tuple(xi), torus=tau)


class TestOneParticleBasis:
    def test_k1_reduces_to_plain_theta(self, rng):
        xi = 0.2 + 0.3j
        for _ in range(10):
            z = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
            got = one_particle_basis(1, xi, TAU, 1, z)
            want = jacobi_theta(0, 0, z + xi, TAU)
            assert abs(got - want) < 1e-13

    def test_periodic_in_unit_shift(self, rng):
        k, xi = 3, 0.1 - 0.2j
        for j in (1, 2, 3):
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
            assert (
                _residual(
                    one_particle_basis(k, xi, TAU, j, z + 1),
                    one_particle_basis(k, xi, TAU, j, z),
                )
                < 1e-12
            )

    def test_fractional_shift_eigenvalue(self, rng):
        # moving z by 1/k scales h_j by exp(2 pi i (j-1)/k)
        k, xi = 4, 0.3j
        for j in range(1, k + 1):
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
            got = one_particle_basis(k, xi, TAU, j, z + 1.0 / k)
            want = np.exp(2j * np.pi * (j - 1) / k) * one_particle_basis(k, xi, TAU, j, z)
            assert _residual(got, want) < 1e-12

    def test_index_range(self):
        with pytest.raises(IndexOutOfRangeError):
            one_particle_basis(3, 0j, TAU, 4, 0.1)
        with pytest.raises(IndexOutOfRangeError):
            one_particle_basis(3, 0j, TAU, 0, 0.1)


class TestCenterBasis:
    def test_g1_matches_one_particle(self, rng):
        spec = _spec([[3]], (1,), (0.15 + 0.25j,))
        grp = pi_group(spec.datum.matrix)
        for j, c in enumerate(grp.elements, start=1):
            w = np.array([complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))])
            got = center_basis(spec, c, w)
            want = one_particle_basis(3, spec.xi[0], spec.torus, j, complex(w[0]))
            assert abs(got - want) < 1e-12

    def test_integer_periodicity(self, rng):
        spec = _spec([[2, 1], [1, 2]], (1, 1), (0.1j, 0.2))
        grp = pi_group(spec.datum.matrix)
        for c in grp.elements:
            w = rng.uniform(-0.5, 0.5, size=2) + 1j * rng.uniform(-0.3, 0.3, size=2)
            l = rng.integers(-2, 3, size=2).astype(float)
            assert _residual(center_basis(spec, c, w + l), center_basis(spec, c, w)) < 1e-11

    def test_shift_action_eigenvalue(self, rng):
        # H_c(w + a) = upsilon(a, c) H_c(w) for a in the coset group
        spec = _spec([[2, 1], [1, 2]], (1, 1), (0.1 + 0.2j, -0.1 + 0.1j))
        K = spec.datum.matrix
        grp = pi_group(K)
        for a in grp.elements:
            for c in grp.elements:
                w = rng.uniform(-0.5, 0.5, size=2) + 1j * rng.uniform(-0.3, 0.3, size=2)
                lhs = center_basis(spec, c, w + np.array([float(x) for x in a]))
                rhs = upsilon(a, c, K) * center_basis(spec, c, w)
                assert _residual(lhs, rhs) < 1e-11


class TestJastrow:
    def test_vanishes_at_coincidence(self):
        K = validate_wen_matrix([[2]])
        datum = validate_wen_datum(K, (3,))
        z = 0.3 + 0.1j
        config = Configuration(((z, z, 0.7 - 0.2j),))
        assert abs(jastrow_factor(datum, TAU, config)) < 1e-12

    def test_single_layer_matches_direct_product(self, rng):
        m, n = 3, 3
        K = validate_wen_matrix([[m]])
        datum = validate_wen_datum(K, (n,))
        zs = rng.uniform(-0.5, 0.5, size=n) + 1j * rng.uniform(-0.3, 0.3, size=n)
        config = Configuration((tuple(zs),))
        want = 1.0 + 0j
        for p in range(n):
            for q in range(p + 1, n):
                want *= theta_odd(zs[p] - zs[q], TAU) ** m
        assert _residual(jastrow_factor(datum, TAU, config), want) < 1e-12

    def test_swap_sign(self, rng):
        for m in (2, 3):
            K = validate_wen_matrix([[m]])
            datum = validate_wen_datum(K, (2,))
            z1 = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
            z2 = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
            plain = jastrow_factor(datum, TAU, Configuration(((z1, z2),)))
            swapped = jastrow_factor(datum, TAU, Configuration(((z2, z1),)))
            assert _residual(swapped, (-1.0) ** m * plain) < 1e-12

    def test_shape_mismatch(self):
        K = validate_wen_matrix([[2]])
        datum = validate_wen_datum(K, (2,))
        with pytest.raises(ShapeMismatchError):
            jastrow_factor(datum, TAU, Configuration(((0.1 + 0j,),)))


class TestKvwWavefunction:
    def test_g1_equals_single_layer_form(self, rng):
        m, n = 2, 3
        spec = _spec([[m]], (n,), (0.1 + 0.2j,))
        grp = pi_group(spec.datum.matrix)
        for j, c in enumerate(grp.elements, start=1):
            config = random_configuration(spec.datum, rng)
            got = kvw_wavefunction(spec, c, config)
            want = hr_wavefunction(m, n, spec.xi[0], spec.torus, j, config.layers[0])
            assert _residual(got, want) < 1e-12

    def test_factorizes_exactly(self, rng):
        spec = _spec([[2, 1], [1, 2]], (2, 2), (0.05j, 0.1))
        c = pi_group(spec.datum.matrix).elements[1]
        config = random_configuration(spec.datum, rng)
        whole = kvw_wavefunction(spec, c, config)
        parts = center_basis(spec, c, config.w()) * jastrow_factor(
            spec.datum, spec.torus, config
        )
        assert abs(whole - parts) <= 1e-12 * max(1.0, abs(whole))

    @pytest.mark.parametrize(
        "kmat,nvec",
        [([[2]], (2,)), ([[3]], (2,)), ([[2, 1], [1, 2]], (1, 1))],
    )
    def test_lattice_shift_laws(self, kmat, nvec, rng):
        spec = _spec(kmat, nvec, tuple(0.1 + 0.1j for _ in nvec))
        grp = pi_group(spec.datum.matrix)
        for _ in range(20):
            config = random_configuration(spec.datum, rng)
            c = grp.elements[rng.integers(0, len(grp))]
            k = int(rng.integers(0, len(nvec)))
            p = int(rng.integers(0, nvec[k]))
            base = kvw_wavefunction(spec, c, config)
            z = config.layers[k][p]
            got = kvw_wavefunction(spec, c, config.shift_one(k, p, 1.0))
            assert _residual(got, lattice_shift_factor(spec, k, z, "1") * base) < 1e-9
            got = kvw_wavefunction(spec, c, config.shift_one(k, p, spec.torus.tau))
            assert _residual(got, lattice_shift_factor(spec, k, z, "tau") * base) < 1e-9

    def test_sector_signs(self):
        # even diagonal: sign (-1)^d; odd diagonal: -(-1)^d
        assert _spec([[2]], (2,), (0j,)).sector_sign() == 1  # d = 4
        assert _spec([[2, 1], [1, 2]], (1, 1), (0j, 0j)).sector_sign() == -1  # d = 3
        assert _spec([[3]], (1,), (0j,)).sector_sign() == 1  # d = 3, odd diag
        assert _spec([[3]], (2,), (0j,)).sector_sign() == -1  # d = 6, odd diag

    def test_vanishes_on_coupled_diagonal(self, rng):
        spec = _spec([[2, 1], [1, 2]], (1, 1), (0.1j, 0.05))
        z = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.2, 0.2))
        config = Configuration(((z,), (z,)))
        for c in pi_group(spec.datum.matrix).elements:
            assert abs(kvw_wavefunction(spec, c, config)) < 1e-10


class TestHaldaneRezayi:
    def test_symmetry_by_parity(self, rng):
        xi = 0.2 - 0.1j
        for m, sign in ((2, 1.0), (3, -1.0)):
            zs = rng.uniform(-0.5, 0.5, size=3) + 1j * rng.uniform(-0.3, 0.3, size=3)
            plain = hr_wavefunction(m, 3, xi, TAU, 1, zs)
            swapped = hr_wavefunction(m, 3, xi, TAU, 1, [zs[1], zs[0], zs[2]])
            assert _residual(swapped, sign * plain) < 1e-11

    def test_single_particle_is_center_only(self, rng):
        m, xi = 3, 0.1 + 0.2j
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
        for j in (1, 2, 3):
            got = hr_wavefunction(m, 1, xi, TAU, j, [z])
            want = jacobi_theta((j - 1) / m, 0, m * z + xi, TorusParams(m * TAU.tau))
            assert abs(got - want) < 1e-13

    def test_vanishing_order_on_diagonal(self):
        # log-log slope of |Phi| against the diagonal offset approximates m
        m, n, xi = 2, 2, 0.1 + 0.1j
        z0 = 0.21 + 0.13j
        hs = np.array([10.0**-e for e in (2.0, 2.5, 3.0, 3.5)])
        vals = np.array(
            [abs(hr_wavefunction(m, n, xi, TAU, 1, [z0, z0 + h])) for h in hs]
        )
        slope = np.polyfit(np.log(hs), np.log(vals), 1)[0]
        assert abs(slope - m) < 0.1

    def test_index_and_shape_errors(self):
        with pytest.raises(IndexOutOfRangeError):
            hr_wavefunction(2, 2, 0j, TAU, 3, [0.1, 0.2])
        with pytest.raises(ShapeMismatchError):
            hr_wavefunction(2, 2, 0j, TAU, 1, [0.1])


class TestMagneticAction:
    def test_t1_eigenvalue_constant(self, rng):
        spec = _spec([[2]], (2,), (0.1 + 0.2j,))
        K = spec.datum.matrix
        u = K.u_class()
        for c in pi_group(K).elements:
            ratios = []
            for _ in range(5):
                config = random_configuration(spec.datum, rng)
                base = kvw_wavefunction(spec, c, config)
                moved = magnetic_translation(
                    spec, "t1", lambda cfg: kvw_wavefunction(spec, c, cfg), config
                )
                ratios.append(moved / base)
            assert np.std(ratios) < 1e-9
            assert abs(np.mean(ratios) - upsilon(u, c, K)) < 1e-9

    def test_residuals_single_layer(self, rng):
        spec = _spec([[2]], (2,), (0.3 - 0.1j,), tau=TorusParams(1j))
        grp = pi_group(spec.datum.matrix)
        configs = [random_configuration(spec.datum, rng) for _ in range(20)]
        for c in grp.elements:
            assert magnetic_action_residual(spec, c, "t1", configs) < 1e-9
            assert magnetic_action_residual(spec, c, "t2", configs) < 1e-9

    def test_residuals_two_layer(self, rng):
        spec = _spec([[2, 1], [1, 2]], (1, 1), (0.1 + 0.2j, -0.05 + 0.1j))
        grp = pi_group(spec.datum.matrix)
        configs = [random_configuration(spec.datum, rng) for _ in range(10)]
        for c in grp.elements:
            assert magnetic_action_residual(spec, c, "t1", configs) < 1e-9
            assert magnetic_action_residual(spec, c, "t2", configs) < 1e-9

    def test_t1_fixes_invariant_vector(self, rng):
        # c = 0 pairs trivially with u, so T1 has eigenvalue 1 there
        spec = _spec([[3]], (1,), (0.2j,))
        zero = pi_group(spec.datum.matrix).elements[0]
        config = random_configuration(spec.datum, rng)
        base = kvw_wavefunction(spec, zero, config)
        moved = magnetic_translation(
            spec, "t1", lambda cfg: kvw_wavefunction(spec, zero, cfg), config
        )
        assert _residual(moved, base) < 1e-10

    def test_t2_orbit_cycles(self, rng):
        # applying T2 delta times walks the u-orbit back to the start
        spec = _spec([[2, 1], [1, 2]], (1, 1), (0.1j, 0.2))
        K = spec.datum.matrix
        u = K.u_class()
        config = random_configuration(spec.datum, rng)
        c = pi_group(K).elements[1]

        def t2_iter(times, cfg):
            if times == 0:
                return kvw_wavefunction(spec, c, cfg)
            return magnetic_translation(
                spec, "t2", lambda inner: t2_iter(times - 1, inner), cfg
            )

        # intermediate steps hit Phi_{c + j u}
        expect_c = c
        for j in range(1, K.delta + 1):
            expect_c = pi_add(expect_c, u)
            got = t2_iter(j, config)
            want = kvw_wavefunction(spec, expect_c, config)
            assert _residual(got, want) < 1e-9
        assert expect_c == c  # delta steps close the orbit
