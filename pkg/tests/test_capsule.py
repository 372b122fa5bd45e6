import numpy as np
import pytest

from qic import config, linalg
from qic.capsule import (
    THETA_GRID,
    NotPossible,
    alternate_qic,
    build_partner_family,
    check_qic,
    construct_qic,
    disentangler,
    find_qic,
    ghz_fixture,
    max_entangled_partner,
    partner_ops_from_schmidt,
    purity_curve_params,
    tilde_ops,
)
from qic.config import DimensionError, QICError, RankError
from qic.correlation import VirtualQubit, check_equivalence, check_partner, corr_state_single
from qic.info import WriteOp, apply_write, axis_generator
from qic.qubits import (
    KET0,
    KET_MINUS,
    KET_PLUS,
    PAULIS,
    X,
    Y,
    Z,
    StateVector,
    bell_state,
    embed,
    haar_random_state,
    purity,
    reduced_density,
    schmidt_first_qubit,
)


def schmidt_rank(vec, tol=1e-10):
    s = np.linalg.svd(vec.reshape(2, -1), compute_uv=False)
    return int(np.sum(s > tol))


def direct_b_purity(psi, s, g):
    """Oracle: purity of B' from raw matrices, without the package's pair builder."""
    u = disentangler(s, g)
    b = tilde_ops(s)
    r = [np.real(np.vdot(psi.amps, u.conj().T @ op @ u @ psi.amps)) for op in b.sigma]
    return 0.5 * (1 + sum(x * x for x in r))


def real_alpha_state():
    t = 1.0
    phi0 = np.array([np.cos(t), np.sin(t)])
    phi1 = np.array([np.sin(t), -np.cos(t)])
    rest = haar_random_state(2, 8).amps
    other = np.array([-np.conj(rest[1]), np.conj(rest[0]), 0, 0])
    other = other - np.vdot(rest, other) * rest
    other /= np.linalg.norm(other)
    return StateVector.from_amplitudes(np.sqrt(0.7) * np.kron(phi0, rest) + np.sqrt(0.3) * np.kron(phi1, other))


class TestPartnerOperators:
    @pytest.mark.parametrize("psi", [bell_state(), ghz_fixture().state, haar_random_state(4, 2)], ids=["bell", "ghz", "haar4"])
    def test_partner_purifies_physical_qubit(self, psi):
        s = schmidt_first_qubit(psi)
        b = partner_ops_from_schmidt(s)
        assert b.report.passed
        a = VirtualQubit.physical(0, psi.n_qubits)
        for op_a in a.sigma:
            for op_b in b.sigma:
                assert linalg.max_abs(linalg.commutator(op_a, op_b)) <= config.get().alg
        assert check_partner(psi, a, b).is_partner

    def test_ghz_partner_support(self, ghz):
        b = partner_ops_from_schmidt(schmidt_first_qubit(ghz))
        pp = np.kron(KET_PLUS, KET_PLUS)
        mm = np.kron(KET_MINUS, KET_MINUS)
        # the degenerate Schmidt basis may differ, but the support span is the same
        support = np.stack([np.kron(KET0, pp), np.kron(KET0, mm)], axis=1)
        proj = support @ support.conj().T
        for op in b.sigma:
            for k in range(2):
                v = op @ support[:, k]
                assert np.linalg.norm(proj @ v - v) < 1e-12

    def test_product_state_has_no_partner(self):
        psi = StateVector.from_amplitudes(np.kron(KET0, haar_random_state(2, 0).amps))
        s = schmidt_first_qubit(psi)
        for build in (partner_ops_from_schmidt, tilde_ops, purity_curve_params):
            with pytest.raises(RankError):
                build(s)
        with pytest.raises(RankError):
            disentangler(s, 0.1)

    def test_tilde_equals_plain_for_real_positive_overlaps(self):
        s = schmidt_first_qubit(real_alpha_state())
        assert np.all(np.array([s.first_factors[i][0] for i in range(2)]).real > 0)
        assert np.allclose(s.alphas, 1)
        plain, tilde = partner_ops_from_schmidt(s), tilde_ops(s)
        assert all(np.allclose(p, t) for p, t in zip(plain.sigma, tilde.sigma))

    def test_ghz_alphas(self, ghz):
        assert np.allclose(schmidt_first_qubit(ghz).alphas, 1)

    def test_alpha_fallback(self):
        psi = StateVector.from_amplitudes(np.kron([1, 0], [1, 0]) * np.sqrt(0.6) + np.kron([0, 1], [0, 1]) * np.sqrt(0.4) * 1j)
        s = schmidt_first_qubit(psi)
        assert s.alphas[1] == 1
        assert tilde_ops(s).report.passed

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_partner_extension_agrees_on_support(self, n):
        """The completed triple matches the bare rest-space formula on span{psi_0, psi_1}."""
        s = schmidt_first_qubit(haar_random_state(n, n))
        b = partner_ops_from_schmidt(s)
        p0, p1 = s.rest_factors[0], s.rest_factors[1]
        proj = np.kron(np.eye(2), np.outer(p0, p0.conj()) + np.outer(p1, p1.conj()))
        bare_x = np.kron(np.eye(2), np.outer(p0, p1.conj()) + np.outer(p1, p0.conj()))
        assert np.allclose(b.x @ proj, bare_x)
        assert np.allclose(b.x @ b.x, np.eye(2**n))


class TestDisentangler:
    def test_identity_at_zero(self, ghz):
        s = schmidt_first_qubit(ghz)
        assert np.allclose(disentangler(s, 0.0), np.eye(8))

    @pytest.mark.parametrize("g1,g2", [(0.3, 0.4), (np.pi / 2, np.pi / 2), (-1.2, 2.9)])
    def test_one_parameter_group(self, g1, g2):
        s = schmidt_first_qubit(haar_random_state(4, 1))
        lhs = disentangler(s, g1) @ disentangler(s, g2)
        assert linalg.max_abs(lhs - disentangler(s, g1 + g2)) <= config.get().recon

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_unitary_commutes_with_write_and_matches_exponential(self, n):
        s = schmidt_first_qubit(haar_random_state(n, 21))
        g = 0.77
        u = disentangler(s, g)
        assert linalg.unitarity_residual(u) <= config.get().recon
        zw = embed(Z, 0, n)
        assert linalg.max_abs(linalg.commutator(u, zw)) <= config.get().alg
        # independent route: exponentiate the restricted generator directly
        p0, p1 = s.rest_factors[0], s.rest_factors[1]
        a0, a1 = s.alphas
        off = a0 * np.conj(a1) * np.outer(p0, p1.conj())
        gen = np.kron(Z, 1j * (-off + off.conj().T))
        assert linalg.max_abs(u - linalg.unitary_from_hermitian(gen, g)) <= 1e-12

    def test_ghz_quarter_pi_disentangles(self, ghz):
        s = schmidt_first_qubit(ghz)
        for theta in (0.0, 0.4, 1.3):
            out = disentangler(s, np.pi / 4) @ apply_write(ghz, WriteOp(theta)).amps
            assert schmidt_rank(out) == 1


class TestPurityCurve:
    def test_bell_parameters(self, bell):
        p = purity_curve_params(schmidt_first_qubit(bell))
        assert (p.a, p.b, p.c) == pytest.approx((0.5, -0.5, 0.0))
        assert p.d == pytest.approx(np.pi)
        s = schmidt_first_qubit(bell)
        for g in np.linspace(0, np.pi, 9):
            assert direct_b_purity(bell, s, g) == pytest.approx(float(p.purity(g)), abs=1e-12)

    def test_ghz_parameters(self, ghz):
        p = purity_curve_params(schmidt_first_qubit(ghz))
        assert (p.a, p.b, p.c) == pytest.approx((0.5, -0.5, 0.0))
        assert p.d == pytest.approx(np.pi)
        assert p.qic_angle == pytest.approx(np.pi / 4)

    def test_zero_mean_state_has_half_floor(self):
        # p_0 = 1/2 and |<0|phi_0>|^2 = 1/2
        t = np.pi / 4
        phi0, phi1 = np.array([np.cos(t), np.sin(t)]), np.array([np.sin(t), -np.cos(t)])
        psi = StateVector.from_amplitudes((np.kron(phi0, [1, 0]) + np.kron(phi1, [0, 1])) / np.sqrt(2))
        s = schmidt_first_qubit(psi)
        assert s.probs[0] == pytest.approx(0.5) and s.overlap0() ** 2 == pytest.approx(0.5)
        assert purity_curve_params(s).a == pytest.approx(0.5)
        assert psi.expectation(embed(Z, 0, 2)).real == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_circle_identity(self, seed):
        p = purity_curve_params(schmidt_first_qubit(haar_random_state(2 + seed % 5, seed)))
        assert abs(p.b**2 + p.c**2 - (1 - p.a) ** 2) <= 1e-9
        assert 0.5 <= p.a <= 1
        assert -np.pi < p.d <= np.pi

    @pytest.mark.parametrize("seed", range(6))
    def test_floor_is_half_one_plus_mean_squared(self, seed):
        psi = haar_random_state(3, seed)
        mean = psi.expectation(embed(Z, 0, 3)).real
        assert purity_curve_params(schmidt_first_qubit(psi)).a == pytest.approx(0.5 * (1 + mean**2), abs=1e-12)


class TestPartnerFamily:
    def test_g_zero_is_physical_and_tilde(self):
        psi = haar_random_state(3, 4)
        pair = build_partner_family(psi, 0.0)
        s = schmidt_first_qubit(psi)
        assert all(np.allclose(a, b) for a, b in zip(pair.qubit_a.sigma, VirtualQubit.physical(0, 3).sigma))
        assert all(np.allclose(a, b) for a, b in zip(pair.qubit_b.sigma, tilde_ops(s).sigma))

    def test_ghz_quarter_pi_pure(self, ghz):
        pair = build_partner_family(apply_write(ghz, WriteOp(0.6)), np.pi / 4)
        assert pair.entanglement_purity == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_haar_sweep_matches_closed_form(self, seed):
        psi = apply_write(haar_random_state(5, seed), WriteOp(0.3))
        s = schmidt_first_qubit(psi)
        p = purity_curve_params(s)
        for g in np.linspace(0, np.pi, 64, endpoint=False):
            pair = build_partner_family(psi, g)
            direct = direct_b_purity(psi, s, g)
            assert abs(direct - float(p.purity(g))) <= 1e-8
            assert abs(pair.entanglement_purity - direct) <= 1e-12

    @pytest.mark.parametrize("seed", range(4))
    def test_expectations_and_partner_check(self, seed):
        psi = haar_random_state(4, 50 + seed)
        for g in np.linspace(-1.0, 2.0, 7):
            pair = build_partner_family(psi, g)
            assert np.max(np.abs(pair.qubit_b.bloch(psi) - pair.params.expectations(g))) <= 1e-8
            assert pair.check(psi).is_partner

    def test_expectations_are_write_invariant(self):
        psi = haar_random_state(3, 77)
        g = 0.5
        base = build_partner_family(psi, g)
        for theta in (0.2, 1.4):
            written = apply_write(psi, WriteOp(theta))
            pair = build_partner_family(written, g)
            assert np.allclose(pair.qubit_b.bloch(written), base.qubit_b.bloch(psi), atol=1e-10)


class TestFindQIC:
    def test_product_state_returns_physical_qubit(self):
        psi = StateVector.from_amplitudes(np.kron([0.6, 0.8j], haar_random_state(2, 3).amps))
        q = find_qic(psi)
        assert all(np.allclose(a, b) for a, b in zip(q.sigma, VirtualQubit.physical(0, 3).sigma))
        assert check_qic(psi, q).passed

    def test_single_qubit(self):
        psi = haar_random_state(1, 0)
        con = construct_qic(psi)
        assert check_qic(psi, con.qic, phi=con.phi).passed

    def test_ghz(self, ghz):
        con = construct_qic(ghz)
        crit = check_qic(ghz, con.qic, phi=con.phi)
        assert crit.passed
        fx = ghz_fixture()
        assert check_qic(ghz, fx.qic1).passed and check_qic(ghz, fx.qic2).passed

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_haar_states(self, n):
        for seed in range(5):
            psi = haar_random_state(n, 1000 * n + seed)
            con = construct_qic(psi)
            crit = check_qic(psi, con.qic, phi=con.phi)
            assert crit.passed, crit.as_dict()
            assert linalg.max_abs(con.qic.z - embed(Z, 0, n)) <= config.get().alg
            out = con.disentangler @ psi.amps
            assert np.allclose(out, np.kron(con.phi, con.rest), atol=1e-10)
            assert corr_state_single(psi, con.partner).purity >= 1 - 1e-8

    @pytest.mark.parametrize("axis", [(1, 0, 0), (0, 1, 0), (1, 2, -2), (-0.3, 0.1, -0.9)])
    def test_general_write_axis(self, axis):
        axis = np.asarray(axis, float) / np.linalg.norm(axis)
        psi = haar_random_state(4, 5)
        con = construct_qic(psi, axis)
        assert linalg.max_abs(con.qic.z - embed(axis_generator(axis), 0, 4)) <= config.get().alg
        crit = check_qic(psi, con.qic, con.generator, phi=con.phi)
        assert crit.passed, crit.as_dict()

    def test_non_qic_fails_criteria(self, bell):
        crit = check_qic(bell, VirtualQubit.physical(0, 2))
        assert crit.algebra_ok and crit.generator_ok
        assert not crit.confined and not crit.nothing_left and not crit.passed

    def test_wrong_generator_fails(self):
        psi = haar_random_state(3, 1)
        q = find_qic(psi)
        assert not check_qic(psi, q, generator=embed(X, 0, 3)).generator_ok


class TestMaxEntangled:
    def test_bell(self, bell):
        pair = max_entangled_partner(bell)
        assert not isinstance(pair, NotPossible)
        assert pair.entanglement_purity == pytest.approx(0.5, abs=1e-8)
        assert corr_state_single(bell, pair.qubit_a).purity == pytest.approx(0.5, abs=1e-8)
        assert pair.check(bell).is_partner

    def test_biased_state_not_possible(self):
        psi = StateVector.from_amplitudes([np.sqrt(0.9), 0, 0, np.sqrt(0.1)])
        res = max_entangled_partner(psi)
        assert isinstance(res, NotPossible)
        assert res.min_purity == pytest.approx(0.82, abs=1e-12)
        s = schmidt_first_qubit(psi)
        sweep = [direct_b_purity(psi, s, g) for g in np.linspace(0, np.pi, 721)]
        assert min(sweep) == pytest.approx(0.82, abs=1e-8)

    def test_ghz(self, ghz):
        pair = max_entangled_partner(ghz)
        assert not isinstance(pair, NotPossible)
        assert pair.entanglement_purity == pytest.approx(0.5, abs=1e-8)


class TestAlternateQIC:
    def test_ghz_involution_reproduces_second_qic(self):
        fx = ghz_fixture()
        w = alternate_qic(fx.state, fx.construction, linalg.tensor(X, X))
        assert all(np.array_equal(a, b) for a, b in zip(w.alt_qic.sigma, fx.qic2.sigma))
        assert not w.equivalence.equivalent

    def test_default_involution_on_ghz(self, ghz):
        w = alternate_qic(ghz)
        assert check_qic(ghz, w.alt_qic).passed
        assert not w.equivalence.equivalent

    @pytest.mark.parametrize("seed", range(3))
    def test_two_qubit_states(self, seed):
        psi = haar_random_state(2, seed)
        con = construct_qic(psi)
        w = alternate_qic(psi, con)
        assert np.allclose(w.involution, 2 * np.outer(con.rest, con.rest.conj()) - np.eye(2))
        assert check_qic(psi, w.alt_qic).passed
        assert not w.equivalence.equivalent

    def test_haar_four_qubits_residual(self):
        psi = haar_random_state(4, 12)
        con = construct_qic(psi)
        w = alternate_qic(psi, con)
        o = w.involution
        assert linalg.max_abs(o @ o - np.eye(8)) <= config.get().recon
        assert np.linalg.norm(o @ con.rest - con.rest) <= config.get().recon
        assert w.equivalence.residual > 0.5
        # the residual of the default involution is sqrt(1 - (1 - 2^(2-N))^2)
        assert w.equivalence.residual == pytest.approx(np.sqrt(1 - (1 - 2.0 ** (2 - 4)) ** 2), abs=1e-9)
        assert check_qic(psi, w.alt_qic).passed

    def test_rejects_bad_involutions(self):
        psi = haar_random_state(3, 2)
        con = construct_qic(psi)
        with pytest.raises(QICError):
            alternate_qic(psi, con, np.eye(4))
        with pytest.raises(QICError):
            alternate_qic(psi, con, np.diag([1, 1, 1, 2.0]))
        with pytest.raises(QICError):
            alternate_qic(psi, con, linalg.tensor(Z, Z))  # does not fix the rest factor
        with pytest.raises(DimensionError):
            alternate_qic(haar_random_state(1, 0))


class TestGHZFixture:
    def test_operators_exact(self):
        fx = ghz_fixture()
        expected1 = [linalg.tensor(X, X, PAULIS[0]), linalg.tensor(Y, X, PAULIS[0]), linalg.tensor(Z, PAULIS[0], PAULIS[0])]
        expected2 = [linalg.tensor(X, PAULIS[0], X), linalg.tensor(Y, PAULIS[0], X), linalg.tensor(Z, PAULIS[0], PAULIS[0])]
        assert all(np.array_equal(a, b) for a, b in zip(fx.qic1.sigma, expected1))
        assert all(np.array_equal(a, b) for a, b in zip(fx.qic2.sigma, expected2))
        conj = VirtualQubit.physical(0, 3).conjugated(fx.explicit_U)
        assert all(np.array_equal(a, b) for a, b in zip(conj.sigma, expected1))

    def test_sigma_z_on_000(self):
        v = np.zeros(8)
        v[0] = 1
        assert np.array_equal(ghz_fixture().qic1.z @ v, v)

    @pytest.mark.parametrize("theta", [0.0, 0.3, 2.0])
    def test_explicit_unitary(self, theta):
        fx = ghz_fixture()
        out = fx.explicit_U @ apply_write(fx.state, WriteOp(theta)).amps
        w = np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
        rest = (np.kron(KET_PLUS, KET_PLUS) + np.kron(KET_MINUS, KET_MINUS)) / np.sqrt(2)
        assert linalg.max_abs(out - np.kron(w @ KET_PLUS, rest)) <= 1e-10
        assert linalg.unitarity_residual(fx.explicit_U) == 0

    def test_qubit_exchange_relates_the_two_qics(self):
        fx = ghz_fixture()
        perm = np.zeros((8, 8))
        for i in range(8):
            b = [(i >> 2) & 1, (i >> 1) & 1, i & 1]
            j = (b[0] << 2) | (b[2] << 1) | b[1]
            perm[j, i] = 1
        for a, b in zip(fx.qic1.sigma, fx.qic2.sigma):
            assert np.array_equal(perm @ a @ perm.T, b)
        for theta in (0.0, 0.7):
            psi_t = apply_write(fx.state, WriteOp(theta))
            assert np.allclose(perm @ psi_t.amps, psi_t.amps)
