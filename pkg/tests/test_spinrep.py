"""Dense simulation: transfer pinning, distances, diagnostics, error lift."""

import random

import numpy as np
import pytest
import scipy.linalg

from mgsynth import spinrep
from mgsynth.errors import CapError, DimensionError, NormalizationError, NotOrthogonalError
from mgsynth.somat import GateKind, GeneratorId, TransferMatrix, eval_product, generator
from mgsynth.targets import random_haar_so

from conftest import random_word


def test_rz_zero_is_identity():
    assert np.allclose(spinrep.rz_unitary(2, 1, 0.0), np.eye(4))


def test_rxx_half_turn_matrix():
    u = spinrep.rxx_unitary(2, 1, np.pi / 2)
    want = (np.eye(4) + 1j * np.kron([[0, 1], [1, 0]], [[0, 1], [1, 0]])) / np.sqrt(2)
    assert np.allclose(u, want, atol=1e-12)


def test_sbar_squared_is_iz():
    u = spinrep.generator_unitary(1, GeneratorId(GateKind.S, 1))
    assert np.allclose(u @ u, 1j * np.diag([1, -1]), atol=1e-12)


def test_transfer_matrix_pins_generators():
    for n, gid in [
        (1, GeneratorId(GateKind.T, 1)),
        (1, GeneratorId(GateKind.S, 1)),
        (2, GeneratorId(GateKind.R, 1)),
    ]:
        q = spinrep.transfer_matrix(spinrep.generator_unitary(n, gid))
        want = generator(n, gid).to_float_array()
        assert np.abs(q - want).max() < 1e-12


def test_transfer_matrix_identity():
    q = spinrep.transfer_matrix(np.eye(8, dtype=complex))
    assert np.allclose(q, np.eye(6))


def test_homomorphism_pinning():
    # the single test that fixes the global orientation convention
    rng = random.Random(2)
    for trial in range(25):
        n = rng.randint(1, 5)
        word = random_word(n, rng.randint(1, 30), rng)
        u = spinrep.circuit_unitary(n, word)
        q = spinrep.transfer_matrix(u)
        q_ring = eval_product(n, word).to_float_array()
        assert np.abs(q - q_ring).max() <= 1e-9


def test_double_cover():
    u = spinrep.generator_unitary(1, GeneratorId(GateKind.S, 1))
    assert np.allclose(np.linalg.matrix_power(u, 4), -np.eye(2), atol=1e-12)
    assert eval_product(1, [GeneratorId(GateKind.S, 1)] * 4) == TransferMatrix.identity(1)


def test_cap_error():
    with pytest.raises(CapError):
        spinrep.rz_unitary(7, 1, 0.1)
    assert spinrep.rz_unitary(7, 1, 0.1, cap=7).shape == (128, 128)


def test_not_matchgate_rejected():
    from mgsynth.errors import NotMatchgateError

    cnotish = np.eye(4, dtype=complex)
    cnotish[2:, 2:] = np.array([[0, 1], [1, 0]])
    with pytest.raises(NotMatchgateError):
        spinrep.transfer_matrix(cnotish)


def test_gate_unitary_dispatcher():
    from mgsynth.approx import PlanarRotation
    from mgsynth.somat import GateKind, GeneratorId

    u1 = spinrep.gate_unitary(2, GeneratorId(GateKind.T, 1))
    u2 = spinrep.gate_unitary(2, PlanarRotation(1, np.pi / 4))
    assert np.abs(u1 - u2).max() < 1e-12
    u3 = spinrep.gate_unitary(2, PlanarRotation(2, np.pi / 2))
    u4 = spinrep.gate_unitary(2, GeneratorId(GateKind.R, 1))
    assert np.abs(u3 - u4).max() < 1e-12


class TestDistances:
    def test_zero_distance(self):
        u = spinrep.rz_unitary(2, 1, 0.7)
        assert spinrep.op_norm_dist(u, u) == 0.0
        assert spinrep.adjoint_dist(u, u) < 1e-12

    def test_global_phase(self):
        phi = 0.3
        u = np.eye(4, dtype=complex)
        v = np.exp(1j * phi) * u
        assert spinrep.op_norm_dist(u, v) == pytest.approx(abs(np.exp(1j * phi) - 1))
        assert spinrep.adjoint_dist(u, v) < 1e-12
        assert spinrep.phase_aligned_dist(u, v) < 1e-7

    def test_adjoint_at_most_twice_op_norm(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            u, _ = np.linalg.qr(a)
            b = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            v, _ = np.linalg.qr(b)
            assert spinrep.adjoint_dist(u, v) <= 2 * spinrep.op_norm_dist(u, v) + 1e-12

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            spinrep.op_norm_dist(np.eye(2), np.eye(4))


class TestOperatorEntanglement:
    def test_product_operators_have_zero(self):
        assert spinrep.operator_entanglement(np.eye(4, dtype=complex)) < 1e-12
        u = spinrep.rz_unitary(2, 1, 1.1)
        assert spinrep.operator_entanglement(u) < 1e-12
        rng = np.random.default_rng(8)
        a, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        b, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        assert spinrep.operator_entanglement(np.kron(a, b)) < 1e-12

    def test_rxx_analytic_form(self):
        # SVD of the reshuffled operator gives 1 - cos^4 - sin^4 exactly
        for theta in np.linspace(0, 2 * np.pi, 17):
            u = spinrep.rxx_unitary(2, 1, float(theta))
            want = 1 - np.cos(theta / 2) ** 4 - np.sin(theta / 2) ** 4
            assert spinrep.operator_entanglement(u) == pytest.approx(want, abs=1e-12)
        assert spinrep.operator_entanglement(
            spinrep.rxx_unitary(2, 1, np.pi / 2)
        ) == pytest.approx(0.5, abs=1e-12)

    def test_range(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            u, _ = np.linalg.qr(a)
            e = spinrep.operator_entanglement(u)
            assert 0.0 <= e <= 0.75 + 1e-12

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            spinrep.operator_entanglement(np.eye(8, dtype=complex))


class TestStabilizerEntropy:
    def test_computational_basis_state(self):
        state = np.zeros(16)
        state[0] = 1.0
        assert spinrep.stabilizer_entropy(state) == pytest.approx(1.0, abs=1e-12)

    def test_t_plus_state(self):
        plus = np.array([1, 1]) / np.sqrt(2)
        tplus = np.diag([1, np.exp(1j * np.pi / 4)]) @ plus
        # oracle: expectations of I, X, Y, Z are 1, 1/sqrt2, 1/sqrt2, 0
        want = (1 + 0.25 + 0.25 + 0) / 2
        assert spinrep.stabilizer_entropy(tplus) == pytest.approx(want, abs=1e-12)
        assert want == 0.75

    def test_bounded_by_one(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            psi /= np.linalg.norm(psi)
            assert spinrep.stabilizer_entropy(psi) <= 1.0 + 1e-12

    def test_normalization_error(self):
        with pytest.raises(NormalizationError):
            spinrep.stabilizer_entropy(np.array([1.0, 1.0]))


class TestLiftAndTheorem2:
    def test_lift_reconstructs_transfer(self):
        for n in (2, 3, 4):
            q = random_haar_so(n, seed=n)
            u = spinrep.lift_orthogonal(q)
            assert np.abs(u @ u.conj().T - np.eye(1 << n)).max() < 1e-10
            assert np.abs(spinrep.transfer_matrix(u) - q).max() < 1e-9

    def test_equal_inputs(self):
        q = random_haar_so(2, seed=1)
        rec = spinrep.check_theorem2(q, q)
        assert rec["eps_so"] < 1e-12 and rec["eps_spin"] < 1e-10 and rec["holds"]

    def test_single_plane_rotation_oracle(self):
        # rotation by delta in one plane: eps_so = 2 sin(delta/2) and the
        # lifted adjoint error is 2 sin(delta/2) as well (phases +-delta/2)
        for delta in (0.01, 0.2, 1.0):
            q = np.eye(4)
            g = np.zeros((4, 4))
            g[0, 1], g[1, 0] = delta, -delta
            q_eps = scipy.linalg.expm(g)
            rec = spinrep.check_theorem2(q, q_eps)
            want = 2 * np.sin(delta / 2)
            assert rec["eps_so"] == pytest.approx(want, abs=1e-9)
            assert rec["eps_spin"] == pytest.approx(want, abs=1e-9)
            assert rec["holds"]

    def test_random_pairs_hold(self):
        rng = np.random.default_rng(12)
        for n in (2, 3, 6):
            for _ in range(10):
                q = random_haar_so(n, seed=int(rng.integers(0, 2**31)))
                g = rng.standard_normal((2 * n, 2 * n)) * 10.0 ** rng.uniform(-4, -1)
                q_eps = q @ scipy.linalg.expm(g - g.T)
                assert spinrep.check_theorem2(q, q_eps)["holds"]

    def test_not_orthogonal_error(self):
        with pytest.raises(NotOrthogonalError):
            spinrep.check_theorem2(np.eye(4) * 1.5, np.eye(4))
