import numpy as np
import pytest

from paulisdp.models import ising_hamiltonian, ising_split
from paulisdp.pauli import DimensionMismatchError, PauliString
from paulisdp.states import (
    DenseState,
    HardwareEfficientCircuit,
    PlusState,
    ProductState,
    QuantumAnnealingState,
    ZeroState,
    prepare,
)


def random_dense_state(rng, n):
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return DenseState(amps)


class TestPreparation:
    def test_zero_state(self):
        st = prepare(ZeroState(), 3)
        dense = st.to_dense()
        expected = np.zeros(8)
        expected[0] = 1.0
        np.testing.assert_allclose(dense.amplitudes, expected, atol=1e-14)

    def test_plus_state(self):
        st = prepare(PlusState(), 2).to_dense()
        np.testing.assert_allclose(st.amplitudes, np.full(4, 0.5), atol=1e-14)

    def test_hardware_efficient_norm_and_reproducibility(self):
        spec = HardwareEfficientCircuit(layers=4, seed=42)
        a = prepare(spec, 5)
        b = prepare(spec, 5)
        assert abs(np.linalg.norm(a.amplitudes) - 1.0) < 1e-12
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)

    def test_hardware_efficient_explicit_angles_real(self):
        angles = tuple(tuple(0.3 * (i + j) for i in range(3)) for j in range(2))
        st = prepare(HardwareEfficientCircuit(layers=2, angles=angles), 3)
        # y rotations and CNOTs keep amplitudes real
        assert np.max(np.abs(st.amplitudes.imag)) < 1e-14

    def test_single_layer_circuit_matches_hand_construction(self):
        # one qubit pair, angles (t0, t1): Ry rotations then CNOT(0 -> 1)
        t0, t1 = 0.7, -1.2
        st = prepare(HardwareEfficientCircuit(layers=1, angles=((t0, t1),)), 2)
        ry = lambda t: np.array([[np.cos(t / 2), -np.sin(t / 2)], [np.sin(t / 2), np.cos(t / 2)]])
        psi = np.kron(ry(t0) @ [1, 0], ry(t1) @ [1, 0])
        cnot = np.eye(4)[[0, 1, 3, 2]]
        np.testing.assert_allclose(st.amplitudes, cnot @ psi, atol=1e-14)

    def test_annealing_fidelity_grows_with_layers(self):
        n = 4
        h = ising_hamiltonian(n, g=1.0, h=1.0)
        hz, hx = ising_split(n, g=1.0, h=1.0)
        evals, evecs = np.linalg.eigh(h.matrix())
        ground = evecs[:, 0]
        fidelities = []
        for p in (1, 2, 4, 16, 32):
            st = prepare(QuantumAnnealingState(layers=p, total_time=0.2, hz=hz, hx=hx), n)
            fidelities.append(abs(np.vdot(ground, st.amplitudes)) ** 2)
        assert fidelities[-1] > 0.9
        for lo, hi in zip(fidelities, fidelities[1:]):
            assert hi > lo

    def test_annealing_rejects_bad_parts(self):
        hz, hx = ising_split(4)
        with pytest.raises(ValueError):
            prepare(QuantumAnnealingState(layers=2, total_time=0.5, hz=hx, hx=hx), 4)
        with pytest.raises(ValueError):
            prepare(QuantumAnnealingState(layers=2, total_time=0.5, hz=hz, hx=hz), 4)

    def test_dense_cap(self):
        from paulisdp.pauli import DenseLimitError

        with pytest.raises(DenseLimitError):
            prepare(HardwareEfficientCircuit(layers=1, seed=0), 15)
        # product backends are exempt
        st = prepare(ZeroState(), 40)
        assert st.n_qubits == 40


class TestExpectation:
    def test_zero_state_all_z(self):
        st = prepare(ZeroState(), 4)
        assert st.expectation(PauliString.from_label("ZZZZ")) == 1.0

    def test_plus_state_x(self):
        st = prepare(PlusState(), 3)
        for site in range(3):
            p = PauliString.single(3, site, "X")
            assert abs(st.expectation(p) - 1.0) < 1e-14

    def test_identity_expectation_is_one(self):
        rng = np.random.default_rng(0)
        st = random_dense_state(rng, 4)
        assert abs(st.expectation(PauliString.identity(4)) - 1.0) < 1e-12

    def test_random_circuit_matches_dense_oracle(self):
        rng = np.random.default_rng(123)
        st = prepare(HardwareEfficientCircuit(layers=3, seed=5), 6)
        for _ in range(25):
            codes = rng.integers(0, 4, size=6).astype(np.uint8)
            p = PauliString(codes, phase_power=int(rng.integers(0, 4)))
            expected = np.vdot(st.amplitudes, p.matrix() @ st.amplitudes)
            assert abs(st.expectation(p) - expected) < 1e-12

    def test_hermitian_expectation_in_range(self):
        rng = np.random.default_rng(7)
        st = random_dense_state(rng, 5)
        for _ in range(30):
            p = PauliString(rng.integers(0, 4, size=5).astype(np.uint8))
            val = st.expectation(p)
            assert abs(val.imag) < 1e-12
            assert -1.0 - 1e-12 <= val.real <= 1.0 + 1e-12

    def test_product_and_dense_agree(self):
        rng = np.random.default_rng(31)
        factors = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
        prod = ProductState(factors)
        dense = prod.to_dense()
        for _ in range(30):
            p = PauliString(rng.integers(0, 4, size=5).astype(np.uint8),
                            phase_power=int(rng.integers(0, 4)))
            assert abs(prod.expectation(p) - dense.expectation(p)) < 1e-12

    def test_dimension_mismatch(self):
        st = prepare(ZeroState(), 3)
        with pytest.raises(DimensionMismatchError):
            st.expectation(PauliString.identity(4))


class TestSampling:
    def test_eigenstate_zero_variance(self):
        st = prepare(ZeroState(), 3)
        p = PauliString.from_label("ZIZ")
        for seed in range(5):
            assert st.sampled_expectation(p, shots=7, seed=seed) == 1.0

    def test_negative_phase(self):
        st = prepare(ZeroState(), 2)
        p = PauliString.from_label("ZZ", phase_power=2)  # -ZZ
        assert st.sampled_expectation(p, shots=3, seed=0) == -1.0

    def test_rejects_non_hermitian(self):
        st = prepare(ZeroState(), 2)
        with pytest.raises(ValueError):
            st.sampled_expectation(PauliString.from_label("ZZ", phase_power=1), 10, seed=0)

    def test_deterministic_given_seed(self):
        st = prepare(HardwareEfficientCircuit(layers=2, seed=3), 4)
        p = PauliString.from_label("XYZI")
        a = st.sampled_expectation(p, shots=500, seed=11)
        b = st.sampled_expectation(p, shots=500, seed=11)
        assert a == b

    def test_zero_mean_concentration(self):
        # <Z> = 0 on |+>; 10^4 shots stay within 5e-2 across many seeds
        st = prepare(PlusState(), 1)
        p = PauliString.from_label("Z")
        for seed in range(60):
            assert abs(st.sampled_expectation(p, shots=10_000, seed=seed)) <= 5e-2

    def test_product_backend_sampling(self):
        st = prepare(PlusState(), 30)
        p = PauliString.single(30, 7, "X")
        assert st.sampled_expectation(p, shots=64, seed=1) == 1.0
        z = PauliString.single(30, 7, "Z")
        vals = [st.sampled_expectation(z, shots=4096, seed=s) for s in range(20)]
        assert abs(np.mean(vals)) < 0.05

    def test_hoeffding_scaling(self):
        # RMSE over seeds follows shots^(-1/2) within a factor of two
        st = prepare(HardwareEfficientCircuit(layers=2, seed=9), 4)
        p = PauliString.from_label("XZIY", phase_power=0)
        exact = st.expectation(p).real
        rmse = {}
        for shots in (100, 1000, 10_000):
            errs = [
                st.sampled_expectation(p, shots=shots, seed=s) - exact for s in range(100)
            ]
            rmse[shots] = float(np.sqrt(np.mean(np.square(errs))))
        ratio_100_10000 = rmse[100] / rmse[10_000]
        assert 5.0 < ratio_100_10000 < 20.0  # ideal is 10
        ratio_100_1000 = rmse[100] / rmse[1000]
        assert 1.58 < ratio_100_1000 < 6.32  # ideal is sqrt(10)
