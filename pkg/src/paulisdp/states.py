"""Ansatz seed states and Pauli expectation values, exact or shot-sampled.

Two backends realize a prepared state:

- :class:`DenseState` holds the full 2^n statevector (capped by
  ``dense_cap``, default 14 qubits, roughly 256 KB of amplitudes).
- :class:`ProductState` holds one 2-component vector per qubit and
  evaluates Pauli expectations in O(n), which is what makes the
  1000-qubit largest-eigenvalue runs possible.

Bit convention matches :mod:`paulisdp.pauli`: qubit 0 is the most
significant bit of a basis index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import (
    DENSE_QUBIT_CAP,
    DenseLimitError,
    DimensionMismatchError,
    PauliString,
    PauliSum,
)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
# Basis changes U with U sigma U^dag = Z, applied to the state before
# sampling in the computational basis.
_MEASURE_ROTATIONS = {1: _H, 2: _H @ np.diag([1.0, -1j]), 3: np.eye(2, dtype=complex)}


# ---------------------------------------------------------------------------
# state specifications


@dataclass(frozen=True)
class ZeroState:
    """Computational all-zeros product state |0...0>."""


@dataclass(frozen=True)
class PlusState:
    """Uniform-superposition product state |+...+>."""


@dataclass(frozen=True)
class HardwareEfficientCircuit:
    """Layers of per-qubit y rotations followed by a CNOT chain.

    Angles are either drawn uniformly from [0, 2*pi) from ``seed`` or given
    explicitly as a (layers, n_qubits) nested tuple so runs are
    bit-reproducible.
    """

    layers: int = 1
    seed: int | None = None
    angles: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.seed is None and self.angles is None:
            raise ValueError("provide either a seed or explicit angles")
        if self.angles is not None and len(self.angles) != self.layers:
            raise ValueError("angles must have one row per layer")


@dataclass(frozen=True)
class QuantumAnnealingState:
    """Discretized annealing circuit acting on |+...+>.

    For layers k = 1..p the circuit applies exp(-i (T k / p) H_z) followed
    by exp(-i T H_x).  H_z must be diagonal (I/Z letters only) and H_x a sum
    of single-site X terms; both exponentials are then exact, so the only
    approximation is the layer splitting itself.
    """

    layers: int
    total_time: float
    hz: PauliSum
    hx: PauliSum

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")


StateSpec = ZeroState | PlusState | HardwareEfficientCircuit | QuantumAnnealingState


# ---------------------------------------------------------------------------
# backends


class ProductState:
    """Tensor product of single-qubit states; expectations in O(n)."""

    def __init__(self, factors: np.ndarray):
        factors = np.asarray(factors, dtype=complex)
        if factors.ndim != 2 or factors.shape[1] != 2:
            raise ValueError("factors must have shape (n_qubits, 2)")
        norms = np.linalg.norm(factors, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero single-qubit factor")
        self.factors = factors / norms[:, None]
        self.n_qubits = factors.shape[0]
        v0, v1 = self.factors[:, 0], self.factors[:, 1]
        cross = np.conj(v0) * v1
        # per-site expectation of I, X, Y, Z: table[j, code]
        self._site_values = np.stack(
            [
                np.ones(self.n_qubits),
                2.0 * cross.real,
                2.0 * cross.imag,
                np.abs(v0) ** 2 - np.abs(v1) ** 2,
            ],
            axis=1,
        )

    def expectation(self, p: PauliString) -> complex:
        if p.n_qubits != self.n_qubits:
            raise DimensionMismatchError("string and state qubit counts differ")
        vals = self._site_values[np.arange(self.n_qubits), p.codes]
        return p.phase * float(np.prod(vals))

    def sampled_expectation(self, p: PauliString, shots: int, seed: int) -> float:
        _check_sampling_args(self, p, shots)
        rng = np.random.default_rng(seed)
        sites = np.nonzero(p.codes)[0]
        if sites.size == 0:
            return float(p.phase.real)
        rotated = np.empty((sites.size, 2), dtype=complex)
        for k, j in enumerate(sites):
            rotated[k] = _MEASURE_ROTATIONS[int(p.codes[j])] @ self.factors[j]
        p_one = np.abs(rotated[:, 1]) ** 2
        bits = rng.random((shots, sites.size)) < p_one[None, :]
        values = 1.0 - 2.0 * (bits.sum(axis=1) & 1)
        return float(p.phase.real) * float(values.mean())

    def to_dense(self, dense_cap: int = DENSE_QUBIT_CAP) -> "DenseState":
        if self.n_qubits > dense_cap:
            raise DenseLimitError(f"dense backend capped at {dense_cap} qubits")
        amps = self.factors[0]
        for j in range(1, self.n_qubits):
            amps = np.kron(amps, self.factors[j])
        return DenseState(amps)

    def inner(self, other: "ProductState") -> complex:
        """<self|other>."""
        per_site = np.sum(np.conj(self.factors) * other.factors, axis=1)
        return complex(np.prod(per_site))


class DenseState:
    """Full statevector backend."""

    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.ndim != 1 or amplitudes.size & (amplitudes.size - 1):
            raise ValueError("amplitude vector length must be a power of two")
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise ValueError("zero statevector")
        self.amplitudes = amplitudes / norm
        self.n_qubits = int(np.log2(amplitudes.size))

    def expectation(self, p: PauliString) -> complex:
        if p.n_qubits != self.n_qubits:
            raise DimensionMismatchError("string and state qubit counts differ")
        return complex(np.vdot(self.amplitudes, p.apply(self.amplitudes)))

    def sampled_expectation(self, p: PauliString, shots: int, seed: int) -> float:
        _check_sampling_args(self, p, shots)
        rng = np.random.default_rng(seed)
        sites = np.nonzero(p.codes)[0]
        if sites.size == 0:
            return float(p.phase.real)
        psi = self.amplitudes
        for j in sites:
            psi = _apply_single(psi, self.n_qubits, int(j), _MEASURE_ROTATIONS[int(p.codes[j])])
        probs = np.abs(psi) ** 2
        probs /= probs.sum()
        outcomes = rng.choice(probs.size, size=shots, p=probs)
        mask = np.uint64(sum(1 << (self.n_qubits - 1 - int(j)) for j in sites))
        parities = np.bitwise_count(outcomes.astype(np.uint64) & mask) & 1
        values = 1.0 - 2.0 * parities
        return float(p.phase.real) * float(values.mean())

    def inner(self, other: "DenseState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


QuantumState = DenseState | ProductState


def _check_sampling_args(state, p: PauliString, shots: int) -> None:
    if p.n_qubits != state.n_qubits:
        raise DimensionMismatchError("string and state qubit counts differ")
    if not p.is_hermitian:
        raise ValueError("sampled expectation requires a Hermitian string (phase +/-1)")
    if shots < 1:
        raise ValueError("shots must be >= 1")


# ---------------------------------------------------------------------------
# gates (dense backend only)


def _apply_single(psi: np.ndarray, n: int, qubit: int, u: np.ndarray) -> np.ndarray:
    tensor = np.moveaxis(psi.reshape([2] * n), qubit, 0)
    tensor = np.tensordot(u, tensor, axes=(1, 0))
    return np.moveaxis(tensor, 0, qubit).reshape(-1)

def _apply_cnot(psi: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    tensor = psi.reshape([2] * n).copy()
    sl = [slice(None)] * n
    sl[control] = 1
    sl0, sl1 = list(sl), list(sl)
    sl0[target] = 0
    sl1[target] = 1
    tensor[tuple(sl0)], tensor[tuple(sl1)] = (
        tensor[tuple(sl1)].copy(),
        tensor[tuple(sl0)].copy(),
    )
    return tensor.reshape(-1)

def _ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)

def _rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def diagonal_values(op: PauliSum) -> np.ndarray:
    """Diagonal of a {I,Z}-only PauliSum as a length-2^n real vector."""
    n = op.n_qubits
    diag = np.zeros(1 << n, dtype=complex)
    idx = np.arange(1 << n, dtype=np.uint64)
    for coeff, string in op.terms():
        if np.any((string.codes == 1) | (string.codes == 2)):
            raise ValueError("operator is not diagonal in the computational basis")
        _, z_mask = string.masks()
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z_mask)) & 1)
        diag += coeff * signs
    if np.max(np.abs(diag.imag), initial=0.0) > 1e-12:
        raise ValueError("diagonal operator has complex coefficients")
    return diag.real


def _single_site_x_terms(op: PauliSum) -> np.ndarray:
    """Per-site coefficients of a sum of single-site X terms."""
    coeffs = np.zeros(op.n_qubits)
    for coeff, string in op.terms():
        sites = np.nonzero(string.codes)[0]
        if sites.size != 1 or string.codes[sites[0]] != 1:
            raise ValueError("operator is not a sum of single-site X terms")
        if abs(coeff.imag) > 1e-12:
            raise ValueError("X-term coefficients must be real")
        coeffs[sites[0]] += coeff.real
    return coeffs


# ---------------------------------------------------------------------------
# preparation


def prepare(spec: StateSpec, n_qubits: int, dense_cap: int = DENSE_QUBIT_CAP) -> QuantumState:
    """Prepare the seed state described by ``spec`` on ``n_qubits`` qubits."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    if isinstance(spec, ZeroState):
        return ProductState(np.tile([1.0, 0.0], (n_qubits, 1)))
    if isinstance(spec, PlusState):
        return ProductState(np.tile([1.0, 1.0], (n_qubits, 1)) / np.sqrt(2.0))
    if n_qubits > dense_cap:
        raise DenseLimitError(
            f"circuit state preparation needs the dense backend (cap {dense_cap} qubits)"
        )
    if isinstance(spec, HardwareEfficientCircuit):
        return _prepare_hardware_efficient(spec, n_qubits)
    if isinstance(spec, QuantumAnnealingState):
        return _prepare_annealing(spec, n_qubits)
    raise TypeError(f"unknown state spec {spec!r}")


def _prepare_hardware_efficient(spec: HardwareEfficientCircuit, n: int) -> DenseState:
    if spec.angles is not None:
        angles = np.asarray(spec.angles, dtype=float)
        if angles.shape != (spec.layers, n):
            raise ValueError(f"angles must have shape ({spec.layers}, {n})")
    else:
        rng = np.random.default_rng(spec.seed)
        angles = rng.uniform(0.0, 2.0 * np.pi, size=(spec.layers, n))
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    for layer in range(spec.layers):
        for j in range(n):
            psi = _apply_single(psi, n, j, _ry(angles[layer, j]))
        for j in range(n - 1):
            psi = _apply_cnot(psi, n, j, j + 1)
    return DenseState(psi)


def _prepare_annealing(spec: QuantumAnnealingState, n: int) -> DenseState:
    if spec.hz.n_qubits != n or spec.hx.n_qubits != n:
        raise DimensionMismatchError("annealing Hamiltonian parts do not match n_qubits")
    diag = diagonal_values(spec.hz)
    x_coeffs = _single_site_x_terms(spec.hx)
    psi = np.full(1 << n, 1.0 / np.sqrt(1 << n), dtype=complex)
    t = spec.total_time
    p = spec.layers
    for k in range(1, p + 1):
        psi = psi * np.exp(-1j * (t * k / p) * diag)
        for j in range(n):
            if x_coeffs[j] != 0.0:
                psi = _apply_single(psi, n, j, _rx(2.0 * t * x_coeffs[j]))
    return DenseState(psi)
