"""Brute-force references the test suite checks the pipeline against.

Everything here works at full Hilbert-space (or graph) dimension and is
deliberately independent of the ansatz/overlap machinery: this module may
import only :mod:`paulisdp.pauli` and :mod:`paulisdp.sdp`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .pauli import PauliSum
from .sdp import SdpConstraint, SdpProblem, SdpSolution, solve


class EmptySectorError(ValueError):
    """No eigenstate carries the requested conserved value."""


@dataclass
class DenseSpectrum:
    """Full eigendecomposition, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]

    def reconstruction_residual(self, dense: np.ndarray) -> float:
        approx = (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T
        scale = max(np.linalg.norm(dense), 1e-300)
        return float(np.linalg.norm(dense - approx) / scale)


def spectrum(op: PauliSum, max_qubits: int = 14) -> DenseSpectrum:
    dense = op.matrix(max_qubits)
    evals, evecs = np.linalg.eigh(dense)
    return DenseSpectrum(eigenvalues=evals, eigenvectors=evecs)


def sector_minimum(
    hamiltonian: PauliSum,
    symmetry: PauliSum,
    value: float,
    tol: float = 1e-8,
    max_qubits: int = 12,
) -> float:
    """Lowest eigenenergy among simultaneous eigenstates with <S> = value.

    Degenerate energy levels are rotated to diagonalize the symmetry inside
    each level first, since raw eigenvectors of a degenerate Hamiltonian need
    not be symmetry eigenstates.  Both <S> and <S^2> are pinned, matching the
    constrained programs this checks.
    """
    if not symmetry.commutes_with(hamiltonian):
        raise ValueError("symmetry does not commute with the Hamiltonian")
    h = hamiltonian.matrix(max_qubits)
    s = symmetry.matrix(max_qubits)
    evals, evecs = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(evals))))
    best = None
    start = 0
    while start < evals.size:
        stop = start + 1
        while stop < evals.size and evals[stop] - evals[start] <= 1e-9 * scale:
            stop += 1
        block = evecs[:, start:stop]
        s_block = block.conj().T @ s @ block
        _, rot = np.linalg.eigh((s_block + s_block.conj().T) / 2.0)
        rotated = block @ rot
        s_vals = np.einsum("ik,ij,jk->k", rotated.conj(), s, rotated).real
        s2_vals = np.einsum("ik,ij,jk->k", rotated.conj(), s @ s, rotated).real
        hit = (np.abs(s_vals - value) <= tol) & (np.abs(s2_vals - value**2) <= tol)
        if np.any(hit):
            energy = float(evals[start])
            best = energy if best is None else min(best, energy)
        start = stop
    if best is None:
        raise EmptySectorError(f"no eigenstate with conserved value {value}")
    return best


def classical_xor_value(pi, f) -> float:
    """Exhaustive maximum of an XOR game over deterministic strategies."""
    pi = np.asarray(pi, dtype=float)
    f = np.asarray(f, dtype=int)
    n_x, n_y = pi.shape
    if n_x > 16 or n_y > 16:
        raise ValueError("exhaustive search capped at 16 questions per side")
    best = 0.0
    for a_bits in itertools.product((0, 1), repeat=n_x):
        a = np.array(a_bits)
        for b_bits in itertools.product((0, 1), repeat=n_y):
            b = np.array(b_bits)
            wins = (a[:, None] ^ b[None, :]) == f
            best = max(best, float(pi[wins].sum()))
    return best


def lovasz_theta_direct(n_vertices: int, edges, tol: float = 1e-9) -> float:
    """Graph-dimension Lovasz theta SDP: max <J, X>, X_ij = 0 on edges, Tr X = 1."""
    if n_vertices > 32:
        raise ValueError("direct theta capped at 32 vertices")
    n = n_vertices
    constraints = [SdpConstraint({"x": np.eye(n)}, 1.0)]
    for i, j in edges:
        a = np.zeros((n, n))
        a[i, j] = a[j, i] = 1.0
        constraints.append(SdpConstraint({"x": a}, 0.0))
    problem = SdpProblem(
        blocks=[("x", n)],
        sense="max",
        objective={"x": np.ones((n, n))},
        constraints=constraints,
    )
    sol = solve(problem, tol_feas=tol, tol_gap=tol)
    if not sol.is_optimal:
        raise RuntimeError(f"direct theta solve failed: {sol.status}")
    return sol.objective_value


def xor_bias_direct(h_matrix: np.ndarray, tol: float = 1e-9) -> float:
    """Full-dimension XOR-game bias SDP: max <H, Z> with unit diagonal."""
    h_matrix = np.asarray(h_matrix, dtype=float)
    n = h_matrix.shape[0]
    if n > 64:
        raise ValueError("direct bias SDP capped at dimension 64")
    constraints = []
    for i in range(n):
        a = np.zeros((n, n))
        a[i, i] = 1.0
        constraints.append(SdpConstraint({"z": a}, 1.0))
    problem = SdpProblem(
        blocks=[("z", n)], sense="max", objective={"z": h_matrix}, constraints=constraints
    )
    sol = solve(problem, tol_feas=tol, tol_gap=tol)
    if not sol.is_optimal:
        raise RuntimeError(f"direct bias solve failed: {sol.status}")
    return sol.objective_value


def min_eigenvalue_direct(op: PauliSum, max_qubits: int = 6) -> SdpSolution:
    """Ground-state SDP at full Hilbert dimension (same solver, no ansatz)."""
    dense = op.matrix(max_qubits)
    n = dense.shape[0]
    problem = SdpProblem(
        blocks=[("rho", n)],
        sense="min",
        objective={"rho": dense},
        constraints=[SdpConstraint({"rho": np.eye(n, dtype=complex)}, 1.0)],
    )
    return solve(problem)
