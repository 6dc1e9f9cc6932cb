"""
Finite-dimensional operators on a bipartite Hilbert space A (x) B.

hbar = 1. Time evolution is exp(-i H dt), built from the eigendecomposition
of the Hermitian generator so it stays unitary up to rounding.
"""

import logging

import numpy as np
from scipy.linalg import eigh

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-12

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {'x': SIGMA_X, 'y': SIGMA_Y, 'z': SIGMA_Z}


class DimensionMismatchError(ValueError):
    pass


class NonHermitianError(ValueError):
    pass


def as_operator(matrix, dim=None, name='operator'):
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {matrix.shape}")
    if dim is not None and matrix.shape[0] != dim:
        raise DimensionMismatchError(f"{name} must be {dim}x{dim}, got {matrix.shape}")
    return matrix


def hermiticity_gap(matrix):
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


def is_hermitian(matrix, tol=HERMITIAN_TOLERANCE):
    return hermiticity_gap(np.asarray(matrix, dtype=complex)) <= tol


def embed_a(op, dim_b):
    """op (x) I_B"""
    return np.kron(op, np.eye(dim_b, dtype=complex))


def embed_b(op, dim_a):
    """I_A (x) op"""
    return np.kron(np.eye(dim_a, dtype=complex), op)


def commutator_norm(x, y):
    """Largest-magnitude entry of XY - YX."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatchError(f"cannot commute operators of shapes {x.shape} and {y.shape}")
    return float(np.max(np.abs(x @ y - y @ x)))


def time_evolution_operator(hamiltonian, dt):
    """exp(-i H dt) via H = V diag(lambda) V^dagger."""
    hamiltonian = as_operator(hamiltonian, name='Hamiltonian')
    if not is_hermitian(hamiltonian):
        raise NonHermitianError(f"Hamiltonian is not Hermitian (gap {hermiticity_gap(hamiltonian):.3e})")
    if dt == 0:
        return np.eye(hamiltonian.shape[0], dtype=complex)
    eigenvalues, vectors = eigh(hamiltonian)
    phases = np.exp(-1j * eigenvalues * dt)
    return (vectors * phases) @ vectors.conj().T


def evolve(state, hamiltonian, dt):
    """exp(-i H dt) |state>"""
    state = np.asarray(state, dtype=complex)
    hamiltonian = as_operator(hamiltonian, name='Hamiltonian')
    if state.shape != (hamiltonian.shape[0],):
        raise DimensionMismatchError(
            f"state of shape {state.shape} does not match Hamiltonian of shape {hamiltonian.shape}"
        )
    return time_evolution_operator(hamiltonian, dt) @ state


def spin_operator(theta):
    """Spin along the in-plane direction at angle theta from z towards x."""
    return np.cos(theta) * SIGMA_Z + np.sin(theta) * SIGMA_X


def random_hermitian(rng, dim, scale=1.0):
    """Gaussian-entry Hermitian matrix (M + M^dagger) / 2."""
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (m + m.conj().T) / 2


def random_operator(rng, dim):
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


def random_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def basis_state(dim, index):
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def singlet():
    """(|01> - |10>) / sqrt(2)"""
    return np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
