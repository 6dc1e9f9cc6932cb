"""
Projective measurements, B-side marginals and CHSH correlators.

A's measurement is non-selective: its outcome is never recorded, so the
state after it is the sum over A's projected branches. Whatever B can see
comes from B's marginal alone.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .operators import (
    PAULI,
    DimensionMismatchError,
    embed_a,
    embed_b,
    evolve,
    spin_operator,
)

logger = logging.getLogger(__name__)

PROJECTOR_TOLERANCE = 1e-12


class InvalidMeasurementError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MeasurementSetting:
    """A complete set of orthogonal projectors on one subsystem."""
    projectors: tuple
    outcomes: tuple = None

    def __post_init__(self):
        projectors = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        if not projectors:
            raise InvalidMeasurementError("a measurement needs at least one projector")
        dim = projectors[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for i, p in enumerate(projectors):
            if p.shape != (dim, dim):
                raise InvalidMeasurementError(f"projector {i} has shape {p.shape}, expected {(dim, dim)}")
            if np.max(np.abs(p - p.conj().T)) > PROJECTOR_TOLERANCE:
                raise InvalidMeasurementError(f"projector {i} is not Hermitian")
            if np.max(np.abs(p @ p - p)) > PROJECTOR_TOLERANCE:
                raise InvalidMeasurementError(f"projector {i} is not idempotent")
            total += p
        if np.max(np.abs(total - np.eye(dim))) > PROJECTOR_TOLERANCE:
            raise InvalidMeasurementError("projectors do not sum to the identity")
        outcomes = self.outcomes if self.outcomes is not None else tuple(range(len(projectors)))
        if len(outcomes) != len(projectors):
            raise InvalidMeasurementError("one outcome label per projector")
        object.__setattr__(self, 'projectors', projectors)
        object.__setattr__(self, 'outcomes', tuple(outcomes))

    @property
    def dim(self):
        return self.projectors[0].shape[0]

    def __len__(self):
        return len(self.projectors)

    @classmethod
    def from_basis(cls, basis, outcomes=None):
        """Projectors onto the columns of a unitary matrix."""
        basis = np.asarray(basis, dtype=complex)
        return cls(tuple(np.outer(basis[:, i], basis[:, i].conj()) for i in range(basis.shape[1])), outcomes)

    @classmethod
    def computational(cls, dim):
        return cls.from_basis(np.eye(dim, dtype=complex))

    @classmethod
    def spin(cls, theta):
        """Qubit spin along in-plane angle theta, outcomes (+1, -1)."""
        s = spin_operator(theta)
        identity = np.eye(2, dtype=complex)
        return cls(((identity + s) / 2, (identity - s) / 2), outcomes=(1, -1))

    @classmethod
    def pauli(cls, axis):
        identity = np.eye(2, dtype=complex)
        s = PAULI[axis]
        return cls(((identity + s) / 2, (identity - s) / 2), outcomes=(1, -1))


def random_measurement(rng, dim):
    """Projective measurement in a Haar-random orthonormal basis."""
    if dim == 1:
        return MeasurementSetting.computational(1)
    return MeasurementSetting.from_basis(unitary_group.rvs(dim, random_state=rng))


def marginal_distribution(scenario, remote, local):
    """
    p(b) for B's measurement at t_B, with or without A's non-selective
    measurement at t_A. Evolution uses the full Hamiltonian, so a coupling
    H_int can make p(b) depend on `remote`.
    """
    s = scenario
    if remote is not None and remote.dim != s.dim_a:
        raise InvalidMeasurementError(f"remote setting acts on dimension {remote.dim}, A has {s.dim_a}")
    if local.dim != s.dim_b:
        raise InvalidMeasurementError(f"local setting acts on dimension {local.dim}, B has {s.dim_b}")
    if s.is_interacting:
        logger.info(f"scenario '{s.name}' is interacting: B's marginal may depend on A's setting")

    h = s.full_hamiltonian
    state = evolve(s.psi_in, h, s.t_a - s.t_in)
    if remote is None:
        branches = [state]
    else:
        branches = [embed_a(p, s.dim_b) @ state for p in remote.projectors]

    local_full = [embed_b(p, s.dim_a) for p in local.projectors]
    probabilities = np.zeros(len(local))
    for branch in branches:
        evolved = evolve(branch, h, s.t_b - s.t_a)
        for j, p in enumerate(local_full):
            probabilities[j] += np.linalg.norm(p @ evolved) ** 2
    return probabilities


def total_variation(p, q):
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def signaling_gap(scenario, remote, local):
    """max_b |p(b | remote) - p(b | no remote measurement)|"""
    with_remote = marginal_distribution(scenario, remote, local)
    without = marginal_distribution(scenario, None, local)
    return float(np.max(np.abs(with_remote - without)))


def correlator(state, theta_a, theta_b):
    """
    E(a, b) = sum over the four outcome pairs of (+-1)(+-1) p(i, j), for spin
    measurements along in-plane angles. For the singlet E = -cos(a - b).
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (4,):
        raise DimensionMismatchError(f"CHSH needs a two-qubit state, got {state.shape[0]} components")
    setting_a = MeasurementSetting.spin(theta_a)
    setting_b = MeasurementSetting.spin(theta_b)
    value = 0.0
    for pa, sign_a in zip(setting_a.projectors, setting_a.outcomes):
        for pb, sign_b in zip(setting_b.projectors, setting_b.outcomes):
            amplitude = np.kron(pa, pb) @ state
            value += sign_a * sign_b * float(np.vdot(amplitude, amplitude).real)
    return value


def chsh_value(state, angles_a, angles_b):
    """S = E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)"""
    a1, a2 = angles_a
    b1, b2 = angles_b
    return (
        correlator(state, a1, b1)
        + correlator(state, a1, b2)
        + correlator(state, a2, b1)
        - correlator(state, a2, b2)
    )
