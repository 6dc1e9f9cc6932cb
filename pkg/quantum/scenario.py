"""
Bipartite measurement scenarios.

A scenario fixes the generators H_A, H_B (and an optional coupling H_int),
the two measurement operators, the in/out states and four times. The
measurement times are coordinate labels only: which operator acts first is
chosen separately (see amplitudes.Order), which is exactly the freedom a
resynchronization grants.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    HERMITIAN_TOLERANCE,
    DimensionMismatchError,
    as_operator,
    commutator_norm,
    embed_a,
    embed_b,
    hermiticity_gap,
    random_hermitian,
    random_operator,
    random_state,
)

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12


class ScenarioError(ValueError):
    pass


class InteractionPresentError(ValueError):
    pass


def _state(vector, dim, name):
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    if vector.shape != (dim,):
        raise DimensionMismatchError(f"{name} must have {dim} components, got {vector.shape[0]}")
    norm = np.linalg.norm(vector)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ScenarioError(f"{name} is not normalized (|psi| = {norm!r})")
    return vector


@dataclass(eq=False)
class QuantumScenario:
    dim_a: int
    dim_b: int
    h_a: np.ndarray
    h_b: np.ndarray
    o_a: np.ndarray
    o_b: np.ndarray
    psi_in: np.ndarray
    psi_out: np.ndarray
    t_in: float = 0.0
    t_a: float = 0.0
    t_b: float = 0.0
    t_out: float = 0.0
    h_int: np.ndarray = None
    name: str = field(default='scenario')

    def __post_init__(self):
        if int(self.dim_a) < 1 or int(self.dim_b) < 1:
            raise ScenarioError(f"subsystem dimensions must be positive, got {self.dim_a}x{self.dim_b}")
        self.dim_a, self.dim_b = int(self.dim_a), int(self.dim_b)
        dim = self.dim

        self.h_a = as_operator(self.h_a, self.dim_a, 'H_A')
        self.h_b = as_operator(self.h_b, self.dim_b, 'H_B')
        self.o_a = as_operator(self.o_a, self.dim_a, 'O_A')
        self.o_b = as_operator(self.o_b, self.dim_b, 'O_B')
        if self.h_int is None:
            self.h_int = np.zeros((dim, dim), dtype=complex)
        self.h_int = as_operator(self.h_int, dim, 'H_int')

        for name, h in (('H_A', self.h_a), ('H_B', self.h_b), ('H_int', self.h_int)):
            gap = hermiticity_gap(h)
            if gap > HERMITIAN_TOLERANCE:
                raise ScenarioError(f"{name} is not Hermitian (gap {gap:.3e})")

        self.psi_in = _state(self.psi_in, dim, 'psi_in')
        self.psi_out = _state(self.psi_out, dim, 'psi_out')

        self.t_in, self.t_a, self.t_b, self.t_out = (
            float(self.t_in), float(self.t_a), float(self.t_b), float(self.t_out)
        )
        if not (self.t_in <= min(self.t_a, self.t_b) and max(self.t_a, self.t_b) <= self.t_out):
            raise ScenarioError(
                f"times must satisfy t_in <= t_A, t_B <= t_out, got "
                f"t_in={self.t_in}, t_A={self.t_a}, t_B={self.t_b}, t_out={self.t_out}"
            )

    @property
    def dim(self):
        return self.dim_a * self.dim_b

    @property
    def is_interacting(self):
        return bool(np.any(self.h_int != 0))

    @property
    def full_hamiltonian(self):
        """H_A (x) I + I (x) H_B + H_int"""
        return embed_a(self.h_a, self.dim_b) + embed_b(self.h_b, self.dim_a) + self.h_int

    @property
    def o_a_full(self):
        return embed_a(self.o_a, self.dim_b)

    @property
    def o_b_full(self):
        return embed_b(self.o_b, self.dim_a)

    def assumption_gaps(self):
        """
        Commutator norms behind order independence. All four vanish for
        product embeddings; H_int breaks the first three.
        """
        h_a = embed_a(self.h_a, self.dim_b)
        h_b = embed_b(self.h_b, self.dim_a)
        return {
            'H_A,H_B': commutator_norm(h_a + self.h_int, h_b),
            'H_A,O_B': commutator_norm(h_a + self.h_int, self.o_b_full),
            'H_B,O_A': commutator_norm(h_b + self.h_int, self.o_a_full),
            'O_A,O_B': commutator_norm(self.o_a_full, self.o_b_full),
        }

    def require_non_interacting(self):
        if self.is_interacting:
            raise InteractionPresentError(
                f"scenario '{self.name}' has H_int != 0; the factored forms do not apply"
            )


def random_scenario(rng, dim_a, dim_b, interacting=False, coupling=1.0, name=None):
    """
    Gaussian Hermitian generators, Gaussian measurement operators, random unit
    states and measurement times drawn from [0, 1] with t_in = 0, t_out = 1.
    """
    dim = dim_a * dim_b
    t_a, t_b = rng.uniform(0.0, 1.0, size=2)
    scenario = QuantumScenario(
        dim_a=dim_a,
        dim_b=dim_b,
        h_a=random_hermitian(rng, dim_a),
        h_b=random_hermitian(rng, dim_b),
        o_a=random_operator(rng, dim_a),
        o_b=random_operator(rng, dim_b),
        psi_in=random_state(rng, dim),
        psi_out=random_state(rng, dim),
        t_in=0.0,
        t_a=t_a,
        t_b=t_b,
        t_out=1.0,
        h_int=random_hermitian(rng, dim, scale=coupling) if interacting else None,
        name=name or f'random {dim_a}x{dim_b}',
    )
    logger.debug(f"generated {scenario.name} (interacting={interacting})")
    return scenario
