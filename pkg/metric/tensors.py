"""
Resynchronized metric, directional light speeds and wave four-vectors.

Coordinates (t, x) carry upper indices and shift as t' = t + a.x; wave
vectors (omega, k) carry lower indices and shift as k' = k + a*omega with
omega unchanged. The two are kept as separate types and never converted
into each other.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from kinematics.events import EINSTEIN, DegenerateConventionError

logger = logging.getLogger(__name__)

EINSTEIN_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

UNIT_VECTOR_TOLERANCE = 1e-12


class ConventionMismatchError(ValueError):
    pass


class NotUnitVectorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MetricTensor:
    g: np.ndarray
    a: tuple

    @property
    def determinant(self):
        """Expanded on the time-time entry; the spatial Schur complement is -I up to rounding."""
        g = self.g
        if g[0, 0] == 0.0:
            return float(np.linalg.det(g))
        schur = g[1:, 1:] - np.outer(g[1:, 0], g[0, 1:]) / g[0, 0]
        return float(g[0, 0] * np.linalg.det(schur))

    def is_symmetric(self, tol=1e-14):
        return bool(np.max(np.abs(self.g - self.g.T)) <= tol)

    def contract(self, u, v):
        """g_{mu nu} u^mu v^nu"""
        return float(np.asarray(u, dtype=float) @ self.g @ np.asarray(v, dtype=float))


def _alpha(a):
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.size == 1:
        a = np.array([a[0], 0.0, 0.0])
    if a.size != 3 or not np.all(np.isfinite(a)):
        raise ValueError(f"resynchronization vector must be 3 finite components, got {a}")
    return a


def metric_from_alpha(a):
    """
    g'_00 = 1,  g'_0i = -a_i,  g'_ij = a_i a_j - delta_ij

    so that g' dx' dx' = (dt' - a.dx')^2 - |dx'|^2. det g' = -1 for every a.
    """
    a = _alpha(a)
    g = np.empty((4, 4))
    g[0, 0] = 1.0
    g[0, 1:] = -a
    g[1:, 0] = -a
    g[1:, 1:] = np.outer(a, a) - np.eye(3)
    return MetricTensor(g=g, a=tuple(float(c) for c in a))


def resync_jacobian(a):
    """d(t', x')/d(t, x) for t' = t + a.x, x' = x."""
    a = _alpha(a)
    jac = np.eye(4)
    jac[0, 1:] = a
    return jac


def four_vector_pullback(a):
    """The Einstein metric pulled back through the inverse resynchronization."""
    inverse = np.linalg.inv(resync_jacobian(a))
    return inverse.T @ EINSTEIN_METRIC @ inverse


def line_element(dx, a):
    """Contraction g'_{mu nu} dx^mu dx^nu of a displacement given in convention a."""
    dx = np.asarray(dx, dtype=float)
    if dx.shape != (4,):
        raise ValueError(f"displacement must have 4 components, got shape {dx.shape}")
    return metric_from_alpha(a).contract(dx, dx)


def _unit(n):
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"direction must have 3 components, got shape {n.shape}")
    if abs(np.linalg.norm(n) - 1.0) > UNIT_VECTOR_TOLERANCE:
        raise NotUnitVectorError(f"direction {n} is not a unit vector (|n| = {np.linalg.norm(n)!r})")
    return n


def slowness(n, a):
    """Reciprocal one-way light speed along unit direction n: 1 + a.n."""
    n = _unit(n)
    a = _alpha(a)
    return 1.0 + float(a @ n)


def directional_light_speed(n, a):
    """One-way light speed 1 / (1 + a.n) along unit direction n."""
    s = slowness(n, a)
    if s == 0.0:
        logger.warning(f"light speed along {n} is undefined for a={tuple(_alpha(a))}")
        raise DegenerateConventionError(f"1 + a.n = 0 for n={tuple(n)}: light crosses instantaneously")
    return 1.0 / s


@dataclass(frozen=True)
class WaveFourVector:
    omega: float
    k: tuple
    convention: str = EINSTEIN

    def __post_init__(self):
        k = tuple(float(c) for c in self.k)
        if len(k) == 1:
            k = (k[0], 0.0, 0.0)
        if len(k) != 3:
            raise ValueError(f"wave vector needs 3 spatial components, got {len(k)}")
        if not all(math.isfinite(c) for c in (self.omega, *k)):
            raise ValueError(f"wave four-vector must be finite: omega={self.omega}, k={k}")
        object.__setattr__(self, 'omega', float(self.omega))
        object.__setattr__(self, 'k', k)

    @property
    def k_vector(self):
        return np.array(self.k, dtype=float)

    def phase_speed(self, n=None):
        """omega / |k|, or omega / (k.n) measured along the unit direction n."""
        if n is None:
            return self.omega / float(np.linalg.norm(self.k_vector))
        along = float(self.k_vector @ _unit(n))
        if along == 0.0:
            raise DegenerateConventionError(f"wave has no component along {tuple(n)}")
        return self.omega / along


def transform_wavevector(w, from_sync, to_sync):
    """
    k' = k + a*omega, omega' = omega; between two conventions via the
    Einstein base. Frequency is read on one clock and never changes.
    """
    if w.convention != from_sync.label:
        raise ConventionMismatchError(f"wave tagged '{w.convention}', expected '{from_sync.label}'")
    if from_sync.a == to_sync.a:
        return WaveFourVector(w.omega, w.k, to_sync.label)
    k_base = w.k_vector - from_sync.vector * w.omega
    k_prime = k_base + to_sync.vector * w.omega
    return WaveFourVector(w.omega, tuple(k_prime), to_sync.label)


def dot_kx(w, e):
    """omega t - k.x; unchanged when both arguments are resynchronized together."""
    if w.convention != e.convention:
        raise ConventionMismatchError(
            f"wave in convention '{w.convention}' contracted with event in '{e.convention}'"
        )
    return w.omega * e.t - float(w.k_vector @ np.array(e.position))


def dispersion_check(w, sync, m):
    """
    omega'^2 - |k' - a omega'|^2 - m^2 for a wave given in convention `sync`.
    Zero iff the base-frame wave is on shell.
    """
    if w.convention != sync.label:
        raise ConventionMismatchError(f"wave tagged '{w.convention}', expected '{sync.label}'")
    k_base = w.k_vector - sync.vector * w.omega
    return w.omega ** 2 - float(k_base @ k_base) - m ** 2
