"""
The Feynman propagator integrand under resynchronization.

    Einstein:  e^{-i(w t - k.x)} / (w^2 - |k|^2 - m^2 + i eps)
    second:    e^{-i(w' t' - k'.x')} / (w'^2 - |k' - a w'|^2 - m^2 + i eps)
    third:     e^{-i(w''(t' - a.x') - k''.x')} / (w''^2 - |k''|^2 - m^2 + i eps),  k'' = k' - a w'

The change of variables from the second to the third form is exact, and the
third form is the Einstein integrand at the base point t = t' - a.x'. The
integrands are compared point by point, so no quadrature error enters. The
(2 pi)^-4 normalization is left out.
"""

import logging
from dataclasses import dataclass

import numpy as np

from kinematics.events import Event4
from kinematics.transforms import base_time

logger = logging.getLogger(__name__)


def _check_parameters(m, eps):
    if eps <= 0:
        raise ValueError(f"the i*eps regulator must be positive, got {eps!r}")
    if m < 0:
        raise ValueError(f"mass must be non-negative, got {m!r}")


@dataclass(frozen=True)
class PropagatorPoint:
    x: Event4
    m: float
    eps: float

    def __post_init__(self):
        _check_parameters(self.m, self.eps)


def _kvec(kvec):
    omega, k = kvec
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.size == 1:
        k = np.array([k[0], 0.0, 0.0])
    return float(omega), k


def _third_form(omega, k_dot_x, k_squared, t, m, eps):
    """The third-form integrand from its scalar products; works on arrays too."""
    return np.exp(-1j * (omega * t - k_dot_x)) / (omega ** 2 - k_squared - m ** 2 + 1j * eps)


def _integrand(omega, k, t, position, m, eps):
    return _third_form(omega, float(k @ position), float(k @ k), t, m, eps)


def integrand_einstein(kvec, point):
    omega, k = _kvec(kvec)
    return complex(_integrand(omega, k, point.x.t, np.array(point.x.position), point.m, point.eps))


def resynced_phase(kvec, x_prime, sync):
    """w''(t' - a.x') - k''.x', i.e. the Einstein phase at the base-frame time."""
    omega, k = _kvec(kvec)
    t_base = base_time(x_prime.t, x_prime.position, sync.a)
    return omega * t_base - float(k @ np.array(x_prime.position))


def integrand_resynced(kvec, x_prime, sync, m, eps):
    """
    Third form, at wave vector (w'', k'') and a point x' given in `sync`.
    Shares its arithmetic with integrand_einstein, so it equals the Einstein
    integrand at the base point bit for bit.
    """
    _check_parameters(m, eps)
    omega, k = _kvec(kvec)
    t_base = base_time(x_prime.t, x_prime.position, sync.a)
    return complex(_integrand(omega, k, t_base, np.array(x_prime.position), m, eps))


def _second_form(omega, k_prime, x_prime, sync, m, eps):
    position = np.array(x_prime.position)
    phase = omega * x_prime.t - float(k_prime @ position)
    shifted = k_prime - sync.vector * omega
    return np.exp(-1j * phase) / (omega ** 2 - float(shifted @ shifted) - m ** 2 + 1j * eps)


def middle_form_check(kvec_prime, x_prime, sync, m, eps):
    """(second form at k', third form at k'' = k' - a w'); equal up to rounding."""
    omega, k_prime = _kvec(kvec_prime)
    second = _second_form(omega, k_prime, x_prime, sync, m, eps)
    k_double_prime = k_prime - sync.vector * omega
    third = integrand_resynced((omega, k_double_prime), x_prime, sync, m, eps)
    return complex(second), third


def substitution_gap(kvec_prime, x_prime, sync, m, eps):
    """
    Gap between the second and third forms, factor by factor: the phase
    difference relative to the magnitude of its terms, and the denominator
    difference relative to the denominator.

    relative_gap on the two values from middle_form_check is not used here.
    The phases are sums of terms of size up to ~30 that may cancel, so their
    rounding reaches the integrand at a few times 1e-15 relative to a
    cancelled phase; over 1000 samples in the [-3, 3] ranges that plain gap
    tops 1e-14 (around 1.1e-14). Scaling by the summed term magnitudes
    measures the substitution itself.
    """
    omega, k_prime = _kvec(kvec_prime)
    position = np.array(x_prime.position)
    k_double_prime = k_prime - sync.vector * omega

    phase_second = omega * x_prime.t - float(k_prime @ position)
    phase_third = resynced_phase((omega, k_double_prime), x_prime, sync)
    # every term of both phases, so cancellation cannot shrink the scale below the rounding
    phase_scale = (
        abs(omega * x_prime.t)
        + float(np.sum(np.abs(k_prime * position)))
        + abs(omega) * float(np.sum(np.abs(sync.vector * position)))
        + float(np.sum(np.abs(k_double_prime * position)))
    )
    phase_scale = max(phase_scale, 1.0)

    shifted = k_prime - sync.vector * omega
    den_second = omega ** 2 - float(shifted @ shifted) - m ** 2 + 1j * eps
    den_third = omega ** 2 - float(k_double_prime @ k_double_prime) - m ** 2 + 1j * eps

    return max(
        abs(phase_second - phase_third) / phase_scale,
        abs(den_second - den_third) / abs(den_second),
    )


def relative_gap(z1, z2):
    scale = max(abs(z1), abs(z2))
    return 0.0 if scale == 0 else abs(z1 - z2) / scale


def _check_grid(cutoff, n):
    if cutoff <= 0:
        raise ValueError(f"cutoff must be positive, got {cutoff!r}")
    if n < 64:
        raise ValueError(f"grid needs at least 64 points per axis, got {n}")


def propagator_quadrature_1p1(t, x, m, eps, a, cutoff=20.0, n=512):
    """
    1+1-D propagator at the physical point (t, x) (Einstein coordinates),
    integrated in convention a with the third form on an n x n midpoint grid
    over [-K, K]^2. A demonstration only: truncation is not controlled, but
    results for different a agree to rounding because the integrands agree.

    The grid step is far wider than the iε pole width, so the poles are not
    resolved and the sum picks up aliased timelike images. Spacelike values
    therefore do not fall off with mass here (at m=10 the (0, 2) to (2, 0)
    magnitude ratio stays near 0.4); propagator_smooth_1p1 shows the decay.
    """
    _check_grid(cutoff, n)
    _check_parameters(m, eps)

    t_prime = t + a * x
    t_base = t_prime - a * x

    step = 2.0 * cutoff / n
    nodes = -cutoff + step * (np.arange(n) + 0.5)
    omega, k = np.meshgrid(nodes, nodes, indexing='ij')
    integrand = _third_form(omega, k * x, k * k, t_base, m, eps)
    value = complex(np.sum(integrand) * step * step)
    logger.debug(f"quadrature a={a!r} at (t={t!r}, x={x!r}): {value}")
    return value


# the k grid spans this many damping widths on each side
SMOOTH_SPAN = 8.0


def propagator_smooth_1p1(t, x, m, eps, a, cutoff=20.0, n=512):
    """
    1+1-D propagator at (t, x) with the w integral done exactly and a smooth
    momentum cutoff on the k integral.

    Closing the w contour around the Feynman pole at E = sqrt(k^2 + m^2 - i eps)
    gives -i pi e^{-i E |t|} / E for every k. That factor is damped by
    exp(-(k/K)^2) and summed on an n-point midpoint grid over
    [-SMOOTH_SPAN K, SMOOTH_SPAN K]. The damped integrand is smooth, so the
    sum converges fast and spacelike values fall off like e^{-m |x|}.
    As with the grid version, t is taken at the base-frame time of the
    point expressed in convention a.
    """
    _check_grid(cutoff, n)
    _check_parameters(m, eps)

    t_prime = t + a * x
    t_base = t_prime - a * x

    span = SMOOTH_SPAN * cutoff
    step = 2.0 * span / n
    k = -span + step * (np.arange(n) + 0.5)
    # principal root: Re E > 0, Im E < 0, so e^{-i E |t|} decays
    energy = np.sqrt(k * k + m ** 2 - 1j * eps)
    omega_integral = -1j * np.pi * np.exp(-1j * energy * abs(t_base)) / energy
    damping = np.exp(-(k / cutoff) ** 2)
    value = complex(np.sum(np.exp(1j * k * x) * damping * omega_integral) * step)
    logger.debug(f"smooth propagator a={a!r} at (t={t!r}, x={x!r}): {value}")
    return value


def spacelike_decay_ratio(m, eps, distance=2.0, cutoff=20.0, n=512, propagator=None):
    """|P(0, d)| / |P(d, 0)|: a spacelike point against the timelike point at equal separation."""
    propagator = propagator or propagator_smooth_1p1
    spacelike = propagator(0.0, distance, m, eps, 0.0, cutoff, n)
    timelike = propagator(distance, 0.0, m, eps, 0.0, cutoff, n)
    if timelike == 0:
        raise ValueError("timelike propagator value vanished; cannot form a ratio")
    return abs(spacelike) / abs(timelike)
