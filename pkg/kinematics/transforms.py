"""
Resynchronization transforms on events and velocities.

    t' = t + a.x,   x' = x

Every convention is defined relative to the Einstein base frame, so a
transform between two conventions always routes through the base:
t_base = t - a_from.x, then t' = t_base + a_to.x.
"""

import logging
import math
from dataclasses import replace

from metric.tensors import ConventionMismatchError, line_element
from .events import (
    CausalClass,
    DegenerateConventionError,
    Event4,
    NonPositiveInputError,
    Ordering,
    SeparationKind,
)

logger = logging.getLogger(__name__)

# |s^2| below this fraction of (dt^2 + |dx|^2) counts as null
LIGHTLIKE_RELATIVE_TOLERANCE = 1e-9


def dot3(a, x):
    """a.x for 3-vectors, evaluated in one fixed order so equal inputs give equal bits."""
    return a[0] * x[0] + a[1] * x[1] + a[2] * x[2]


def base_time(t, position, a):
    """Einstein-frame time of a point whose coordinate time is t in convention a."""
    return t - dot3(a, position)


def resynchronize(e, from_sync, to_sync):
    """
    Re-express event e, given in convention `from_sync`, in convention `to_sync`.
    Spatial coordinates never change.
    """
    if from_sync.a == to_sync.a:
        return replace(e, convention=to_sync.label)
    t_base = base_time(e.t, e.position, from_sync.a)
    t_prime = t_base + dot3(to_sync.a, e.position)
    return Event4(t_prime, e.x, e.y, e.z, convention=to_sync.label)


def one_way_velocity(v, a):
    """
    Signed speed v (Einstein convention) seen in a convention with component a
    along the direction of motion: v' = v / (1 + a v).

    For v = +-1 this is the one-way light speed +-1 / (1 +- a).
    """
    denominator = 1.0 + a * v
    if denominator == 0.0:
        logger.warning(f"degenerate convention a={a!r} for velocity v={v!r}")
        raise DegenerateConventionError(
            f"1 + a*v = 0 for a={a!r}, v={v!r}: the worldline is a simultaneity surface"
        )
    return v / denominator


def alpha_for_one_way_velocity(v, v_prime):
    """The a that turns Einstein speed v into one-way speed v_prime."""
    if v == 0.0 or v_prime == 0.0:
        raise ValueError("both speeds must be non-zero to fix a resynchronization")
    return (v - v_prime) / (v * v_prime)


def alpha_for_arrival(t, x, t_prime):
    """The a (along x) that relabels the event (t, x) to coordinate time t_prime."""
    if x == 0.0:
        raise DegenerateConventionError("co-located events cannot be relabelled by a resynchronization")
    return (t_prime - t) / x


def round_trip_time(length, v_out, v_back):
    """
    Out-and-back time over `length` from two speed magnitudes.

    Only meaningful while both legs have positive coordinate duration; for
    conventions with |a| >= 1 use round_trip_time_signed.
    """
    if length <= 0 or v_out <= 0 or v_back <= 0:
        raise NonPositiveInputError(
            f"length and speeds must be positive, got L={length!r}, v_out={v_out!r}, v_back={v_back!r}"
        )
    return length / v_out + length / v_back


def round_trip_time_signed(length, v_out, v_back):
    """
    Out-and-back time from signed velocities: the outbound leg covers
    +length at v_out, the return leg covers -length at v_back. A leg may
    have negative coordinate duration; the sum is still the single-clock time.
    """
    if length <= 0:
        raise NonPositiveInputError(f"length must be positive, got {length!r}")
    if v_out == 0.0 or v_back == 0.0:
        raise DegenerateConventionError("a leg with zero coordinate speed never arrives")
    return length / v_out + (-length) / v_back


def winnie_epsilon(a):
    """epsilon = (1 + a) / 2; epsilon = 1/2 is Einstein, 0 < epsilon < 1 iff |a| < 1."""
    if not math.isfinite(a):
        raise ValueError(f"a must be finite, got {a!r}")
    return (1.0 + a) / 2.0


def epsilon_to_a(epsilon):
    if not math.isfinite(epsilon):
        raise ValueError(f"epsilon must be finite, got {epsilon!r}")
    return 2.0 * epsilon - 1.0


def _check_convention(sync, *events):
    for e in events:
        if e.convention != sync.label:
            raise ConventionMismatchError(
                f"event tagged '{e.convention}' evaluated in convention '{sync.label}'"
            )


def classify_separation(e1, e2, sync):
    """
    Timelike / lightlike / spacelike, from the interval contracted with the
    convention's own metric. The interval is the same in every convention.
    """
    _check_convention(sync, e1, e2)
    delta = e2.as_array() - e1.as_array()
    s2 = line_element(delta, sync.a)
    scale = float(delta[0] ** 2 + delta[1] ** 2 + delta[2] ** 2 + delta[3] ** 2)
    if abs(s2) < LIGHTLIKE_RELATIVE_TOLERANCE * scale or scale == 0.0:
        kind = SeparationKind.LIGHTLIKE
    elif s2 > 0:
        kind = SeparationKind.TIMELIKE
    else:
        kind = SeparationKind.SPACELIKE
    return CausalClass(kind=kind, interval_squared=s2)


def coordinate_order(e1, e2, sync):
    """
    Which event carries the smaller coordinate time in this convention.

    Says nothing about causality: for timelike pairs the answer can flip
    between conventions. Co-located pairs never flip.
    """
    _check_convention(sync, e1, e2)
    if e1.t < e2.t:
        return Ordering.FIRST_EARLIER
    if e2.t < e1.t:
        return Ordering.SECOND_EARLIER
    return Ordering.SIMULTANEOUS


def reception_time(e, observer, sync):
    """
    Coordinate time (in `sync`) at which light emitted at e reaches a clock
    sitting at spatial point `observer`.

    Readings of one clock are synchronization free: for a fixed observer the
    difference between two reception times does not depend on the convention.
    """
    _check_convention(sync, e)
    dx = [observer[i] - e.position[i] for i in range(3)]
    distance = math.sqrt(dx[0] ** 2 + dx[1] ** 2 + dx[2] ** 2)
    arrival_base = base_time(e.t, e.position, sync.a) + distance
    return arrival_base + dot3(sync.a, observer)
