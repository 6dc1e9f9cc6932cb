"""
Spacetime events and clock-synchronization conventions.

Natural units throughout (c = 1). A convention is the dimensionless
resynchronization vector a = alpha*c relative to one Einstein-synchronized
base frame; a = (0, 0, 0) is the Einstein convention itself.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from django.db import models

EINSTEIN = 'einstein'


class DegenerateConventionError(ValueError):
    """A worldline or direction becomes a simultaneity surface (1 + a.v = 0)."""


class NonPositiveInputError(ValueError):
    pass


class UnknownConventionError(ValueError):
    pass


class SeparationKind(models.TextChoices):
    TIMELIKE = 'timelike', 'Timelike'
    LIGHTLIKE = 'lightlike', 'Lightlike'
    SPACELIKE = 'spacelike', 'Spacelike'


class Ordering(models.TextChoices):
    FIRST_EARLIER = 'first', 'First event earlier'
    SECOND_EARLIER = 'second', 'Second event earlier'
    SIMULTANEOUS = 'tie', 'Equal coordinate times'


def _finite(*values):
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class SyncParam:
    """
    A synchronization convention.

    No magnitude restriction on a: |a| >= 1 is allowed, and conventions in
    which coordinate order no longer tracks causal order are legitimate.
    """
    a: tuple = (0.0, 0.0, 0.0)
    label: str = EINSTEIN

    def __post_init__(self):
        components = tuple(float(c) for c in self.a)
        if len(components) == 1:
            # 1+1-D problems only use the first component
            components = (components[0], 0.0, 0.0)
        if len(components) != 3:
            raise ValueError(f"resynchronization vector needs 1 or 3 components, got {len(components)}")
        if not _finite(*components):
            raise ValueError(f"resynchronization vector must be finite, got {components}")
        object.__setattr__(self, 'a', components)

    @classmethod
    def einstein(cls):
        return cls((0.0, 0.0, 0.0), EINSTEIN)

    @classmethod
    def along_x(cls, a, label=None):
        return cls((a, 0.0, 0.0), label or f'a={a!r}')

    @property
    def is_einstein(self):
        return self.a == (0.0, 0.0, 0.0)

    @property
    def vector(self):
        return np.array(self.a, dtype=float)


@dataclass(frozen=True)
class Event4:
    """A spacetime point (t, x, y, z) expressed in the named convention."""
    t: float
    x: float
    y: float = 0.0
    z: float = 0.0
    convention: str = EINSTEIN

    def __post_init__(self):
        for name in ('t', 'x', 'y', 'z'):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not _finite(self.t, self.x, self.y, self.z):
            raise ValueError(f"event coordinates must be finite: {self}")

    @property
    def position(self):
        return (self.x, self.y, self.z)

    def as_array(self):
        return np.array([self.t, self.x, self.y, self.z], dtype=float)

    def to_dict(self):
        return {'t': self.t, 'x': self.x, 'y': self.y, 'z': self.z, 'convention': self.convention}


@dataclass(frozen=True)
class CausalClass:
    kind: str
    interval_squared: float


@dataclass
class ConventionRegistry:
    """
    Labelled conventions; every event's convention tag must resolve here.
    The Einstein convention is always registered.
    """
    conventions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.conventions.setdefault(EINSTEIN, SyncParam.einstein())

    def add(self, sync):
        existing = self.conventions.get(sync.label)
        if existing is not None and existing.a != sync.a:
            raise ValueError(f"convention '{sync.label}' already registered with a={existing.a}")
        self.conventions[sync.label] = sync
        return sync

    def resolve(self, label):
        try:
            return self.conventions[label]
        except KeyError:
            raise UnknownConventionError(f"unknown convention '{label}'") from None

    def __contains__(self, label):
        return label in self.conventions

    def __iter__(self):
        return iter(self.conventions.values())
