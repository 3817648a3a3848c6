"""Metric projection onto a closed ball and its derivative operator.

The projection is the identity inside the ball and the radial pull-back
onto the sphere outside.  Its derivative splits into three regimes:

* interior points: the identity map,
* exterior points: a scaled rank-one-deficient map that kills the radial
  component and shrinks the rest by radius / distance-to-center,
* sphere points: no Fréchet derivative exists; only direction-dependent
  one-sided (Gâteaux) derivatives, served by :func:`ball_gateaux_sphere`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .vectors import Vector, as_vector, _same_dim


@dataclass(frozen=True)
class Ball:
    """Closed ball with the given center and positive radius."""

    center: Vector
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        r = float(self.radius)
        if not np.isfinite(r) or r <= 0.0:
            raise ValueError("radius must be finite and positive")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.size


class BallRegionTag(Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    SPHERE = "sphere"


@dataclass(frozen=True)
class BallRegion:
    tag: BallRegionTag
    signed_gap: float  # ‖x - center‖ - radius


def sphere_tolerance(radius: float) -> float:
    """Width of the band around the sphere that classifies as on-sphere."""
    return 1e-12 * (1.0 + radius)


def classify_ball(ball: Ball, x) -> BallRegion:
    """Classify x as interior / exterior / on the sphere, with ties to sphere."""
    x = as_vector(x)
    _same_dim(ball.center, x)
    gap = float(np.linalg.norm(x - ball.center)) - ball.radius
    if abs(gap) <= sphere_tolerance(ball.radius):
        tag = BallRegionTag.SPHERE
    elif gap < 0.0:
        tag = BallRegionTag.INTERIOR
    else:
        tag = BallRegionTag.EXTERIOR
    return BallRegion(tag=tag, signed_gap=gap)


def project_ball(ball: Ball, x) -> Vector:
    """Nearest point of the closed ball: x itself inside, radial pull-back outside."""
    x = as_vector(x)
    _same_dim(ball.center, x)
    d = x - ball.center
    dist = float(np.linalg.norm(d))
    if dist <= ball.radius:
        return x
    return ball.center + (ball.radius / dist) * d


class BallDerivKind(Enum):
    IDENTITY = "identity"
    EXTERIOR = "exterior"
    NOT_FRECHET = "not_frechet"


@dataclass(frozen=True)
class BallDeriv:
    """Derivative of the ball projection at a base point.

    ``IDENTITY`` and ``EXTERIOR`` are genuine (strict) Fréchet derivatives
    and support :meth:`apply`/:meth:`as_matrix`.  ``NOT_FRECHET`` records a
    sphere point where no linear derivative exists; querying its action is
    an error.
    """

    kind: BallDerivKind
    dim: int
    anchor: Vector | None = None  # x - center, exterior points only
    radius: float | None = None
    sphere_point: Vector | None = None

    @property
    def is_linear(self) -> bool:
        return self.kind is not BallDerivKind.NOT_FRECHET

    def apply(self, w) -> Vector:
        w = as_vector(w)
        if w.size != self.dim:
            raise ValueError(f"dimension mismatch: {w.size} vs {self.dim}")
        if self.kind is BallDerivKind.IDENTITY:
            return w
        if self.kind is BallDerivKind.EXTERIOR:
            a = self.anchor
            na2 = float(np.dot(a, a))
            radial = (float(np.dot(w, a)) / na2) * a
            return (self.radius / np.sqrt(na2)) * (w - radial)
        raise ValueError("no linear derivative exists at a sphere point")

    def as_matrix(self) -> np.ndarray:
        """Dense matrix of the linear action (testing aid)."""
        if self.kind is BallDerivKind.IDENTITY:
            return np.eye(self.dim)
        if self.kind is BallDerivKind.EXTERIOR:
            a = self.anchor
            na2 = float(np.dot(a, a))
            proj = np.outer(a, a) / na2
            return (self.radius / np.sqrt(na2)) * (np.eye(self.dim) - proj)
        raise ValueError("no linear derivative exists at a sphere point")


def ball_frechet_derivative(ball: Ball, x) -> BallDeriv:
    """Derivative operator of the ball projection at x, by region.

    Sphere points return a ``NOT_FRECHET`` marker value rather than raising:
    non-differentiability there is a result, not a failure.
    """
    x = as_vector(x)
    region = classify_ball(ball, x)
    if region.tag is BallRegionTag.INTERIOR:
        return BallDeriv(kind=BallDerivKind.IDENTITY, dim=x.size)
    if region.tag is BallRegionTag.EXTERIOR:
        anchor = x - ball.center
        anchor.flags.writeable = False
        return BallDeriv(
            kind=BallDerivKind.EXTERIOR,
            dim=x.size,
            anchor=anchor,
            radius=ball.radius,
        )
    return BallDeriv(kind=BallDerivKind.NOT_FRECHET, dim=x.size, sphere_point=x)


def ball_gateaux_sphere(ball: Ball, x, w) -> Vector:
    """One-sided directional derivative of the projection at a sphere point.

    Directions pointing outward or tangent (⟨x - c, w⟩ ≥ 0) feel the sphere's
    curvature and lose their radial growth; inward directions re-enter the
    ball, where the projection is the identity.
    """
    x, w = as_vector(x), as_vector(w)
    region = classify_ball(ball, x)
    if region.tag is not BallRegionTag.SPHERE:
        raise ValueError("base point must lie on the sphere")
    _same_dim(x, w)
    a = x - ball.center
    s = float(np.dot(a, w))
    if s >= 0.0:
        return w - (s / ball.radius**2) * a
    return w
