"""Per-anchor direction, range and bearing derived from 2-D positions."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometry, InvalidConfig
from .linalg2 import Vec2

# Below this user-anchor distance the bearing is numerically meaningless.
MIN_RANGE_M = 1e-6


@dataclass(frozen=True)
class Anchor:
    """A base station at a known position; ids are 1-based and unique."""

    position: Vec2
    id: int


@dataclass(frozen=True)
class Bearing:
    """Unit direction from anchor to user, its +90 degree rotation, the
    separation in meters, and the bearing angle in (-pi, pi]."""

    u: Vec2
    u_perp: Vec2
    range_m: float
    theta: float


def bearing(user: Vec2, anchor: Anchor) -> Bearing:
    """Geometry of the user as seen from ``anchor``.

    u points from the anchor toward the user; u_perp is u rotated
    counter-clockwise by 90 degrees.
    """
    d = user - anchor.position
    r = d.norm()
    if r < MIN_RANGE_M:
        raise DegenerateGeometry(
            f"user is collocated with anchor {anchor.id} (range {r:.3g} m)"
        )
    u = d.scaled(1.0 / r)
    theta = math.atan2(d.y, d.x)
    if theta <= -math.pi:
        theta = math.pi
    return Bearing(u=u, u_perp=u.rot90(), range_m=r, theta=theta)


def symmetric_ring(num_anchors: int, radius_m: float) -> list[Anchor]:
    """Anchors evenly spaced on a circle around the origin.

    Anchor b sits at angle 2*pi*(b-1)/B, so the first anchor is on the +x
    axis. Ids run 1..B.
    """
    if num_anchors < 1:
        raise InvalidConfig(f"need at least one anchor, got {num_anchors}")
    if not (radius_m > 0.0) or not math.isfinite(radius_m):
        raise InvalidConfig(f"ring radius must be positive, got {radius_m!r}")
    anchors = []
    for b in range(1, num_anchors + 1):
        ang = 2.0 * math.pi * (b - 1) / num_anchors
        pos = Vec2(radius_m * math.cos(ang), radius_m * math.sin(ang))
        anchors.append(Anchor(position=pos, id=b))
    return anchors
