import math

import numpy as np
import pytest

from fasloc.errors import DegenerateGeometry, InvalidConfig
from fasloc.geometry import Anchor, bearing, symmetric_ring
from fasloc.linalg2 import Vec2


def test_bearing_axis_case():
    b = bearing(Vec2(50, 0), Anchor(Vec2(0, 0), id=1))
    assert (b.u.x, b.u.y) == (1.0, 0.0)
    assert (b.u_perp.x, b.u_perp.y) == (0.0, 1.0)
    assert b.range_m == 50.0
    assert b.theta == 0.0


def test_bearing_reversed_axis():
    b = bearing(Vec2(0, 0), Anchor(Vec2(50, 0), id=1))
    assert (b.u.x, b.u.y) == (-1.0, 0.0)
    assert (b.u_perp.x, b.u_perp.y) == (0.0, -1.0)
    assert b.range_m == 50.0
    assert b.theta == pytest.approx(math.pi)


def test_bearing_345_triangle():
    b = bearing(Vec2(3, 4), Anchor(Vec2(0, 0), id=1))
    assert b.range_m == 5.0
    assert b.u.x == pytest.approx(0.6, abs=1e-15)
    assert b.u.y == pytest.approx(0.8, abs=1e-15)


def test_bearing_collocated_raises():
    with pytest.raises(DegenerateGeometry):
        bearing(Vec2(1.0, 2.0), Anchor(Vec2(1.0, 2.0), id=1))
    with pytest.raises(DegenerateGeometry):
        bearing(Vec2(1.0, 2.0 + 1e-9), Anchor(Vec2(1.0, 2.0), id=1))


def test_theta_range_is_half_open():
    # A negative-zero y component must not produce theta == -pi.
    b = bearing(Vec2(-1.0, -0.0), Anchor(Vec2(0.0, 0.0), id=1))
    assert b.theta == math.pi


def test_symmetric_ring_four():
    anchors = symmetric_ring(4, 50.0)
    assert [a.id for a in anchors] == [1, 2, 3, 4]
    expected = [(50, 0), (0, 50), (-50, 0), (0, -50)]
    for a, (x, y) in zip(anchors, expected):
        assert a.position.x == pytest.approx(x, abs=50 * 1e-15)
        assert a.position.y == pytest.approx(y, abs=50 * 1e-15)


def test_symmetric_ring_small_cases():
    (one,) = symmetric_ring(1, 50.0)
    assert (one.position.x, one.position.y) == (50.0, 0.0)
    two = symmetric_ring(2, 1.0)
    assert two[0].position.x == pytest.approx(1.0)
    assert two[1].position.x == pytest.approx(-1.0, abs=1e-15)
    assert two[1].position.y == pytest.approx(0.0, abs=1e-15)


def test_symmetric_ring_rejects_bad_args():
    with pytest.raises(InvalidConfig):
        symmetric_ring(0, 50.0)
    with pytest.raises(InvalidConfig):
        symmetric_ring(4, 0.0)
    with pytest.raises(InvalidConfig):
        symmetric_ring(4, -1.0)


def test_bearing_unit_and_orthogonality():
    rng = np.random.default_rng(29)
    for _ in range(300):
        user = Vec2(*rng.uniform(-100, 100, 2))
        pos = Vec2(*rng.uniform(-100, 100, 2))
        if (user - pos).norm() < 1e-3:
            continue
        b = bearing(user, Anchor(pos, id=1))
        assert b.u.norm() == pytest.approx(1.0, abs=1e-12)
        assert b.u_perp.norm() == pytest.approx(1.0, abs=1e-12)
        assert b.u.dot(b.u_perp) == pytest.approx(0.0, abs=1e-12)
        assert b.range_m == pytest.approx((user - pos).norm(), rel=1e-12)
        # u_perp is u rotated counter-clockwise
        assert b.u_perp.x == -b.u.y and b.u_perp.y == b.u.x


def test_rotation_invariance():
    # Rotating user and anchors together keeps ranges and shifts thetas.
    rng = np.random.default_rng(31)

    def rot(v: Vec2, phi: float) -> Vec2:
        c, s = math.cos(phi), math.sin(phi)
        return Vec2(c * v.x - s * v.y, s * v.x + c * v.y)

    for _ in range(100):
        user = Vec2(*rng.uniform(-10, 10, 2))
        pos = Vec2(*rng.uniform(20, 80, 2))
        phi = float(rng.uniform(0, 2 * math.pi))
        b0 = bearing(user, Anchor(pos, id=1))
        b1 = bearing(rot(user, phi), Anchor(rot(pos, phi), id=1))
        assert b1.range_m == pytest.approx(b0.range_m, rel=1e-9)
        dtheta = (b1.theta - b0.theta - phi) % (2 * math.pi)
        assert min(dtheta, 2 * math.pi - dtheta) == pytest.approx(0.0, abs=1e-9)
