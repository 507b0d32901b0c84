"""Support-polygon margin tests, with shapely as the independent oracle."""

import math
import random

import pytest
from shapely.geometry import MultiPoint, Point

from quadsim.gait import DegenerateSupport, com_margin

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def shapely_margin(points, com):
    """Independent signed distance via shapely."""
    hull = MultiPoint(points).convex_hull
    p = Point(com)
    if hull.geom_type != "Polygon":  # collinear support
        return -p.distance(hull)
    d = p.distance(hull.exterior)
    return d if hull.contains(p) or hull.exterior.contains(p) else -d


def test_unit_square_center():
    assert com_margin(SQUARE, (0.5, 0.5)) == pytest.approx(0.5)


def test_com_on_edge_is_zero():
    assert com_margin(SQUARE, (0.5, 0.0)) == pytest.approx(0.0, abs=1e-15)


def test_right_triangle_example():
    margin = com_margin([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], (0.25, 0.25))
    assert margin == pytest.approx(0.25)


def test_outside_is_negative():
    assert com_margin(SQUARE, (2.0, 0.5)) == pytest.approx(-1.0)
    assert com_margin(SQUARE, (2.0, 2.0)) == pytest.approx(-math.sqrt(2))


def test_degenerate_support_raises():
    with pytest.raises(DegenerateSupport):
        com_margin([(0.0, 0.0), (1.0, 0.0)], (0.5, 0.0))


def test_collinear_feet_cannot_contain():
    margin = com_margin([(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)], (0.5, 0.2))
    assert margin == pytest.approx(-0.2)


def test_interior_point_order_independent():
    rng = random.Random(3)
    pts = list(SQUARE)
    for _ in range(20):
        rng.shuffle(pts)
        assert com_margin(pts, (0.25, 0.5)) == pytest.approx(0.25)


def test_matches_shapely_on_random_supports():
    rng = random.Random(13)
    for _ in range(500):
        n = rng.randint(3, 8)
        pts = [(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]
        com = (rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        assert com_margin(pts, com) == pytest.approx(shapely_margin(pts, com), abs=1e-12)
