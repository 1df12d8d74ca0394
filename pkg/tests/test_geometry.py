from fractions import Fraction as F

import pytest

from contask.complex import simplex_complex
from contask.errors import InvalidPoint, MixedAmbients, NoCommonCell, UnknownVertex
from contask.geometry import (
    AffineFrame,
    Point,
    carrier_of_point,
    carrier_of_set,
    extended_coloring,
    in_closed_star,
    in_open_star,
    lerp,
    solve_exact,
    tv_distance,
)

from helpers import path_complex

E = simplex_complex(1)
T = simplex_complex(2)


def test_point_validation():
    with pytest.raises(InvalidPoint):
        Point.of({0: F(1, 2)}, E)
    with pytest.raises(InvalidPoint):
        Point.of({0: F(3, 2), 1: F(-1, 2)}, E)
    with pytest.raises(InvalidPoint):
        Point.of({0: 0.5, 1: 0.5}, E)
    P = path_complex([0, 1, 0])
    with pytest.raises(InvalidPoint):
        Point.of({0: F(1, 2), 2: F(1, 2)}, P)


def test_carriers():
    a = Point.vertex(0, E)
    m = Point.of({0: F(1, 2), 1: F(1, 2)}, E)
    assert carrier_of_point(a) == (0,)
    assert carrier_of_point(m) == (0, 1)
    assert carrier_of_set([a, m]) == {(0,), (0, 1)}
    with pytest.raises(MixedAmbients):
        carrier_of_set([a, Point.vertex(0, T)])


def test_extended_coloring():
    assert extended_coloring(Point.barycenter((0, 1, 2), T)) == {0, 1, 2}
    assert extended_coloring(Point.vertex(1, T)) == {1}
    assert extended_coloring(Point.barycenter((0, 1), T)) == {0, 1}


def test_stars():
    w = Point.vertex(0, E)
    assert in_open_star(w, 0) and in_closed_star(w, 0)
    assert in_open_star(Point.barycenter((0, 1), E), 0)
    b = Point.vertex(1, E)
    assert not in_open_star(b, 0) and in_closed_star(b, 0)
    with pytest.raises(UnknownVertex):
        in_open_star(b, 7)


def test_tv_distance():
    a, b = Point.vertex(0, E), Point.vertex(1, E)
    assert tv_distance(a, a) == 0
    assert tv_distance(a, b) == 1
    x = Point.of({0: 1 - F(2, 15), 1: F(2, 15)}, E)
    y = Point.of({0: 1 - F(13, 30), 1: F(13, 30)}, E)
    assert tv_distance(x, y) == F(9, 30)
    P = path_complex([0, 1, 0])
    with pytest.raises(NoCommonCell):
        tv_distance(Point.vertex(0, P), Point.vertex(2, P))


def test_lerp_and_json():
    m = lerp(Point.vertex(0, E), Point.vertex(1, E), "1/3")
    assert m.as_dict() == {0: F(2, 3), 1: F(1, 3)}
    assert Point.from_json(m.to_json(), E) == m


def test_exact_solver_and_frame():
    assert solve_exact([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)]) == [F(4, 5), F(7, 5)]
    assert solve_exact([[F(1), F(2)], [F(2), F(4)]], [F(1), F(2)]) is None
    corners = [Point.vertex(0, E), Point.of({0: F(1, 3), 1: F(2, 3)}, E)]
    fr = AffineFrame(corners, (0, 1))
    x = Point.of({0: F(2, 3), 1: F(1, 3)}, E)
    assert fr.coords(x) == [F(1, 2), F(1, 2)]
    assert fr.contains(x) and not fr.contains(Point.vertex(1, E))
