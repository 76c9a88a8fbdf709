import warnings
from fractions import Fraction

import pytest

from germlip.errors import FiniteDeterminacyError, ParseError, ValidationError
from germlip.germ import (
    double_point_system,
    double_rays,
    image_double_curve,
    make_germ,
    parse_germ,
)
from germlip.parser import parse_polynomial

from conftest import germ

F = Fraction


def test_make_germ_validation():
    y2 = parse_polynomial("y^2", ("x", "y"))
    with pytest.raises(ValidationError, match="homogeneous"):
        make_germ(parse_polynomial("y^2 + x", ("x", "y")), y2)
    with pytest.raises(ValidationError, match="identically zero"):
        make_germ(parse_polynomial("0", ("x", "y")), y2)
    with pytest.raises(ValidationError, match="at least 2"):
        make_germ(parse_polynomial("y", ("x", "y")), y2)


def test_make_germ_warns_on_common_degree_factor():
    y2 = parse_polynomial("y^2", ("x", "y"))
    y4 = parse_polynomial("y^4", ("x", "y"))
    with pytest.warns(UserWarning, match="coprime"):
        make_germ(y2, y4)


def test_parse_germ_file():
    f = parse_germ('name = "E1"\np = y^2\nq = y^3 - x^2*y\n')
    assert f.name == "E1"
    assert (f.d2, f.d3) == (2, 3)
    with pytest.raises(ParseError, match="quoted"):
        parse_germ("name = E1\np = y^2\nq = y^3\n")


def test_double_point_system_of_reference_germ():
    f = germ("y^2", "y^3 - x^2*y")
    p_tilde, q_tilde, vertical = double_point_system(f)
    # divided difference of y^2 is y + y', restricted: s + s'
    assert p_tilde == parse_polynomial("s + s'", ("s", "s'"))
    # divided difference of y^3 - x^2 y is y^2 + y y' + y'^2 - x^2
    assert q_tilde == parse_polynomial("s^2 + s*s' + s'^2 - 1", ("s", "s'"))
    # q has odd degree with q(0, 1) != 0, so the vertical line is not doubled
    assert not vertical


def test_reference_germ_rays_and_pairing():
    rs = double_rays(germ("y^2", "y^3 - x^2*y"))
    assert len(rs.rays) == 4
    slopes = sorted(r.slope.to_float() for r in rs.rays if not r.is_vertical)
    assert slopes == pytest.approx([-1.0, -1.0, 1.0, 1.0])
    assert not any(r.is_vertical for r in rs.rays)
    # each slope ray pairs with the opposite-slope ray on the same side
    for i, j in rs.pairing_classes():
        a, b = rs.rays[i], rs.rays[j]
        assert a.sign == b.sign
        assert a.slope.to_float() == pytest.approx(-b.slope.to_float())


def test_no_ray_germ():
    rs = double_rays(germ("y^2", "y^3 + x^2*y"))
    assert rs.is_empty


def test_vertical_rays_pair_together():
    rs = double_rays(germ("y^2", "x^2*y"))
    vert = [i for i, r in enumerate(rs.rays) if r.is_vertical]
    assert len(vert) == 2
    assert rs.pairing[vert[0]] == vert[1]


def test_cross_cap_rejected():
    f = germ("x^2", "y^3")
    with pytest.raises(FiniteDeterminacyError):
        double_rays(f)


def test_image_double_curve_branches():
    f = germ("y^2", "y^3 - x^2*y")
    curve = image_double_curve(f)
    # two pairing classes give two branches; images of y = +-x on x > 0 and
    # x < 0 are (t, t^2, 0) and (-t, t^2, 0)
    assert len(curve.branches) == 2
    pts = sorted(
        tuple(round(c.evaluate_float(0.5), 9) for c in b.coords)
        for b in curve.branches
    )
    assert pts == [(-0.5, 0.25, 0.0), (0.5, 0.25, 0.0)]


def test_rays_sorted_counterclockwise():
    rs = double_rays(germ("y^2", "y^5 - x^4*y"))
    import math

    angles = []
    for r in rs.rays:
        dx, dy = r.direction_float()
        angles.append(math.atan2(dy, dx) % (2 * math.pi))
    shifted = angles.index(min(angles))
    rotated = angles[shifted:] + angles[:shifted]
    assert rotated == sorted(rotated)
