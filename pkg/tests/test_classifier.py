from fractions import Fraction

import pytest

from germlip.classifier import (
    build_holder_complex,
    classify_inner,
    sector_decomposition,
    sector_exponent,
)
from germlip.complexes import canonical_form
from germlip.errors import ValidationError
from germlip.germ import double_rays

from conftest import germ, scale_target, shear_source

F = Fraction


def test_sector_decomposition_of_reference_germ():
    rs = double_rays(germ("y^2", "y^3 - x^2*y"))
    sectors = sector_decomposition(rs)
    assert len(sectors) == 4
    vertical = [s for s in sectors if s.contains_vertical]
    assert len(vertical) == 2  # one through y > 0, one through y < 0


def test_sector_decomposition_empty_system():
    rs = double_rays(germ("y^2", "y^3 + x^2*y"))
    sectors = sector_decomposition(rs)
    assert len(sectors) == 1
    assert sectors[0].full_circle


def test_sector_exponents_of_reference_germ():
    f = germ("y^2", "y^3 - x^2*y")
    rs = double_rays(f)
    betas = [sector_exponent(f, s) for s in sector_decomposition(rs)]
    # two sectors crossing the vertical get beta 1, the two sectors around
    # the x-axis squeeze at rate d2 = 2
    assert sorted(betas) == [F(1), F(1), F(2), F(2)]


def test_full_circle_beta_is_one_when_vertical_inside():
    f = germ("y^2", "(x + y)^3")
    rs = double_rays(f)
    (sec,) = sector_decomposition(rs)
    assert sector_exponent(f, sec) == F(1)


def test_sector_exponent_fallbacks():
    from germlip.classifier import Sector

    sec = Sector(contains_positive_x=True)
    # p profile constant along the slice: the third coordinate separates
    assert sector_exponent(germ("x^2", "y^3"), sec) == F(3)
    # both profiles constant: the sector carries no surface at all
    with pytest.raises(ValidationError, match="collapses"):
        sector_exponent(germ("x^2", "x^3"), sec)


def test_reference_complex_and_canonical_form():
    r = build_holder_complex(germ("y^2", "y^3 - x^2*y"))
    assert len(r.link_graph.vertices) == 2
    assert canonical_form(r.canonical) == "V2;L(1:2/1);L(2:2/1);E(1-2:1/1);E(1-2:1/1)"
    assert len(r.double_curve.branches) == 2


def test_no_ray_complex_is_single_loop():
    r = build_holder_complex(germ("y^2", "(x + y)^3"))
    assert canonical_form(r.canonical) == "V1;L(1:1/1)"
    assert r.ray_system.is_empty


def test_vertical_pair_complex():
    r = build_holder_complex(germ("y^2", "x^2*y"))
    assert len(r.link_graph.vertices) == 1
    assert all(a == b for a, b, _ in r.link_graph.edges)


def test_classify_equivalent_after_coordinate_changes():
    f = germ("y^2", "y^3 - x^2*y")
    g = scale_target(shear_source(f, F(1, 3)), F(2), F(5))
    rep = classify_inner(f, g)
    assert rep.verdict.equivalent
    assert rep.curves_verdict.equivalent
    assert rep.link_graphs_isomorphic


def test_classify_distinguishes_reference_from_no_ray_germ():
    rep = classify_inner(germ("y^2", "y^3 - x^2*y"), germ("y^2", "(x + y)^3"))
    assert not rep.verdict.equivalent
    assert "vertex counts differ" in rep.verdict.distinguishing


def test_quintic_with_same_ray_pattern_matches_reference():
    # y^5 - x^4*y doubles only the slopes +-1, so its complex coincides
    # with the reference one even though the degrees differ
    rep = classify_inner(germ("y^2", "y^5 - x^4*y"), germ("y^2", "y^3 - x^2*y"))
    assert rep.verdict.equivalent


def test_two_slope_pairs_give_larger_complex():
    f = germ("y^2", "y^5 - 5*x^2*y^3 + 4*x^4*y")
    r = build_holder_complex(f)
    assert len(r.ray_system.rays) == 8
    assert len(r.link_graph.vertices) == 4
    rep = classify_inner(f, germ("y^2", "y^3 - x^2*y"))
    assert not rep.verdict.equivalent
