from fractions import Fraction

import pytest

from germlip.errors import ParseError
from germlip.parser import (
    parse_arc_literal,
    parse_keyed_file,
    parse_polynomial,
)
from germlip.polynomial import Poly

F = Fraction


def test_polynomial_round_trip():
    p = parse_polynomial("y^3 - x^2*y + 2", ("x", "y"))
    assert p == Poly(("x", "y"), {(0, 3): 1, (2, 1): -1, (0, 0): 2})


def test_polynomial_precedence_and_unary():
    p = parse_polynomial("-x^2 + 3*x*y - y", ("x", "y"))
    assert p.terms.get((2, 0)) == F(-1)
    assert p.terms.get((1, 1)) == F(3)
    assert p.terms.get((0, 1)) == F(-1)


def test_polynomial_rational_coefficients():
    p = parse_polynomial("1/2*x + 3/4", ("x",))
    assert p.terms.get((1,)) == F(1, 2)
    assert p.terms.get((0,)) == F(3, 4)


def test_unknown_variable_reports_location():
    with pytest.raises(ParseError) as err:
        parse_polynomial("x + z^2", ("x", "y"))
    assert err.value.column == 5


def test_trailing_garbage_rejected():
    with pytest.raises(ParseError):
        parse_polynomial("x + y )", ("x", "y"))


def test_arc_literal_fractional_exponents():
    coords = parse_arc_literal("(t, t^(3/2), -2*t^2)")
    assert coords[0] == {F(1): F(1)}
    assert coords[1] == {F(3, 2): F(1)}
    assert coords[2] == {F(2): F(-2)}


def test_arc_literal_needs_three_coordinates():
    with pytest.raises(ParseError):
        parse_arc_literal("(t, t^2)")


def test_keyed_file_comments_and_line_numbers():
    text = "# header\nname = E1\n\np = y^2  # inline\nq = y^3 - x^2*y\n"
    entries = parse_keyed_file(text, required=("p", "q"), optional=("name",))
    assert entries["p"] == ("y^2", 4)
    assert entries["name"] == ("E1", 2)


def test_keyed_file_diagnostics():
    with pytest.raises(ParseError, match="unknown key"):
        parse_keyed_file("bogus = 1", required=("p",))
    with pytest.raises(ParseError, match="duplicate"):
        parse_keyed_file("p = 1\np = 2", required=("p",))
    with pytest.raises(ParseError, match="missing required"):
        parse_keyed_file("", required=("p",))
    err = pytest.raises(ParseError, parse_keyed_file, "p = 1\njunk line", ("p",))
    assert err.value.line == 2
