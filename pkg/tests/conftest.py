import random
from fractions import Fraction

import pytest
import sympy as sp

from germlip.contact import PuiseuxArc
from germlip.germ import CurveGerm, make_germ
from germlip.parser import parse_polynomial
from germlip.polynomial import Poly


def germ(p_text, q_text, name=""):
    p = parse_polynomial(p_text, ("x", "y"))
    q = parse_polynomial(q_text, ("x", "y"))
    return make_germ(p, q, name)


def shear_source(f, c):
    """Precompose with the shear (x, y) -> (x, y + c*x)."""
    x, y = sp.symbols("x y")
    cc = sp.Rational(c.numerator, c.denominator)
    p = Poly.from_sympy(sp.expand(f.p.to_sympy().subs(y, y + cc * x)), ("x", "y"))
    q = Poly.from_sympy(sp.expand(f.q.to_sympy().subs(y, y + cc * x)), ("x", "y"))
    return make_germ(p, q, f.name)


def scale_target(f, lam, mu):
    """Postcompose with the diagonal map (X, Y, Z) -> (X, lam*Y, mu*Z)."""
    return make_germ(f.p * lam, f.q * mu, f.name)


CORPUS = [
    ("E1", "y^2", "y^3 - x^2*y"),
    ("cuspidal", "y^2", "(x + y)^3"),
    ("vertical", "y^2", "x^2*y"),
    ("scaled", "y^2", "y^3 - 4*x^2*y"),
    ("no-rays", "y^2", "y^3 + x^2*y"),
    ("quintic", "y^2", "y^5 - x^4*y"),
    ("two-pairs", "y^2", "y^5 - 5*x^2*y^3 + 4*x^4*y"),
]


@pytest.fixture(scope="session")
def corpus_germs():
    return [germ(p, q, name) for name, p, q in CORPUS]


def random_curve(rng, branches):
    """Curve germ with the given number of distinct monomial-arc branches."""
    seen = []
    while len(seen) < branches:
        coords = [{Fraction(1): Fraction(rng.choice([1, -1]))}]
        for _ in range(2):
            if rng.random() < 0.3:
                coords.append({})
            else:
                coords.append(
                    {
                        Fraction(rng.randint(1, 4)): Fraction(
                            rng.choice([-3, -2, -1, 1, 2, 3])
                        )
                    }
                )
        arc = PuiseuxArc.from_term_dicts(coords)
        if any(arc.same_series(b) for b in seen):
            continue
        seen.append(arc)
    return CurveGerm(tuple(seen), tuple(str(i) for i in range(branches)))


def write_germ_file(path, p_text, q_text, name=None):
    lines = []
    if name is not None:
        lines.append(f'name = "{name}"')
    lines += [f"p = {p_text}", f"q = {q_text}"]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
