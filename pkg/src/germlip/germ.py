"""Corank-1 homogeneous map germs and their double-point ray systems.

A germ f(x, y) = (x, p(x, y), q(x, y)) with p, q homogeneous of degrees
d2, d3 >= 2 has a double point set that is a union of lines y = alpha*x
(and possibly x = 0).  The slopes alpha are computed exactly by
eliminating one direction variable from the divided-difference system and
isolating real roots.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .algebraic import AlgebraicNumber, expr_is_zero, isolate_real_roots
from .contact import PuiseuxArc
from .errors import FiniteDeterminacyError, ValidationError
from .parser import parse_keyed_file, parse_polynomial
from .polynomial import Poly, divided_difference, resultant
from .puiseux import PuiseuxSeries

GERM_VARIABLES = ("x", "y")


@dataclass(frozen=True)
class MapGerm:
    """A validated homogeneous corank-1 parametrization (x, p, q)."""

    name: str
    p: Poly
    q: Poly
    d2: int
    d3: int

    def map_point(self, x, y):
        """Float evaluation of f at a source point."""
        vals = {"x": x, "y": y}
        return (float(x), self.p.evaluate_float(vals), self.q.evaluate_float(vals))


def make_germ(p, q, name=""):
    """Validate and build a MapGerm from the two nontrivial coordinates."""
    for label, poly in (("p", p), ("q", q)):
        if poly.is_zero:
            raise ValidationError(f"{label} is identically zero")
        if not poly.is_homogeneous():
            raise ValidationError(f"{label} is not homogeneous")
    d2 = p.total_degree()
    d3 = q.total_degree()
    if d2 < 2 or d3 < 2:
        raise ValidationError(
            f"degrees must be at least 2 for corank 1 (got d2={d2}, d3={d3})"
        )
    from math import gcd

    if gcd(d2, d3) > 1:
        warnings.warn(
            f"gcd(d2, d3) = {gcd(d2, d3)} > 1: coprime degrees are not guaranteed",
            stacklevel=2,
        )
    return MapGerm(name, p, q, d2, d3)


def parse_germ(text):
    """Parse a germ file: optional `name = "<string>"`, `p = <expr>`,
    `q = <expr>`."""
    entries = parse_keyed_file(text, required=("p", "q"), optional=("name",))
    name = ""
    if "name" in entries:
        raw, line = entries["name"]
        if not (raw.startswith('"') and raw.endswith('"') and len(raw) >= 2):
            from .errors import ParseError

            raise ParseError("name must be a quoted string", line, 1)
        name = raw[1:-1]
    polys = {}
    for key in ("p", "q"):
        raw, line = entries[key]
        polys[key] = parse_polynomial(raw, GERM_VARIABLES, line)
    return make_germ(polys["p"], polys["q"], name)


# -- rays ---------------------------------------------------------------


@dataclass(frozen=True)
class Ray:
    """A half-line of the double point set: y = slope*x on one side of the
    y-axis, or the vertical half-line x = 0 with a sign of y."""

    slope: object = None  # AlgebraicNumber for slope rays, None for vertical
    sign: int = 1  # sign of x (slope rays) or sign of y (vertical rays)

    @property
    def is_vertical(self):
        return self.slope is None

    def circle_group(self):
        """Index of the ray's quadrant-group in counterclockwise order,
        starting at the downward-sloping part of {x > 0}."""
        if self.is_vertical:
            return 1 if self.sign > 0 else 3
        return 0 if self.sign > 0 else 2

    def direction_float(self):
        import math

        if self.is_vertical:
            return (0.0, float(self.sign))
        m = self.slope.to_float()
        norm = math.hypot(1.0, m)
        return (self.sign / norm, self.sign * m / norm)

    def describe(self):
        if self.is_vertical:
            return f"x=0, {'y>0' if self.sign > 0 else 'y<0'}"
        side = "x>0" if self.sign > 0 else "x<0"
        if self.slope.is_rational:
            return f"{side}, slope={self.slope.as_fraction()}"
        return f"{side}, slope~{self.slope.to_float():.6g}"


def ray_order_key(ray):
    """Sortable key realizing the counterclockwise cyclic order on the
    source circle.  Slopes are compared exactly."""
    return _RayKey(ray.circle_group(), None if ray.is_vertical else ray.slope)


class _RayKey:
    __slots__ = ("group", "slope")

    def __init__(self, group, slope):
        self.group = group
        self.slope = slope

    def __lt__(self, other):
        if self.group != other.group:
            return self.group < other.group
        if self.slope is None or other.slope is None:
            return False
        return self.slope < other.slope

    def __eq__(self, other):
        if self.group != other.group:
            return False
        if self.slope is None or other.slope is None:
            return self.slope is None and other.slope is None
        return self.slope == other.slope


@dataclass(frozen=True)
class RaySystem:
    """Double-point rays in cyclic order plus the fixed-point-free pairing
    identifying rays with equal image arcs."""

    rays: tuple
    pairing: tuple  # pairing[i] = index of the partner of ray i

    def __post_init__(self):
        n = len(self.rays)
        if sorted(self.pairing) != list(range(n)):
            raise ValidationError("pairing is not a permutation")
        for i, j in enumerate(self.pairing):
            if j == i:
                raise ValidationError("pairing must be fixed-point free")
            if self.pairing[j] != i:
                raise ValidationError("pairing must be an involution")

    @property
    def is_empty(self):
        return not self.rays

    def pairing_classes(self):
        """Ordered list of {i, partner(i)} pairs, by first ray position."""
        seen = set()
        classes = []
        for i in range(len(self.rays)):
            if i in seen:
                continue
            j = self.pairing[i]
            classes.append((i, j))
            seen.update((i, j))
        return classes


@dataclass(frozen=True)
class CurveGerm:
    """A curve germ given by its parametrized half-branches."""

    branches: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "labels", tuple(self.labels))


# -- the double point system -------------------------------------------


def double_point_system(f):
    """Divided differences of p and q restricted to directions y = s*x,
    y' = s'*x with the common power of x removed.

    Returns (p_tilde, q_tilde, vertical_in_D).
    """
    out = []
    for label, poly, deg in (("second", f.p, f.d2), ("third", f.q, f.d3)):
        dd = divided_difference(poly, "y", "y'")
        if dd.is_zero:
            raise FiniteDeterminacyError(
                f"{label} coordinate independent of y after divided difference"
                ": germ cannot be finitely determined"
            )
        # restrict to y = s x, y' = s' x; dd is homogeneous of degree deg-1,
        # so x^(deg-1) factors out exactly.
        vars_ = ("x", "y", "y'", "s", "s'")
        s = Poly.variable("s", vars_)
        sp_ = Poly.variable("s'", vars_)
        xv = Poly.variable("x", vars_)
        restricted = dd.with_vars(vars_).substitute({"y": s * xv, "y'": sp_ * xv})
        tilde = restricted.substitute({"x": Fraction(1)})
        out.append(tilde.with_vars(("s", "s'")))
    p1 = f.p.evaluate({"x": 0, "y": 1})
    q1 = f.q.evaluate({"x": 0, "y": 1})
    vertical = (f.d2 % 2 == 0 or p1 == 0) and (f.d3 % 2 == 0 or q1 == 0)
    return out[0], out[1], vertical


def double_rays(f):
    """Solve the double-point system over the reals and assemble the
    ray system with its image-identification pairing."""
    p_tilde, q_tilde, vertical = double_point_system(f)
    slopes, partners = _solve_slope_system(p_tilde, q_tilde)

    rays = []
    pair_of = {}
    for idx, alpha in enumerate(slopes):
        for sign in (1, -1):
            rays.append(Ray(slope=alpha, sign=sign))
            pair_of[len(rays) - 1] = (partners[idx], sign)
    if vertical:
        rays.append(Ray(slope=None, sign=1))
        rays.append(Ray(slope=None, sign=-1))

    order = sorted(range(len(rays)), key=lambda i: ray_order_key(rays[i]))
    position = {old: new for new, old in enumerate(order)}
    sorted_rays = tuple(rays[i] for i in order)

    pairing = [None] * len(sorted_rays)
    for old_i, (partner_idx, sign) in pair_of.items():
        target_old = 2 * partner_idx + (0 if sign == 1 else 1)
        pairing[position[old_i]] = position[target_old]
    if vertical:
        up_old = len(rays) - 2
        down_old = len(rays) - 1
        pairing[position[up_old]] = position[down_old]
        pairing[position[down_old]] = position[up_old]

    system = RaySystem(sorted_rays, tuple(pairing))
    _verify_pairing_arcs(f, system)
    return system


def _solve_slope_system(p_tilde, q_tilde):
    """Real solutions (alpha, alpha') of p~ = q~ = 0 off the diagonal.

    Returns (slopes sorted ascending, partner index per slope)."""
    if p_tilde.is_constant or q_tilde.is_constant:
        # divided differences are nonzero, so a constant factor equation has
        # no solutions at all
        return [], []
    res = resultant(p_tilde, q_tilde, "s'")
    if res.is_zero:
        raise FiniteDeterminacyError(
            "the double-point system has a positive-dimensional solution set"
            ": finite determinacy violated"
        )
    if res.is_constant:
        return [], []
    roots = [num for num, _mult in isolate_real_roots(res, "s")]
    values = [r.expr for r in roots]

    def system_vanishes(a, b):
        pv = p_tilde.evaluate_sympy({"s": a, "s'": b})
        if not expr_is_zero(pv):
            return False
        qv = q_tilde.evaluate_sympy({"s": a, "s'": b})
        return expr_is_zero(qv)

    n = len(roots)
    partner_lists = [[] for _ in range(n)]
    for i in range(n):
        if system_vanishes(values[i], values[i]):
            raise FiniteDeterminacyError(
                "singular ray off the origin (cross-cap line): finite"
                " determinacy violated"
            )
        for j in range(n):
            if i == j:
                continue
            if system_vanishes(values[i], values[j]):
                partner_lists[i].append(j)

    keep = []
    for i in range(n):
        if len(partner_lists[i]) > 1:
            raise FiniteDeterminacyError(
                "a double-point ray has multiple partners (triple point line)"
                ": finite determinacy violated"
            )
        if partner_lists[i]:
            keep.append(i)

    # reindex onto the kept slopes; partnership is symmetric by symmetry of
    # the divided-difference system
    index_map = {old: new for new, old in enumerate(keep)}
    slopes = [roots[i] for i in keep]
    partners = []
    for i in keep:
        j = partner_lists[i][0]
        if j not in index_map:
            raise FiniteDeterminacyError(
                "double-point pairing is not symmetric: finite determinacy violated"
            )
        partners.append(index_map[j])
    return slopes, partners


def _verify_pairing_arcs(f, system):
    """Symbolic check that paired rays have identical image arcs."""
    for i, j in system.pairing_classes():
        a, b = system.rays[i], system.rays[j]
        if a.is_vertical != b.is_vertical:
            raise FiniteDeterminacyError(
                "a slope ray is paired with a vertical ray: manual review required"
            )
        if a.is_vertical:
            continue
        if a.sign != b.sign:
            raise FiniteDeterminacyError(
                "paired rays disagree in the sign of x: image arcs cannot match"
            )
        for poly in (f.p, f.q):
            va = poly.evaluate_sympy({"x": 1, "y": a.slope.expr})
            vb = poly.evaluate_sympy({"x": 1, "y": b.slope.expr})
            if not expr_is_zero(va - vb):
                raise FiniteDeterminacyError(
                    "paired rays have different image arcs: pairing is inconsistent"
                )


# -- image arcs ---------------------------------------------------------


def image_arc(f, ray):
    """The image of a double-point ray, as an arc with positive parameter."""
    sigma = ray.sign
    if ray.is_vertical:
        a2 = f.p.evaluate({"x": 0, "y": 1}) * Fraction(sigma) ** f.d2
        a3 = f.q.evaluate({"x": 0, "y": 1}) * Fraction(sigma) ** f.d3
        first = PuiseuxSeries.zero()
    else:
        alpha = ray.slope.expr
        a2 = sympy.expand(f.p.evaluate_sympy({"x": 1, "y": alpha}) * sympy.Integer(sigma) ** f.d2)
        a3 = sympy.expand(f.q.evaluate_sympy({"x": 1, "y": alpha}) * sympy.Integer(sigma) ** f.d3)
        first = PuiseuxSeries.monomial(sigma, 1)
    coords = (
        first,
        PuiseuxSeries.monomial(a2, f.d2) if not _is_zero_coeff(a2) else PuiseuxSeries.zero(),
        PuiseuxSeries.monomial(a3, f.d3) if not _is_zero_coeff(a3) else PuiseuxSeries.zero(),
    )
    return PuiseuxArc(coords, label=ray.describe())


def _is_zero_coeff(c):
    if isinstance(c, Fraction):
        return c == 0
    return expr_is_zero(c)


def image_double_curve(f, system=None):
    """One parametrized branch per pairing class of the ray system."""
    if system is None:
        system = double_rays(f)
    branches = []
    labels = []
    for i, j in system.pairing_classes():
        arc = image_arc(f, system.rays[i])
        partner_arc = image_arc(f, system.rays[j])
        if not arc.same_series(partner_arc):
            raise FiniteDeterminacyError("paired rays produced different arcs")
        label = f"{system.rays[i].describe()} ~ {system.rays[j].describe()}"
        branches.append(PuiseuxArc(arc.coords, label=label))
        labels.append(label)
    return CurveGerm(tuple(branches), tuple(labels))
