"""Truncated Puiseux series with exact coefficients.

Exponents are non-negative Fractions; coefficients are Fractions when
possible and sympy expressions otherwise (square roots and algebraic
slopes appear during radius reparametrization).  `truncation` is the
exponent bound below which the series is exact; None means the series is
known exactly (a finite sum).
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy

from .algebraic import AlgebraicNumber, expr_is_zero
from .errors import TruncationError, ValidationError

# -- coefficient arithmetic (Fraction fast path, sympy fallback) -------


def _coeff(c):
    if isinstance(c, (Fraction, int)):
        return Fraction(c)
    if isinstance(c, AlgebraicNumber):
        c = c.expr
    c = sympy.sympify(c)
    if c.is_Rational:
        return Fraction(int(c.p), int(c.q))
    return c


def _c_is_zero(c):
    if isinstance(c, Fraction):
        return c == 0
    return expr_is_zero(c)


def _c_add(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return sympy.expand(sympy.sympify(a) + sympy.sympify(b))


def _c_mul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return sympy.expand(sympy.sympify(a) * sympy.sympify(b))


def _c_neg(a):
    return -a


def _c_pow(c, e):
    """c ** e for a Fraction exponent; stays a Fraction for exact powers."""
    e = Fraction(e)
    if isinstance(c, Fraction) and e.denominator == 1:
        return c ** e.numerator
    if isinstance(c, Fraction):
        num = _exact_root(c.numerator, e.denominator)
        den = _exact_root(c.denominator, e.denominator)
        if num is not None and den is not None:
            return Fraction(num, den) ** e.numerator
    base = sympy.sympify(c)
    return sympy.Pow(base, sympy.Rational(e.numerator, e.denominator))


def _exact_root(n, k):
    if n < 0:
        return None
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def _c_float(c):
    return float(c) if isinstance(c, Fraction) else float(sympy.sympify(c).evalf(30))


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PuiseuxSeries:
    """A finite sum of c * t^e with strictly increasing Fraction exponents,
    exact below `truncation`."""

    __slots__ = ("terms", "truncation")

    def __init__(self, terms, truncation=None):
        clean = {}
        for e, c in terms.items():
            e = Fraction(e)
            if e < 0:
                raise ValidationError("negative Puiseux exponent")
            c = _coeff(c)
            if truncation is not None and e >= truncation:
                continue
            if not _c_is_zero(c):
                clean[e] = c
        self.terms = dict(sorted(clean.items()))
        self.truncation = None if truncation is None else Fraction(truncation)

    @classmethod
    def zero(cls, truncation=None):
        return cls({}, truncation)

    @classmethod
    def monomial(cls, coeff, exponent, truncation=None):
        return cls({Fraction(exponent): coeff}, truncation)

    @classmethod
    def constant(cls, c, truncation=None):
        return cls({Fraction(0): c}, truncation)

    # -- queries -------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def order(self):
        """Leading exponent; None for a series with no known terms."""
        return next(iter(self.terms), None)

    def leading(self):
        e = self.order()
        if e is None:
            raise ValidationError("zero series has no leading term")
        return e, self.terms[e]

    def coefficient(self, e):
        return self.terms.get(Fraction(e), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(
            _c_is_zero(_c_add(c, _c_neg(other.terms[e]))) for e, c in self.terms.items()
        ) and self.truncation == other.truncation

    def __repr__(self):
        body = " + ".join(f"({c})*t^{e}" for e, c in self.terms.items()) or "0"
        tail = "" if self.truncation is None else f" + O(t^{self.truncation})"
        return body + tail

    def render(self, param="t"):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e, c in self.terms.items():
                if e == 0:
                    parts.append(str(c))
                else:
                    pw = param if e == 1 else f"{param}^({e})"
                    parts.append(pw if c == 1 else f"{c}*{pw}")
            body = " + ".join(parts)
        if self.truncation is not None:
            body += f" + O({param}^({self.truncation}))"
        return body

    # -- ring operations ----------------------------------------------

    def truncate(self, truncation):
        return PuiseuxSeries(self.terms, _min_trunc(self.truncation, Fraction(truncation)))

    def __add__(self, other):
        trunc = _min_trunc(self.truncation, other.truncation)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = _c_add(terms[e], c) if e in terms else c
        return PuiseuxSeries(terms, trunc)

    def __neg__(self):
        return PuiseuxSeries({e: _c_neg(c) for e, c in self.terms.items()}, self.truncation)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        t = None
        if self.truncation is not None:
            o = other.order()
            t = self.truncation + (o if o is not None else Fraction(0))
        if other.truncation is not None:
            o = self.order()
            t2 = other.truncation + (o if o is not None else Fraction(0))
            t = _min_trunc(t, t2)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if t is not None and e >= t:
                    continue
                c = _c_mul(c1, c2)
                terms[e] = _c_add(terms[e], c) if e in terms else c
        return PuiseuxSeries(terms, t)

    def scale(self, c):
        return PuiseuxSeries({e: _c_mul(k, _coeff(c)) for e, k in self.terms.items()}, self.truncation)

    def mul_monomial(self, coeff, exponent):
        exponent = Fraction(exponent)
        trunc = None if self.truncation is None else self.truncation + exponent
        return PuiseuxSeries(
            {e + exponent: _c_mul(c, _coeff(coeff)) for e, c in self.terms.items()}, trunc
        )

    def pow_int(self, n):
        n = int(n)
        if n < 0:
            raise ValidationError("negative integer power of a series")
        result = PuiseuxSeries.constant(1, self.truncation if n == 0 else None)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def binomial_pow(self, gamma, order):
        """(self)^gamma for rational gamma, requiring constant term 1."""
        gamma = Fraction(gamma)
        order = Fraction(order)
        if self.coefficient(0) != 1:
            raise ValidationError("binomial_pow needs constant term 1")
        u = (self - PuiseuxSeries.constant(1)).truncate(order)
        if u.is_zero:
            return PuiseuxSeries.constant(1, _min_trunc(self.truncation, order))
        mu = u.order()
        if mu <= 0:
            raise ValidationError("binomial_pow needs positive-order tail")
        k_max = math.ceil(order / mu)
        result = PuiseuxSeries.constant(1, order)
        power = PuiseuxSeries.constant(1, order)
        coeff = Fraction(1)
        for k in range(1, k_max + 1):
            coeff = coeff * (gamma - (k - 1)) / k
            power = (power * u).truncate(order)
            result = result + power.scale(coeff)
        return result.truncate(_min_trunc(self.truncation, order))

    def pow_fraction(self, gamma, order):
        """self^gamma for rational gamma; leading coefficient must admit the
        power (a sympy radical is introduced when it is not a perfect power)."""
        gamma = Fraction(gamma)
        if self.is_zero:
            if gamma > 0:
                return PuiseuxSeries.zero(order)
            raise ValidationError("cannot raise zero series to a non-positive power")
        e0, c0 = self.leading()
        lead_pow = _c_pow(c0, gamma)
        inv_c0 = _c_pow(c0, Fraction(-1))
        # normalize to constant term 1: divide by c0 * t^e0
        shifted = PuiseuxSeries(
            {e - e0: _c_mul(c, inv_c0) for e, c in self.terms.items()},
            None if self.truncation is None else self.truncation - e0,
        )
        rel_order = Fraction(order) - e0 * gamma
        body = shifted.binomial_pow(gamma, max(rel_order, Fraction(1, 2)))
        return body.mul_monomial(lead_pow, e0 * gamma).truncate(order)

    def compose(self, inner, order):
        """self(inner(r)) where inner has positive leading exponent."""
        order = Fraction(order)
        if not self.terms:
            return PuiseuxSeries.zero(order)
        if not inner.is_zero and inner.order() <= 0:
            raise ValidationError("composition requires a positive-order inner series")
        total = PuiseuxSeries.zero(order)
        for e, c in self.terms.items():
            if e == 0:
                piece = PuiseuxSeries.constant(c, order)
            else:
                piece = inner.pow_fraction(e, order).scale(c)
            total = total + piece
        if self.truncation is not None and not inner.is_zero:
            total = total.truncate(self.truncation * inner.order())
        return total.truncate(order)

    def evaluate_float(self, tval):
        return sum(_c_float(c) * tval ** float(e) for e, c in self.terms.items())


# -- radius reparametrization ------------------------------------------


def series_sqrt(s, order):
    """Square root of a series whose leading coefficient is positive."""
    return s.pow_fraction(Fraction(1, 2), order)


def invert_series(rho, order, max_iter=80):
    """Functional inverse: tau with rho(tau(r)) = r + O(r^order).

    `rho` must have a positive leading exponent and positive leading
    coefficient (it is a radius function).
    """
    order = Fraction(order)
    if rho.is_zero:
        raise ValidationError("cannot invert the zero series")
    mu, c = rho.leading()
    if mu <= 0:
        raise ValidationError("inversion requires positive leading exponent")
    inv_mu = Fraction(1, 1) / mu
    # tau_0 = (r/c)^(1/mu); iterate tau <- (r/c)^(1/mu) * (1 + v(tau))^(-1/mu)
    lead = PuiseuxSeries.monomial(_c_pow(_c_pow(c, Fraction(-1)), inv_mu), inv_mu)
    inv_c = _c_pow(c, Fraction(-1))
    v = PuiseuxSeries(
        {e - mu: _c_mul(k, inv_c) for e, k in rho.terms.items() if e != mu},
        None if rho.truncation is None else rho.truncation - mu,
    )
    work = order + 2
    tau = lead.truncate(work)
    for _ in range(max_iter):
        if v.is_zero:
            break
        v_tau = v.compose(tau, work)
        one_plus = PuiseuxSeries.constant(1) + v_tau
        new_tau = (lead * one_plus.binomial_pow(-inv_mu, work)).truncate(work)
        if _series_close(new_tau, tau):
            tau = new_tau
            break
        tau = new_tau
    else:
        raise TruncationError("series inversion did not stabilize", order)
    return tau.truncate(order)


def _series_close(a, b):
    if set(a.terms) != set(b.terms):
        return False
    return all(_c_is_zero(_c_add(a.terms[e], _c_neg(b.terms[e]))) for e in a.terms)


def radius_series(coords, order):
    """Euclidean norm sqrt(sum coord_i^2) of a tuple of series."""
    sq = PuiseuxSeries.zero()
    for c in coords:
        sq = sq + c * c
    if sq.is_zero:
        raise ValidationError("arc is identically zero")
    return series_sqrt(sq, order)


def radius_reparametrize(coords, order=None):
    """Re-express an arc so that the parameter is the distance to the origin.

    Returns the tuple of coordinate series in the radius variable r; the
    Euclidean norm of the output is r + O(r^order).
    """
    coords = tuple(coords)
    nonzero = [c for c in coords if not c.is_zero]
    if not nonzero:
        raise ValidationError("arc is identically zero")
    mu = min(c.order() for c in nonzero)
    if mu <= 0:
        raise ValidationError("arc leading exponents must be positive")
    if order is None:
        top = max(max(c.terms) for c in nonzero)
        order = 2 * (Fraction(math.ceil(top)) + 1) + 2
    order = Fraction(order)
    for c in nonzero:
        if c.truncation is not None and c.truncation <= mu:
            raise TruncationError("arc truncation too small for leading behavior", mu + 1)
    # rho lives in the t variable: accuracy t^(order*mu) maps to r^order.
    rho = radius_series(coords, order * mu + 1)
    tau = invert_series(rho, order)
    return tuple(c.compose(tau, order) for c in coords)
