"""Exact real algebraic numbers and real root isolation.

A real algebraic number carries a square-free defining polynomial together
with an isolating rational interval, plus the equivalent sympy expression
used for exact arithmetic (zero tests go through minimal polynomials,
never through floating comparison).
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .errors import ValidationError
from .polynomial import Poly, squarefree_part

_ZERO_TEST_VAR = sympy.Symbol("_z")


def expr_is_zero(e):
    """Exact zero test for an algebraic sympy expression."""
    e = sympy.sympify(e)
    if e.is_Rational:
        return e == 0
    v = e.evalf(40)
    if v.is_Number and abs(v) > sympy.Float("1e-30"):
        return False
    mp = sympy.minimal_polynomial(e, _ZERO_TEST_VAR)
    return mp == _ZERO_TEST_VAR


def expr_sign(e):
    """Exact sign (-1, 0, 1) of an algebraic sympy expression."""
    e = sympy.sympify(e)
    if e.is_Rational:
        return int(bool(e > 0)) - int(bool(e < 0))
    if expr_is_zero(e):
        return 0
    prec = 30
    while prec <= 2000:
        v = e.evalf(prec)
        if v.is_Number and abs(v) > sympy.Float(10) ** (-prec // 2):
            return 1 if v > 0 else -1
        prec *= 2
    raise ValidationError(f"cannot determine sign of {e}")


def _fraction(q):
    q = sympy.nsimplify(q, rational=True) if not isinstance(q, (int, Fraction)) else q
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    return Fraction(int(q.p), int(q.q))


class AlgebraicNumber:
    """A real algebraic number: square-free defining polynomial in `s` plus
    an isolating interval, with exact arithmetic and total order."""

    __slots__ = ("expr", "defining_poly", "lo", "hi")

    def __init__(self, expr, defining_poly, lo, hi):
        self.expr = sympy.sympify(expr)
        self.defining_poly = defining_poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo > self.hi:
            raise ValidationError("empty isolating interval")

    @classmethod
    def from_rational(cls, q):
        q = Fraction(q)
        poly = Poly(("s",), {(1,): Fraction(1), (0,): -q})
        return cls(sympy.Rational(q.numerator, q.denominator), poly, q, q)

    @classmethod
    def from_expr(cls, expr):
        """Build from any exact algebraic sympy expression."""
        expr = sympy.sympify(expr)
        if expr.is_Rational:
            return cls.from_rational(Fraction(int(expr.p), int(expr.q)))
        s = sympy.Symbol("s")
        mp = sympy.minimal_polynomial(expr, s)
        poly = Poly.from_sympy(mp, ("s",))
        roots = sympy.real_roots(sympy.Poly(mp, s))
        val = expr.evalf(40)
        best = min(roots, key=lambda r: abs(r.evalf(40) - val))
        lo, hi = _root_interval(best)
        num = cls(expr, poly, lo, hi)
        # The minimal-polynomial interval must actually isolate expr.
        while not (num.lo <= val <= num.hi):
            num = cls(expr, poly, *_root_interval(best))
            val = expr.evalf(80)
        return num

    # -- interval handling --------------------------------------------

    def _sign_at(self, q):
        return _fraction_sign(self.defining_poly.evaluate({"s": q}))

    def refine(self, width):
        """Shrink the isolating interval below `width` by exact bisection."""
        width = Fraction(width)
        lo, hi = self.lo, self.hi
        if lo == hi:
            return self
        s_lo = self._sign_at(lo)
        if s_lo == 0:
            self.lo = self.hi = lo
            return self
        if self._sign_at(hi) == 0:
            self.lo = self.hi = hi
            return self
        while hi - lo > width:
            mid = (lo + hi) / 2
            s_mid = self._sign_at(mid)
            if s_mid == 0:
                lo = hi = mid
                break
            if s_mid == s_lo:
                lo = mid
            else:
                hi = mid
        self.lo, self.hi = lo, hi
        return self

    # -- arithmetic and order -----------------------------------------

    @property
    def is_rational(self):
        return self.expr.is_Rational

    def as_fraction(self):
        if not self.is_rational:
            raise ValidationError("not a rational number")
        return Fraction(int(self.expr.p), int(self.expr.q))

    def to_float(self):
        return float(self.expr.evalf(30))

    def _expr_of(self, other):
        if isinstance(other, AlgebraicNumber):
            return other.expr
        if isinstance(other, Fraction):
            return sympy.Rational(other.numerator, other.denominator)
        if isinstance(other, int):
            return sympy.Integer(other)
        return NotImplemented

    def __eq__(self, other):
        o = self._expr_of(other)
        if o is NotImplemented:
            return NotImplemented
        return expr_is_zero(self.expr - o)

    def __lt__(self, other):
        o = self._expr_of(other)
        if o is NotImplemented:
            return NotImplemented
        return expr_sign(self.expr - o) < 0

    def __le__(self, other):
        o = self._expr_of(other)
        if o is NotImplemented:
            return NotImplemented
        return expr_sign(self.expr - o) <= 0

    def __gt__(self, other):
        return not self.__le__(other)

    def __ge__(self, other):
        return not self.__lt__(other)

    def __hash__(self):
        raise TypeError("AlgebraicNumber is not hashable; compare explicitly")

    def __repr__(self):
        return f"AlgebraicNumber({self.expr}, in [{self.lo}, {self.hi}])"


def _fraction_sign(q):
    return (q > 0) - (q < 0)


def _root_interval(root):
    """Rational isolating interval of a sympy real root (CRootOf/Rational)."""
    if root.is_Rational:
        q = Fraction(int(root.p), int(root.q))
        return q, q
    iv = root._get_interval()
    return Fraction(str(iv.a)), Fraction(str(iv.b))


def isolate_real_roots(f, var=None):
    """Isolate the distinct real roots of a nonzero univariate polynomial.

    Returns a list of (AlgebraicNumber, multiplicity) sorted ascending.
    """
    if f.is_zero:
        raise ValidationError("cannot isolate roots of the zero polynomial")
    candidates = [v for v in f.vars if f.depends_on(v)]
    if var is None:
        if len(candidates) > 1:
            raise ValidationError("polynomial is not univariate")
        var = candidates[0] if candidates else f.vars[0] if f.vars else "s"
    if f.is_constant:
        return []
    sym = sympy.Symbol(var)
    sp = sympy.Poly(f.to_sympy(), sym, domain=sympy.QQ)
    sqf = squarefree_part(f, var).with_vars(("s",))
    # isolating intervals with multiplicities, ascending
    ivs = sp.intervals()
    # CRootOf indexes the real roots first, in increasing order
    out = []
    for i, ((lo, hi), mult) in enumerate(ivs):
        root = sympy.CRootOf(sqf.to_sympy(), i)
        num = AlgebraicNumber(
            root,
            sqf,
            Fraction(int(lo.numerator), int(lo.denominator)),
            Fraction(int(hi.numerator), int(hi.denominator)),
        )
        out.append((num, int(mult)))
    return out
