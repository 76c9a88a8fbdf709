"""Sparse multivariate polynomials over exact rationals.

Coefficients are `fractions.Fraction`; exponent vectors are tuples of
non-negative ints matching the ordered variable list.  Resultants are
delegated to sympy; everything else is done directly on the sparse
representation.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .errors import ValidationError

#: Variables understood by the package, in a fixed global order used when
#: polynomials over different variable lists are combined.
KNOWN_VARIABLES = ("x", "y", "y'", "s", "s'", "t", "z")

_SYMPY_SYMBOLS = {name: sympy.Symbol(name) for name in KNOWN_VARIABLES}


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, sympy.Rational):
        return Fraction(int(c.p), int(c.q))
    raise TypeError(f"not an exact rational coefficient: {c!r}")


class Poly:
    """Immutable sparse polynomial over Q in an ordered list of variables."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables, terms):
        variables = tuple(variables)
        for v in variables:
            if v not in KNOWN_VARIABLES:
                raise ValidationError(f"unknown variable {v!r}")
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValidationError("exponent vector arity mismatch")
            if any(e < 0 for e in exps):
                raise ValidationError("negative exponent")
            coeff = _as_fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def constant(cls, c, variables):
        return cls(variables, {(0,) * len(variables): Fraction(c)})

    @classmethod
    def variable(cls, name, variables):
        variables = tuple(variables)
        i = variables.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {exps: Fraction(1)})

    # -- basic queries ------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self):
        if not self.is_constant:
            raise ValidationError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def degree(self, var):
        i = self.vars.index(var)
        return max((exps[i] for exps in self.terms), default=0)

    def total_degree(self):
        return max((sum(exps) for exps in self.terms), default=0)

    def is_homogeneous(self):
        degrees = {sum(exps) for exps in self.terms}
        return len(degrees) <= 1

    def depends_on(self, var):
        i = self.vars.index(var)
        return any(exps[i] > 0 for exps in self.terms)

    # -- ring operations ----------------------------------------------

    def _aligned(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.vars)
        if self.vars == other.vars:
            return self, other
        merged = tuple(v for v in KNOWN_VARIABLES if v in self.vars or v in other.vars)
        return self.with_vars(merged), other.with_vars(merged)

    def with_vars(self, variables):
        """Re-express over a variable list that must contain every variable
        this polynomial depends on."""
        variables = tuple(variables)
        pos = []
        for i, v in enumerate(self.vars):
            if v in variables:
                pos.append(variables.index(v))
            elif self.depends_on(v):
                raise ValidationError(f"cannot drop variable {v!r}")
            else:
                pos.append(None)
        terms = {}
        for exps, coeff in self.terms.items():
            new = [0] * len(variables)
            for i, e in enumerate(exps):
                if e:
                    new[pos[i]] = e
            key = tuple(new)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return Poly(variables, terms)

    def __add__(self, other):
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for exps, coeff in b.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return Poly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._aligned(other)
        return a + (-b)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        a, b = self._aligned(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                key = tuple(i + j for i, j in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return Poly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValidationError("negative power of a polynomial")
        result = Poly.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            merged = self.with_vars(
                tuple(v for v in KNOWN_VARIABLES if v in self.vars and self.depends_on(v))
            )
            object.__setattr__(
                self, "_hash", hash((merged.vars, frozenset(merged.terms.items())))
            )
        return self._hash

    # -- calculus and substitution ------------------------------------

    def derivative(self, var):
        i = self.vars.index(var)
        terms = {}
        for exps, coeff in self.terms.items():
            if exps[i]:
                new = list(exps)
                new[i] -= 1
                terms[tuple(new)] = coeff * exps[i]
        return Poly(self.vars, terms)

    def substitute(self, mapping):
        """Substitute polynomials (or rationals) for variables."""
        result = Poly.zero(self.vars)
        for exps, coeff in self.terms.items():
            term = Poly.constant(coeff, self.vars)
            for i, e in enumerate(exps):
                if not e:
                    continue
                v = self.vars[i]
                if v in mapping:
                    repl = mapping[v]
                    if isinstance(repl, (int, Fraction)):
                        repl = Poly.constant(repl, self.vars)
                    term = term * repl ** e
                else:
                    term = term * Poly.variable(v, self.vars) ** e
            result = result + term
        return result

    def evaluate(self, values):
        """Exact evaluation; every variable the polynomial depends on must
        get a Fraction (or int) value."""
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            prod = coeff
            for i, e in enumerate(exps):
                if e:
                    prod *= Fraction(values[self.vars[i]]) ** e
            total += prod
        return total

    def evaluate_sympy(self, values):
        """Evaluation with sympy expressions for (some) variables."""
        total = sympy.Integer(0)
        for exps, coeff in self.terms.items():
            prod = sympy.Rational(coeff.numerator, coeff.denominator)
            for i, e in enumerate(exps):
                if e:
                    v = self.vars[i]
                    val = values.get(v, _SYMPY_SYMBOLS[v])
                    prod = prod * sympy.sympify(val) ** e
            total = total + prod
        return sympy.expand(total)

    def evaluate_float(self, values):
        total = 0.0
        for exps, coeff in self.terms.items():
            prod = float(coeff)
            for i, e in enumerate(exps):
                if e:
                    prod *= float(values[self.vars[i]]) ** e
            total += prod
        return total

    # -- sympy bridge -------------------------------------------------

    def to_sympy(self):
        return self.evaluate_sympy({})

    @classmethod
    def from_sympy(cls, expr, variables):
        variables = tuple(variables)
        gens = [_SYMPY_SYMBOLS[v] for v in variables]
        sp = sympy.Poly(sympy.expand(expr), *gens, domain=sympy.QQ)
        terms = {}
        for exps, coeff in sp.terms():
            terms[tuple(int(e) for e in exps)] = Fraction(int(coeff.numerator), int(coeff.denominator))
        return cls(variables, terms)

    # -- rendering ----------------------------------------------------

    def __repr__(self):
        return f"Poly({self!s})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=lambda e: (-sum(e), e)):
            coeff = self.terms[exps]
            factors = []
            for v, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if not factors:
                body = str(coeff)
            elif coeff == 1:
                body = "*".join(factors)
            elif coeff == -1:
                body = "-" + "*".join(factors)
            else:
                body = str(coeff) + "*" + "*".join(factors)
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


# -- free operations ---------------------------------------------------


def divided_difference(f, var="y", fresh="y'"):
    """Exact quotient (f(..,y,..) - f(..,y',..)) / (y - y').

    Uses the identity (y^b - y'^b)/(y - y') = sum_{i<b} y^i y'^(b-1-i),
    so no polynomial division is needed and the result is always exact.
    """
    if fresh in f.vars and f.depends_on(fresh):
        raise ValidationError(f"variable {fresh!r} already in use")
    out_vars = tuple(v for v in KNOWN_VARIABLES if v in f.vars or v == fresh)
    g = f.with_vars(out_vars)
    i_var = out_vars.index(var)
    i_fresh = out_vars.index(fresh)
    terms = {}
    for exps, coeff in g.terms.items():
        b = exps[i_var]
        for i in range(b):
            new = list(exps)
            new[i_var] = i
            new[i_fresh] = b - 1 - i
            key = tuple(new)
            terms[key] = terms.get(key, Fraction(0)) + coeff
    return Poly(out_vars, terms)


def resultant(f, g, eliminate):
    """Sylvester resultant of f and g with respect to `eliminate`."""
    if eliminate not in f.vars and eliminate not in g.vars:
        raise ValidationError("nothing to eliminate")
    if not (f.depends_on(eliminate) if eliminate in f.vars else False) and not (
        g.depends_on(eliminate) if eliminate in g.vars else False
    ):
        raise ValidationError("nothing to eliminate")
    out_vars = tuple(
        v for v in KNOWN_VARIABLES if (v in f.vars or v in g.vars) and v != eliminate
    )
    res = sympy.resultant(f.to_sympy(), g.to_sympy(), _SYMPY_SYMBOLS[eliminate])
    return Poly.from_sympy(res, out_vars)


def squarefree_part(f, var):
    """Square-free part of a univariate polynomial (monic up to content)."""
    if f.is_zero:
        raise ValidationError("zero polynomial has no square-free part")
    expr = f.to_sympy()
    sym = _SYMPY_SYMBOLS[var]
    sqf = sympy.Poly(expr, sym, domain=sympy.QQ).sqf_part()
    return Poly.from_sympy(sqf.as_expr(), (var,))
