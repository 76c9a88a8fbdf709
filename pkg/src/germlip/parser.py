"""Line-oriented input files and the shared expression grammar.

Grammar: integer and rational literals (`3`, `-2/5`), variables, `+ - * ^`
(caret takes a non-negative integer power; arc expressions also accept a
parenthesized rational), parentheses.  Implicit multiplication is a
syntax error.  `#` starts a comment.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .polynomial import Poly

_OPERATORS = set("+-*^/()=,[]")


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind  # "int" | "name" | "string" | operator char | "end"
        self.value = value
        self.line = line
        self.column = column


def tokenize(text, line_offset=1):
    tokens = []
    line = line_offset
    col = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", int(text[i:j]), line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < len(text) and text[j] != '"':
                if text[j] == "\n":
                    raise ParseError("unterminated string", line, start_col)
                j += 1
            if j >= len(text):
                raise ParseError("unterminated string", line, start_col)
            tokens.append(_Token("string", text[i + 1 : j], line, start_col))
            col += j - i + 1
            i = j + 1
            continue
        if ch in _OPERATORS:
            tokens.append(_Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(_Token("end", None, line, col))
    return tokens


class _Parser:
    """Recursive-descent parser shared by polynomial and arc expressions."""

    def __init__(self, tokens, variables, fractional_powers=False):
        self.tokens = tokens
        self.pos = 0
        self.variables = tuple(variables)
        self.fractional_powers = fractional_powers

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.value!r}", tok.line, tok.column)
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column)

    # expr := term (('+'|'-') term)*
    def expr(self):
        node = self.term()
        while self.peek().kind in "+-":
            op = self.next().kind
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    # term := factor ('*' factor)*
    def term(self):
        node = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.next()
                node = node * self.factor()
            elif tok.kind in ("int", "name"):
                self.fail("implicit multiplication is not allowed", tok)
            else:
                return node

    # factor := '-' factor | power
    def factor(self):
        if self.peek().kind == "-":
            self.next()
            return -self.factor()
        return self.power()

    # power := atom ('^' exponent)?
    def power(self):
        node = self.atom()
        if self.peek().kind == "^":
            caret = self.next()
            exp = self.exponent(caret)
            node = self.raise_to(node, exp, caret)
        return node

    def exponent(self, caret):
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return Fraction(tok.value)
        if tok.kind == "(" and self.fractional_powers:
            self.next()
            sign = 1
            if self.peek().kind == "-":
                self.next()
                sign = -1
            num = self.expect("int").value
            if self.peek().kind == "/":
                self.next()
                den = self.expect("int").value
            else:
                den = 1
            self.expect(")")
            return Fraction(sign * num, den)
        self.fail("exponent must be a non-negative integer", tok)

    # atom := rational | variable | '(' expr ')'
    def atom(self):
        tok = self.next()
        if tok.kind == "int":
            value = Fraction(tok.value)
            if self.peek().kind == "/":
                self.next()
                den = self.expect("int")
                if den.value == 0:
                    self.fail("zero denominator", den)
                value = Fraction(tok.value, den.value)
            return self.literal(value)
        if tok.kind == "name":
            if tok.value not in self.variables:
                self.fail(f"unknown variable {tok.value!r}", tok)
            return self.make_variable(tok.value)
        if tok.kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"unexpected token {tok.value!r}", tok)

    # hooks specialized below -----------------------------------------

    def literal(self, value):
        return Poly.constant(value, self.variables)

    def make_variable(self, name):
        return Poly.variable(name, self.variables)

    def raise_to(self, node, exp, caret):
        if exp.denominator != 1 or exp < 0:
            self.fail("polynomial powers must be non-negative integers", caret)
        return node ** int(exp)


class _ArcParser(_Parser):
    """Evaluates into {Fraction exponent: Fraction coefficient} dicts over t."""

    def __init__(self, tokens):
        super().__init__(tokens, ("t",), fractional_powers=True)

    def literal(self, value):
        return _ArcExpr({Fraction(0): value})

    def make_variable(self, name):
        return _ArcExpr({Fraction(1): Fraction(1)})

    def raise_to(self, node, exp, caret):
        if exp < 0:
            self.fail("negative exponents are not allowed in arcs", caret)
        if exp.denominator == 1:
            return node ** int(exp)
        if len(node.terms) != 1:
            self.fail("fractional powers apply only to single terms", caret)
        ((e, c),) = node.terms.items()
        if c != 1 and _perfect_power(c, exp) is None:
            self.fail("fractional power of a non-power coefficient", caret)
        coeff = Fraction(1) if c == 1 else _perfect_power(c, exp)
        return _ArcExpr({e * exp: coeff})


def _perfect_power(c, exp):
    from .puiseux import _c_pow

    result = _c_pow(c, exp)
    return result if isinstance(result, Fraction) else None


class _ArcExpr:
    """Minimal Laurent-free polynomial in t with rational exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {e: c for e, c in terms.items() if c}

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return _ArcExpr(terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return _ArcExpr({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, Fraction(0)) + c1 * c2
        return _ArcExpr(terms)

    def __pow__(self, n):
        out = _ArcExpr({Fraction(0): Fraction(1)})
        for _ in range(int(n)):
            out = out * self
        return out


def parse_polynomial(text, variables, line=1):
    """Parse a single polynomial expression over the given variables."""
    parser = _Parser(tokenize(text, line), variables)
    poly = parser.expr()
    end = parser.peek()
    if end.kind != "end":
        parser.fail(f"trailing input {end.value!r}", end)
    return poly


def parse_arc_expression(tokens_or_text):
    """Parse one arc coordinate expression; returns {exponent: coefficient}."""
    tokens = (
        tokenize(tokens_or_text) if isinstance(tokens_or_text, str) else tokens_or_text
    )
    parser = _ArcParser(tokens)
    node = parser.expr()
    end = parser.peek()
    if end.kind != "end":
        parser.fail(f"trailing input {end.value!r}", end)
    return node.terms


def parse_arc_literal(text):
    """Parse `(expr, expr, expr)` into three exponent->coefficient dicts."""
    tokens = tokenize(text)
    parser = _ArcParser(tokens)
    parser.expect("(")
    coords = [parser.expr()]
    while parser.peek().kind == ",":
        parser.next()
        coords.append(parser.expr())
    parser.expect(")")
    end = parser.peek()
    if end.kind != "end":
        parser.fail(f"trailing input {end.value!r}", end)
    if len(coords) != 3:
        raise ParseError(f"arc needs 3 coordinates, found {len(coords)}", 1, 1)
    return tuple(c.terms for c in coords)


def parse_keyed_file(text, required, optional=()):
    """Parse a line-oriented `key = value` file; values stay as raw strings
    with their line numbers.  Returns {key: (value_text, line_number)}."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError("expected `key = value`", lineno, 1)
        key, value = stripped.split("=", 1)
        key = key.strip()
        if key not in required and key not in optional:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        entries[key] = (value.strip(), lineno)
    for key in required:
        if key not in entries:
            raise ParseError(f"missing required key {key!r}", 1, 1)
    return entries
