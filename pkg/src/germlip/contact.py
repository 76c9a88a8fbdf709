"""Contact orders between arcs and outer classification of curve germs.

The contact order of two arcs is the leading exponent, in the sphere
radius r, of the distance between their trace points at radius r.  Each
arc meets the sphere in one point for small r, so the set distance
reduces to the distance of the two radius-parametrized points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .errors import ValidationError
from .puiseux import PuiseuxSeries, radius_reparametrize


class Infinity:
    """Distinguished contact value for coinciding arcs; compares above
    every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("germlip-contact-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Infinity)

    def __gt__(self, other):
        return not isinstance(other, Infinity)

    def __ge__(self, other):
        return True


INFINITY = Infinity()


def _contact_min(a, b):
    return b if isinstance(a, Infinity) else (a if isinstance(b, Infinity) else min(a, b))


@dataclass(frozen=True)
class PuiseuxArc:
    """A half-branch curve germ: three Puiseux series in a common positive
    parameter t."""

    coords: tuple
    label: str = ""

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != 3:
            raise ValidationError("an arc has exactly 3 coordinates")
        nonzero = [c for c in coords if not c.is_zero]
        if not nonzero:
            raise ValidationError("arc is identically zero")
        if min(c.order() for c in nonzero) <= 0:
            raise ValidationError("arc leading radius exponent must be positive")

    @classmethod
    def from_term_dicts(cls, dicts, label=""):
        return cls(tuple(PuiseuxSeries(d) for d in dicts), label)

    def evaluate_float(self, t):
        return tuple(c.evaluate_float(t) for c in self.coords)

    def same_series(self, other):
        return all(a == b for a, b in zip(self.coords, other.coords))


def contact_order(a, b, order=None):
    """Exact contact order of two arcs; INFINITY iff they coincide as series."""
    if a.same_series(b):
        return INFINITY
    if order is None:
        order = _default_order(a, b)
    ra = radius_reparametrize(a.coords, order)
    rb = radius_reparametrize(b.coords, order)
    return _reparametrized_contact(ra, rb)


def _default_order(a, b):
    top = Fraction(0)
    for arc in (a, b):
        for c in arc.coords:
            if c.terms:
                top = max(top, max(c.terms))
    import math

    return 2 * (Fraction(math.ceil(top)) + 1) + 2


@dataclass(frozen=True)
class ContactMatrix:
    """Symmetric matrix of pairwise contact orders; diagonal is INFINITY."""

    entries: tuple  # tuple of tuples over Fraction | Infinity

    @property
    def size(self):
        return len(self.entries)

    def __post_init__(self):
        n = len(self.entries)
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValidationError("contact matrix must be square")
            if not isinstance(rows[i][i], Infinity):
                raise ValidationError("contact matrix diagonal must be INFINITY")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ValidationError("contact matrix must be symmetric")
                if i != j and rows[i][j] < Fraction(1):
                    raise ValidationError(
                        "contact order below 1 between arcs through the origin"
                    )
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if len({i, j, k}) < 3:
                        continue
                    if rows[i][k] < _contact_min(rows[i][j], rows[j][k]):
                        raise ValidationError("contact matrix violates the ultrametric inequality")

    def off_diagonal_multiset(self):
        out = []
        for i in range(self.size):
            for j in range(i + 1, self.size):
                out.append(self.entries[i][j])
        return sorted(out, key=_sort_key)

    def row_multiset(self, i):
        return sorted(
            (self.entries[i][j] for j in range(self.size) if j != i), key=_sort_key
        )

    def render(self):
        return "\n".join(
            " ".join(str(e) for e in row) for row in self.entries
        )


def _sort_key(v):
    return (1, Fraction(0)) if isinstance(v, Infinity) else (0, v)


def contact_matrix(curve, order=None):
    """Pairwise contact matrix of the branches of a curve germ.

    Every branch is radius-reparametrized once at a shared truncation
    order; the pairwise contacts are then cheap series differences.
    """
    arcs = list(curve.branches)
    n = len(arcs)
    if n and order is None:
        order = max(_default_order(a, b) for a in arcs for b in arcs)
    reps = [radius_reparametrize(a.coords, order) for a in arcs]
    rows = [[INFINITY] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if arcs[i].same_series(arcs[j]):
                k = INFINITY
            else:
                k = _reparametrized_contact(reps[i], reps[j])
            if isinstance(k, Infinity):
                raise ValidationError(
                    f"branch list not reduced: branches {i} and {j} coincide"
                )
            rows[i][j] = rows[j][i] = k
    return ContactMatrix(tuple(tuple(row) for row in rows))


def _reparametrized_contact(ra, rb):
    best = None
    for ca, cb in zip(ra, rb):
        diff = ca - cb
        if not diff.is_zero:
            e = diff.order()
            best = e if best is None else min(best, e)
    return INFINITY if best is None else best


@dataclass(frozen=True)
class Verdict:
    """Equivalence decision with a certificate or a distinguishing invariant."""

    equivalent: bool
    certificate: object = None
    distinguishing: str = ""
    details: str = ""

    def __bool__(self):
        return self.equivalent


def curves_outer_equivalent(cf, cg, order=None):
    """Decide outer bi-Lipschitz equivalence of two curve germs by matching
    their contact matrices under a branch permutation."""
    mf = cf if isinstance(cf, ContactMatrix) else contact_matrix(cf, order)
    mg = cg if isinstance(cg, ContactMatrix) else contact_matrix(cg, order)
    return contact_matrices_equivalent(mf, mg)


def contact_matrices_equivalent(mf, mg):
    if mf.size != mg.size:
        return Verdict(
            False,
            distinguishing=f"branch counts differ: {mf.size} vs {mg.size}",
        )
    n = mf.size
    if n == 0:
        return Verdict(True, certificate=())
    a = mf.off_diagonal_multiset()
    b = mg.off_diagonal_multiset()
    if a != b:
        return Verdict(
            False,
            distinguishing=(
                "contact multisets differ: {" + ", ".join(map(str, a)) + "} vs {"
                + ", ".join(map(str, b)) + "}"
            ),
        )
    rows_f = [mf.row_multiset(i) for i in range(n)]
    rows_g = [mg.row_multiset(i) for i in range(n)]
    sigma = [None] * n
    used = [False] * n

    def backtrack(i):
        if i == n:
            return True
        for j in range(n):
            if used[j] or rows_f[i] != rows_g[j]:
                continue
            if any(
                sigma[k] is not None and mf.entries[i][k] != mg.entries[j][sigma[k]]
                for k in range(n)
            ):
                continue
            sigma[i] = j
            used[j] = True
            if backtrack(i + 1):
                return True
            sigma[i] = None
            used[j] = False
        return False

    if backtrack(0):
        return Verdict(True, certificate=tuple(sigma))
    return Verdict(
        False,
        distinguishing="equal contact multisets but no permutation aligns the matrices",
    )


def brute_force_curves_equivalent(mf, mg):
    """Independent all-permutations oracle (test support, l <= 6)."""
    if mf.size != mg.size:
        return False
    n = mf.size
    for sigma in permutations(range(n)):
        if all(
            mf.entries[i][j] == mg.entries[sigma[i]][sigma[j]]
            for i in range(n)
            for j in range(n)
        ):
            return True
    return False
