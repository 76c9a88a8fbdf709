import random
from fractions import Fraction

import pytest

from germlip.contact import (
    INFINITY,
    ContactMatrix,
    PuiseuxArc,
    brute_force_curves_equivalent,
    contact_matrices_equivalent,
    contact_matrix,
    contact_order,
    curves_outer_equivalent,
)
from germlip.errors import ValidationError
from germlip.germ import CurveGerm

from conftest import random_curve

F = Fraction


def arc(x=None, y=None, z=None, label=""):
    return PuiseuxArc.from_term_dicts(
        (x or {}, y or {}, z or {}), label=label
    )


def test_contact_tangential_pair():
    # (t, t^2, 0) against (t, -t^2, 0): first divergence at exponent 2
    a = arc({F(1): F(1)}, {F(2): F(1)})
    b = arc({F(1): F(1)}, {F(2): F(-1)})
    assert contact_order(a, b) == F(2)


def test_contact_transverse_pair_is_one():
    a = arc({F(1): F(1)})
    b = arc(None, {F(1): F(1)})
    assert contact_order(a, b) == F(1)


def test_contact_of_identical_series_is_infinite():
    a = arc({F(1): F(1)}, {F(3, 2): F(2)})
    b = arc({F(1): F(1)}, {F(3, 2): F(2)})
    assert contact_order(a, b) == INFINITY


def test_contact_insensitive_to_parametrization_speed():
    # (t, t^3, 0) and (2t, 8t^3, 0) trace the same set as (t, -t^3, 0)'s
    # partner; contact depends only on the image
    a = arc({F(1): F(1)}, {F(3): F(1)})
    b = arc({F(1): F(2)}, {F(3): F(8)})
    a2 = arc({F(1): F(1)}, {F(3): F(-1)})
    assert contact_order(a, b) == INFINITY
    assert contact_order(a, a2) == contact_order(b, a2) == F(3)


def test_contact_fractional_exponents():
    a = arc({F(1): F(1)}, {F(3, 2): F(1)})
    b = arc({F(1): F(1)}, {F(3, 2): F(1)}, {F(5, 2): F(1)})
    assert contact_order(a, b) == F(5, 2)


def test_matrix_validation():
    with pytest.raises(ValidationError, match="ultrametric"):
        ContactMatrix(
            (
                (INFINITY, F(3), F(1)),
                (F(3), INFINITY, F(3)),
                (F(1), F(3), INFINITY),
            )
        )
    with pytest.raises(ValidationError, match="symmetric"):
        ContactMatrix(((INFINITY, F(2)), (F(3), INFINITY)))


def test_contact_matrix_of_reference_double_curve():
    a = arc({F(1): F(1)}, {F(2): F(1)}, label="b1")
    b = arc({F(1): F(-1)}, {F(2): F(1)}, label="b2")
    m = contact_matrix(CurveGerm((a, b), ("b1", "b2")))
    assert m.entries[0][1] == F(1)


def test_equivalence_matching_and_distinguishing():
    m1 = ContactMatrix(
        (
            (INFINITY, F(2), F(1)),
            (F(2), INFINITY, F(1)),
            (F(1), F(1), INFINITY),
        )
    )
    m2 = ContactMatrix(
        (
            (INFINITY, F(1), F(1)),
            (F(1), INFINITY, F(2)),
            (F(1), F(2), INFINITY),
        )
    )
    v = contact_matrices_equivalent(m1, m2)
    assert v.equivalent
    sigma = v.certificate
    for i in range(3):
        for j in range(3):
            assert m1.entries[i][j] == m2.entries[sigma[i]][sigma[j]]

    m3 = ContactMatrix(
        (
            (INFINITY, F(3), F(1)),
            (F(3), INFINITY, F(1)),
            (F(1), F(1), INFINITY),
        )
    )
    v = contact_matrices_equivalent(m1, m3)
    assert not v.equivalent
    assert "multisets differ" in v.distinguishing


def test_size_mismatch_reported():
    m1 = ContactMatrix(((INFINITY,),))
    m2 = ContactMatrix(((INFINITY, F(1)), (F(1), INFINITY)))
    v = contact_matrices_equivalent(m1, m2)
    assert not v.equivalent
    assert "branch counts differ" in v.distinguishing


def test_matcher_agrees_with_brute_force_on_random_curves():
    rng = random.Random(7)
    order = F(7)
    for _ in range(25):
        cf = random_curve(rng, rng.randint(1, 4))
        cg = random_curve(rng, rng.randint(1, 4))
        mf = contact_matrix(cf, order)
        mg = contact_matrix(cg, order)
        assert bool(contact_matrices_equivalent(mf, mg)) == (
            brute_force_curves_equivalent(mf, mg)
        )


def test_curves_outer_equivalent_accepts_germ_objects():
    a = arc({F(1): F(1)}, {F(2): F(1)})
    b = arc({F(1): F(-1)}, {F(2): F(1)})
    c1 = CurveGerm((a, b), ("1", "2"))
    c2 = CurveGerm((b, a), ("1", "2"))
    assert curves_outer_equivalent(c1, c2).equivalent
