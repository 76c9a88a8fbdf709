"""End-to-end acceptance checks.

Each test prints one `CRITERION n: PASS` / `CRITERION n: FAIL` line so the
suite output doubles as a checklist.
"""

import math
import random
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from germlip.classifier import build_holder_complex, classify_inner, sector_decomposition
from germlip.complexes import (
    brute_force_equivalent,
    canonical_form,
    combinatorially_equivalent,
    simplify,
)
from germlip.contact import (
    INFINITY,
    brute_force_curves_equivalent,
    contact_matrices_equivalent,
    contact_matrix,
    contact_order,
    PuiseuxArc,
)
from germlip.germ import double_rays
from germlip.cli import main as cli_main
from germlip.oracle import (
    Correspondence,
    dilation_correspondence,
    estimate_contact,
    estimate_sector_exponent,
    lipschitz_estimate,
    radial_extension,
    rotation_correspondence,
    sample_puiseux_arc,
    trace_link,
)
from germlip.parser import parse_polynomial

from conftest import CORPUS, germ, random_curve, scale_target, shear_source, write_germ_file

F = Fraction


@contextmanager
def criterion(n):
    try:
        yield
    except BaseException:
        print(f"CRITERION {n}: FAIL")
        raise
    print(f"CRITERION {n}: PASS")


def test_criterion_1_reference_germ_end_to_end():
    with criterion(1):
        f = germ("y^2", "y^3 - x^2*y", name="E1")
        report = build_holder_complex(f)
        rs = report.ray_system

        # rays: slopes +-1 on both sides of the y-axis, no vertical ray
        assert len(rs.rays) == 4
        assert not any(r.is_vertical for r in rs.rays)
        slopes = sorted(
            (r.sign, r.slope.as_fraction()) for r in rs.rays
        )
        assert slopes == [(-1, F(-1)), (-1, F(1)), (1, F(-1)), (1, F(1))]

        # pairing identifies the two rays on each side of the y-axis
        for i, j in rs.pairing_classes():
            assert rs.rays[i].sign == rs.rays[j].sign
            assert rs.rays[i].slope.as_fraction() == -rs.rays[j].slope.as_fraction()

        # canonical complex: two vertices with loops beta=2 and two beta=1 edges
        assert (
            canonical_form(report.canonical)
            == "V2;L(1:2/1);L(2:2/1);E(1-2:1/1);E(1-2:1/1)"
        )

        # numeric cross-check: every sector exponent within 0.15 of exact
        for sec, beta in zip(report.sectors, report.sector_betas):
            est = estimate_sector_exponent(f, sec, samples=6)
            assert abs(est - float(beta)) <= 0.15


def test_criterion_2_cuspidal_germ_single_loop():
    with criterion(2):
        f = germ("y^2", "(x + y)^3")
        report = build_holder_complex(f)
        assert report.ray_system.is_empty
        assert canonical_form(report.canonical) == "V1;L(1:1/1)"
        (sec,) = sector_decomposition(report.ray_system)
        est = estimate_sector_exponent(f, sec, samples=8)
        assert abs(est - 1.0) <= 0.05


def test_criterion_3_invariance_under_coordinate_changes():
    with criterion(3):
        rng = random.Random(101)
        for name, p_text, q_text in CORPUS:
            f = germ(p_text, q_text, name)
            base = build_holder_complex(f)
            base_form = canonical_form(base.canonical)
            for _ in range(5):
                c = F(rng.randint(-3, 3), rng.randint(1, 4))
                lam = F(rng.randint(1, 5))
                mu = F(rng.randint(1, 5))
                g = scale_target(shear_source(f, c), lam, mu)
                other = build_holder_complex(g)
                assert canonical_form(other.canonical) == base_form, name
                assert contact_matrices_equivalent(
                    base.contact, other.contact
                ).equivalent, name


def test_criterion_4_curve_classifier_vs_brute_force():
    with criterion(4):
        rng = random.Random(202)
        order = F(7)
        for _ in range(100):
            cf = random_curve(rng, rng.randint(1, 6))
            cg = random_curve(rng, rng.randint(1, 6))
            mf = contact_matrix(cf, order)
            mg = contact_matrix(cg, order)
            fast = bool(contact_matrices_equivalent(mf, mg))
            assert fast == brute_force_curves_equivalent(mf, mg)
            # a relabeled copy of cf must always match itself
            assert bool(contact_matrices_equivalent(mf, mf))


def test_criterion_5_holder_calculus_properties():
    import test_complexes as tc

    with criterion(5):
        rng = random.Random(303)
        simplified = []
        for _ in range(500):
            c = tc.random_complex(rng, max_vertices=12)
            s = simplify(c)
            assert simplify(s) == s
            shuffled = list(c.vertices)
            rng.shuffle(shuffled)
            s2 = simplify(c, order=shuffled)
            assert combinatorially_equivalent(s, s2).equivalent
            if len(s.vertices) <= 8:
                simplified.append(s)

        checked = 0
        for c1, c2 in zip(simplified[::2], simplified[1::2]):
            fast = combinatorially_equivalent(c1, c2).equivalent
            assert fast == brute_force_equivalent(c1, c2)
            checked += 1
        assert checked >= 100

        for c in simplified[:50]:
            twin = tc.relabeled(c, rng)
            assert canonical_form(c) == canonical_form(twin)


def test_criterion_6_contact_estimates_track_exact_values():
    with criterion(6):
        rng = random.Random(404)
        exponents = (F(1), F(3, 2), F(2), F(5, 2), F(3))

        def random_arc():
            terms_y = {}
            terms_z = {}
            for terms in (terms_y, terms_z):
                if rng.random() < 0.7:
                    terms[rng.choice(exponents)] = F(rng.choice((-2, -1, 1, 2)))
            return PuiseuxArc.from_term_dicts(
                ({F(1): F(rng.choice((-1, 1)))}, terms_y, terms_z)
            )

        arcs = [random_arc() for _ in range(20)]
        pairs = [
            (arcs[rng.randrange(20)], arcs[rng.randrange(20)]) for _ in range(50)
        ]
        order = F(7)
        for a, b in pairs:
            exact = contact_order(a, b, order)
            sa, sb = sample_puiseux_arc(a), sample_puiseux_arc(b)
            est = estimate_contact(sa, sb)
            est_rev = estimate_contact(sb, sa)
            if exact is INFINITY:
                assert est.infinite and est_rev.infinite
            else:
                assert abs(est.value - float(exact)) <= 0.15
                assert est.value == est_rev.value

        # ultrametric inequality on exact contact orders over sampled triples
        def as_key(v):
            return math.inf if v is INFINITY else float(v)

        for _ in range(50):
            a, b, c = (arcs[rng.randrange(20)] for _ in range(3))
            kab = as_key(contact_order(a, b, order))
            kbc = as_key(contact_order(b, c, order))
            kac = as_key(contact_order(a, c, order))
            assert kac >= min(kab, kbc) or math.isclose(kac, min(kab, kbc))


def test_criterion_7_radial_extension_oracle():
    with criterion(7):
        phi = parse_polynomial("x^2 + y^2 - z^2", ("x", "y", "z"))
        cone = trace_link(phi)
        th = 0.9
        rot = np.array(
            [
                [math.cos(th), -math.sin(th), 0.0],
                [math.sin(th), math.cos(th), 0.0],
                [0.0, 0.0, 1.0],
            ]
        )
        for corr in (
            dilation_correspondence(cone, cone.radius),
            rotation_correspondence(cone, rot),
        ):
            est = lipschitz_estimate(corr, pairs=800, rng=np.random.default_rng(7))
            assert est.bound_ok
            assert est.c_emp <= 1.01

        # cone against the elliptic cone with axis ratio 2
        ell = trace_link(parse_polynomial("4*x^2 + y^2 - z^2", ("x", "y", "z")))
        order_c = np.argsort([c[:, 2].mean() for c in cone.components])
        order_e = np.argsort([c[:, 2].mean() for c in ell.components])
        corr = Correspondence(cone, ell, tuple(zip(order_c, order_e)))
        assert lipschitz_estimate(corr, pairs=800, rng=np.random.default_rng(8)).bound_ok
        assert lipschitz_estimate(
            corr.inverse(), pairs=800, rng=np.random.default_rng(9)
        ).bound_ok

        # sphere preservation: |H(p)| = |p| to 1e-9
        ident = dilation_correspondence(cone, cone.radius)
        rng = np.random.default_rng(10)
        for _ in range(50):
            comp = cone.components[rng.integers(len(cone.components))]
            p = comp[rng.integers(len(comp))] * rng.uniform(0.01, 1.0)
            h = radial_extension(ident, p)
            assert abs(np.linalg.norm(h) - np.linalg.norm(p)) <= 1e-9


def test_criterion_8_cli_exit_codes(tmp_path, capsys):
    with criterion(8):
        e1 = write_germ_file(tmp_path / "e1.germ", "y^2", "y^3 - x^2*y", name="E1")
        cusp = write_germ_file(tmp_path / "cusp.germ", "y^2", "(x + y)^3")
        bad = write_germ_file(tmp_path / "bad.germ", "x^2", "y^3")

        assert cli_main(["classify", str(e1), str(e1)]) == 0
        capsys.readouterr()

        assert cli_main(["classify", str(e1), str(cusp)]) == 1
        capsys.readouterr()

        code = cli_main(["dpoints", str(bad)])
        out = capsys.readouterr()
        assert code == 2
        assert "finitely determined" in (out.out + out.err)
