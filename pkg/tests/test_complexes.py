import random
from fractions import Fraction

import pytest

from germlip.complexes import (
    ComplexTooLargeError,
    HolderComplex,
    brute_force_equivalent,
    canonical_form,
    classify_vertices,
    combinatorially_equivalent,
    is_canonical,
    multigraph_isomorphism,
    parse_complex,
    render_complex,
    simplify,
)
from germlip.errors import ValidationError

F = Fraction


def hc(vertices, edges):
    return HolderComplex(tuple(vertices), tuple(edges))


def random_complex(rng, max_vertices=8):
    n = rng.randint(1, max_vertices)
    vertices = [f"u{i}" for i in range(n)]
    edges = []
    # connect a random spanning tree so no vertex is isolated
    def beta():
        return F(rng.randint(2, 8), rng.choice((1, 2)))

    for i in range(1, n):
        j = rng.randrange(i)
        edges.append((vertices[j], vertices[i], beta()))
    if n == 1:
        edges.append((vertices[0], vertices[0], beta()))
    for _ in range(rng.randint(0, n)):
        a, b = rng.choice(vertices), rng.choice(vertices)
        edges.append((a, b, beta()))
    return hc(vertices, edges)


def relabeled(c, rng):
    perm = list(c.vertices)
    rng.shuffle(perm)
    new = {v: f"w{i}" for i, v in enumerate(perm)}
    return hc(
        [new[v] for v in c.vertices],
        [(new[a], new[b], beta) for a, b, beta in c.edges],
    )


def test_validation_rules():
    with pytest.raises(ValidationError, match="isolated"):
        hc(["a", "b"], [("a", "a", F(1))])
    with pytest.raises(ValidationError, match="< 1"):
        hc(["a"], [("a", "a", F(1, 2))])
    with pytest.raises(ValidationError, match="not a vertex"):
        hc(["a"], [("a", "b", F(1))])


def test_vertex_taxonomy():
    c = hc(
        ["a", "b", "c", "d"],
        [
            ("a", "b", F(1)),
            ("b", "c", F(2)),
            ("c", "d", F(1)),
            ("c", "d", F(3)),
        ],
    )
    tags = classify_vertices(c)
    assert tags["b"] == "non-critical"
    assert tags["d"] == "loop"
    assert tags["a"] == "critical"  # degree 1
    assert tags["c"] == "critical"  # degree 3


def test_simplify_merges_chain_with_min_beta():
    c = hc(
        ["a", "b", "c"],
        [("a", "b", F(2)), ("b", "c", F(3)), ("a", "a", F(1)), ("c", "c", F(1))],
    )
    s = simplify(c)
    assert is_canonical(s)
    assert set(s.vertices) == {"a", "c"}
    assert ("a", "c", F(2)) in s.edges


def test_simplify_collapses_bare_cycle_to_loop():
    c = hc(
        ["a", "b", "c"],
        [("a", "b", F(2)), ("b", "c", F(3)), ("c", "a", F(5, 2))],
    )
    s = simplify(c)
    assert len(s.vertices) == 1
    v = s.vertices[0]
    assert s.edges == ((v, v, F(2)),)


def test_simplify_idempotent_and_confluent():
    rng = random.Random(11)
    for _ in range(40):
        c = random_complex(rng)
        s = simplify(c)
        assert simplify(s) == s
        shuffled = list(c.vertices)
        rng.shuffle(shuffled)
        s2 = simplify(c, order=shuffled)
        assert combinatorially_equivalent(s, s2).equivalent


def test_equivalence_vs_brute_force_and_canonical_form():
    rng = random.Random(23)
    for _ in range(30):
        c1 = simplify(random_complex(rng, max_vertices=6))
        other = random_complex(rng, 6)
        c2 = relabeled(c1, rng) if rng.random() < 0.5 else simplify(other)
        fast = combinatorially_equivalent(c1, c2).equivalent
        assert fast == brute_force_equivalent(c1, c2)
        assert fast == (canonical_form(c1) == canonical_form(c2))


def test_canonical_form_shape():
    c = hc(["x1", "x2"], [("x1", "x1", F(2)), ("x2", "x2", F(2)), ("x1", "x2", F(1)), ("x1", "x2", F(1))])
    form = canonical_form(c)
    assert form == "V2;L(1:2/1);L(2:2/1);E(1-2:1/1);E(1-2:1/1)"


def test_canonical_form_vertex_limit():
    n = 13
    verts = [f"u{i}" for i in range(n)]
    edges = [(verts[i], verts[(i + 1) % n], F(1)) for i in range(n)]
    with pytest.raises(ComplexTooLargeError):
        canonical_form(hc(verts, edges))


def test_multigraph_isomorphism_certificate():
    c1 = hc(["a", "b"], [("a", "b", F(1)), ("a", "b", F(2)), ("b", "b", F(3))])
    rng = random.Random(3)
    c2 = relabeled(c1, rng)
    phi = dict(multigraph_isomorphism(c1, c2))
    mapped = sorted(
        tuple(sorted((phi[a], phi[b]))) + (beta,) for a, b, beta in c1.edges
    )
    assert mapped == sorted(
        tuple(sorted((a, b))) + (beta,) for a, b, beta in c2.edges
    )


def test_beta_multiset_distinguishes():
    c1 = hc(["a"], [("a", "a", F(2))])
    c2 = hc(["a"], [("a", "a", F(3))])
    v = combinatorially_equivalent(c1, c2)
    assert not v.equivalent
    assert v.distinguishing


def test_render_parse_round_trip():
    c = hc(["a", "b"], [("a", "b", F(3, 2)), ("b", "b", F(2))])
    back = parse_complex(render_complex(c))
    assert back == c


def test_parse_complex_diagnostics():
    from germlip.errors import ParseError

    with pytest.raises(ParseError):
        parse_complex("vertices = [a]\n")
    with pytest.raises(ParseError):
        parse_complex("vertices = [a]\nedges = [junk]\n")
