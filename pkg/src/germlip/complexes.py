"""Hölder Complexes: vertex taxonomy, simplification, equivalence, and a
canonical text form.

A Hölder Complex is a finite multigraph (loops and parallel edges allowed)
with a rational exponent beta >= 1 on every edge.  Simplification merges
away non-critical vertices until every vertex is critical or a loop
vertex; the result is the complete inner bi-Lipschitz invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .contact import Verdict
from .errors import ComplexTooLargeError, ParseError, ValidationError

CANONICAL_FORM_VERTEX_LIMIT = 12


def _edge(a, b, beta):
    a, b = (a, b) if str(a) <= str(b) else (b, a)
    beta = Fraction(beta)
    return (a, b, beta)


@dataclass(frozen=True)
class HolderComplex:
    """Finite multigraph with rational edge exponents beta >= 1."""

    vertices: tuple
    edges: tuple  # multiset of (a, b, beta) with a <= b lexicographically

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise ValidationError("duplicate vertex id")
        edges = tuple(sorted(_edge(a, b, beta) for a, b, beta in self.edges))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        vset = set(vertices)
        degree = {v: 0 for v in vertices}
        for a, b, beta in edges:
            if a not in vset or b not in vset:
                raise ValidationError(f"edge endpoint {a!r} or {b!r} not a vertex")
            if beta < 1:
                raise ValidationError(f"edge exponent {beta} < 1")
            degree[a] += 1
            degree[b] += 1
            if a == b:
                degree[a] += 1
        for v, d in degree.items():
            if d < 1:
                raise ValidationError(f"isolated vertex {v!r}")

    def degree(self, v):
        d = 0
        for a, b, _ in self.edges:
            if a == v:
                d += 1
            if b == v:
                d += 1
        return d

    def incident_edges(self, v):
        return [e for e in self.edges if v in (e[0], e[1])]

    def beta_multiset(self):
        return sorted(beta for _, _, beta in self.edges)


def classify_vertices(c):
    """Tag every vertex as critical, non-critical, or loop.

    Non-critical: exactly two incident edges, no loops among them, joining
    the vertex to two *different* other vertices.  Loop vertex: exactly two
    incident edges joining it to one other vertex.  Everything else is
    critical.
    """
    tags = {}
    for v in c.vertices:
        incident = c.incident_edges(v)
        if len(incident) == 2 and all(a != b for a, b, _ in incident):
            others = [(a if b == v else b) for a, b, _ in incident]
            if v not in others:
                if others[0] != others[1]:
                    tags[v] = "non-critical"
                    continue
                tags[v] = "loop"
                continue
        tags[v] = "critical"
    return tags


def _mergeable(c, v):
    """A vertex splits into an edge when it carries exactly two edge ends,
    neither of them a loop at the vertex itself."""
    incident = c.incident_edges(v)
    return len(incident) == 2 and all(a != b for a, b, _ in incident)


def simplify(c, order=None):
    """Merge away subdivision vertices; the result is the Canonical
    Hölder Complex.

    A vertex with exactly two non-loop incident edges is replaced by a
    single edge between its neighbours carrying min(beta1, beta2).  When
    both neighbours coincide the replacement is a loop edge; this keeps
    the reduction order-independent (merging around a cycle in different
    orders converges to the same loop with the minimum beta), and it
    collapses a bare cycle to a single vertex with one loop carrying the
    minimum beta of the cycle.

    `order`: optional vertex list fixing which vertex is merged first
    (used by confluence tests); defaults to sorted order.
    """
    vertices = list(c.vertices)
    edges = list(c.edges)

    def pick_order(candidates):
        if order is None:
            return sorted(candidates, key=str)
        ranked = [v for v in order if v in candidates]
        return ranked + sorted(set(candidates) - set(ranked), key=str)

    while True:
        current = HolderComplex(tuple(vertices), tuple(edges))
        candidates = [v for v in vertices if _mergeable(current, v)]
        if not candidates:
            return current
        v = pick_order(candidates)[0]
        (a1, b1, beta1), (a2, b2, beta2) = current.incident_edges(v)
        n1 = a1 if b1 == v else b1
        n2 = a2 if b2 == v else b2
        vertices.remove(v)
        edges = [e for e in edges if v not in (e[0], e[1])]
        edges.append(_edge(n1, n2, min(beta1, beta2)))


def is_canonical(c):
    return not any(_mergeable(c, v) for v in c.vertices)


# -- equivalence --------------------------------------------------------


def _pair_betas(c):
    """Map from unordered vertex pair (or loop vertex) to the sorted beta
    multiset between them."""
    pairs = {}
    for a, b, beta in c.edges:
        pairs.setdefault((a, b), []).append(beta)
    return {k: sorted(v) for k, v in pairs.items()}


def _vertex_invariant(c):
    """Per-vertex refinement invariant: degree, loop betas, incident betas."""
    inv = {}
    for v in c.vertices:
        loops = sorted(beta for a, b, beta in c.edges if a == b == v)
        incident = sorted(beta for a, b, beta in c.edges if v in (a, b) and a != b)
        inv[v] = (c.degree(v), tuple(loops), tuple(incident))
    return inv


def _find_isomorphism(c1, c2):
    """Backtracking multigraph isomorphism respecting beta exactly."""
    if len(c1.vertices) != len(c2.vertices) or len(c1.edges) != len(c2.edges):
        return None
    inv1 = _vertex_invariant(c1)
    inv2 = _vertex_invariant(c2)
    if sorted(inv1.values()) != sorted(inv2.values()):
        return None
    pairs1 = _pair_betas(c1)
    pairs2 = _pair_betas(c2)
    v1 = sorted(c1.vertices, key=lambda v: (inv1[v], str(v)))
    mapping = {}
    used = set()

    def key_of(a, b):
        return (a, b) if str(a) <= str(b) else (b, a)

    def backtrack(i):
        if i == len(v1):
            return True
        v = v1[i]
        for w in c2.vertices:
            if w in used or inv1[v] != inv2[w]:
                continue
            ok = True
            for u, m in mapping.items():
                if pairs1.get(key_of(v, u), []) != pairs2.get(key_of(w, m), []):
                    ok = False
                    break
            if not ok:
                continue
            if pairs1.get((v, v), []) != pairs2.get((w, w), []):
                continue
            mapping[v] = w
            used.add(w)
            if backtrack(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if backtrack(0):
        return dict(mapping)
    return None


def multigraph_isomorphism(c1, c2):
    """Isomorphism search without the canonicality precondition (used for
    comparing unsimplified link graphs)."""
    return _find_isomorphism(c1, c2)


def combinatorially_equivalent(c1, c2):
    """Decide combinatorial equivalence of two Canonical Hölder Complexes."""
    for c in (c1, c2):
        if not is_canonical(c):
            raise ValidationError(
                "combinatorially_equivalent requires canonical complexes; call simplify first"
            )
    if len(c1.vertices) != len(c2.vertices):
        return Verdict(
            False,
            distinguishing=f"vertex counts differ: {len(c1.vertices)} vs {len(c2.vertices)}",
        )
    deg1 = sorted(c1.degree(v) for v in c1.vertices)
    deg2 = sorted(c2.degree(v) for v in c2.vertices)
    if deg1 != deg2:
        return Verdict(False, distinguishing=f"degree sequences differ: {deg1} vs {deg2}")
    inv1 = sorted(_vertex_invariant(c1).values())
    inv2 = sorted(_vertex_invariant(c2).values())
    if inv1 != inv2:
        return Verdict(
            False,
            distinguishing="per-vertex beta multisets differ: "
            f"{_render_invariants(inv1)} vs {_render_invariants(inv2)}",
        )
    mapping = _find_isomorphism(c1, c2)
    if mapping is None:
        return Verdict(
            False,
            distinguishing="matching local invariants but no beta-preserving graph isomorphism",
        )
    return Verdict(True, certificate=mapping)


def _render_invariants(invs):
    return "[" + "; ".join(
        f"deg {d}, loops {list(map(str, lo))}, edges {list(map(str, ed))}"
        for d, lo, ed in invs
    ) + "]"


def brute_force_equivalent(c1, c2):
    """Exhaustive all-bijections oracle (test support, <= 8 vertices)."""
    if len(c1.vertices) != len(c2.vertices) or len(c1.edges) != len(c2.edges):
        return False
    pairs1 = _pair_betas(c1)
    pairs2 = _pair_betas(c2)
    for perm in permutations(c2.vertices):
        mapping = dict(zip(c1.vertices, perm))
        remapped = {}
        for (a, b), betas in pairs1.items():
            a2, b2 = mapping[a], mapping[b]
            key = (a2, b2) if str(a2) <= str(b2) else (b2, a2)
            remapped[key] = betas
        if remapped == pairs2:
            return True
    return False


# -- canonical text form ------------------------------------------------


def canonical_form(c):
    """Lexicographically minimal adjacency encoding over vertex orderings.

    Equal strings hold exactly for combinatorially equivalent complexes.
    """
    n = len(c.vertices)
    if n > CANONICAL_FORM_VERTEX_LIMIT:
        raise ComplexTooLargeError(
            f"canonical_form supports at most {CANONICAL_FORM_VERTEX_LIMIT} vertices"
            f" (got {n}); fall back to pairwise equivalence checking"
        )
    if n == 0:
        return "V0"
    inv = _vertex_invariant(c)
    pairs = _pair_betas(c)

    best = [None]

    def encode_rows(ordering):
        """Row entries for each placed vertex against earlier ones."""
        rows = []
        index = {v: i for i, v in enumerate(ordering)}
        for i, v in enumerate(ordering):
            row = []
            loops = pairs.get((v, v), [])
            for beta in loops:
                row.append(("L", i + 1, beta))
            for j in range(i):
                u = ordering[j]
                key = (v, u) if str(v) <= str(u) else (u, v)
                for beta in pairs.get(key, []):
                    if key != (v, v):
                        row.append(("E", j + 1, i + 1, beta))
            rows.append(tuple(sorted(row, key=_entry_sort_key)))
        return tuple(rows)

    def backtrack(ordering, remaining, rows):
        if not remaining:
            if best[0] is None or rows < best[0]:
                best[0] = rows
            return
        for v in sorted(remaining, key=lambda u: (inv[u], str(u))):
            new_order = ordering + [v]
            new_rows = rows + (encode_rows(new_order)[-1],)
            if best[0] is not None and new_rows > best[0][: len(new_rows)]:
                continue
            backtrack(new_order, remaining - {v}, new_rows)

    backtrack([], set(c.vertices), ())
    rows = best[0]
    entries = [entry for row in rows for entry in row]
    entries.sort(key=_entry_sort_key)
    body = ";".join(_render_entry(e) for e in entries)
    return f"V{n}" + (";" + body if body else "")


def _entry_sort_key(entry):
    if entry[0] == "L":
        return (0, entry[1], entry[1], entry[2])
    return (1, entry[1], entry[2], entry[3])


def _render_entry(entry):
    if entry[0] == "L":
        _, i, beta = entry
        return f"L({i}:{beta.numerator}/{beta.denominator})"
    _, i, j, beta = entry
    return f"E({i}-{j}:{beta.numerator}/{beta.denominator})"


# -- file format --------------------------------------------------------


def render_complex(c):
    """Write the complex file format: vertex list plus edge tuples."""
    verts = ", ".join(str(v) for v in c.vertices)
    edges = ", ".join(
        f'({a}, {b}, "{beta.numerator}/{beta.denominator}")' for a, b, beta in c.edges
    )
    return f"vertices = [{verts}]\nedges = [{edges}]\n"


def parse_complex(text):
    """Read the complex file format produced by render_complex."""
    import re

    data = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        m = re.match(r"^(vertices|edges)\s*=\s*\[(.*)\]$", stripped)
        if not m:
            raise ParseError("expected `vertices = [...]` or `edges = [...]`", lineno, 1)
        data[m.group(1)] = (m.group(2), lineno)
    if "vertices" not in data or "edges" not in data:
        raise ParseError("complex file needs `vertices` and `edges` lines", 1, 1)
    vtext, vline = data["vertices"]
    vertices = tuple(v.strip() for v in vtext.split(",") if v.strip())
    etext, eline = data["edges"]
    edges = []
    for m in re.finditer(r"\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*,\s*\"(-?\d+)(?:/(\d+))?\"\s*\)", etext):
        a, b, num, den = m.group(1), m.group(2), int(m.group(3)), m.group(4)
        edges.append((a, b, Fraction(num, int(den) if den else 1)))
    stripped = re.sub(r"\([^()]*\)", "", etext).replace(",", "").strip()
    if stripped:
        raise ParseError(f"malformed edge list near {stripped[:20]!r}", eline, 1)
    return HolderComplex(vertices, tuple(edges))
