"""End-to-end pipeline: map germ -> Canonical Hölder Complex -> inner
bi-Lipschitz equivalence verdict.

The source circle is cut into sectors by the double-point rays; each
sector becomes an edge of the link graph joining the pairing classes of
its boundary rays, with the sector's Hölder exponent as the beta label.
The exponent of a sector is the minimum pairwise contact order of the
image arcs of its closed slope interval, which for homogeneous corank-1
germs reduces to a closed-form rule: 1 against vertical directions, d2
when the p-profile separates arcs, d3 when only the q-profile does.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import HolderComplex, combinatorially_equivalent, multigraph_isomorphism, simplify
from .contact import ContactMatrix, Verdict, contact_matrix, contact_matrices_equivalent
from .errors import ValidationError
from .germ import (
    CurveGerm,
    Ray,
    RaySystem,
    double_rays,
    image_double_curve,
    ray_order_key,
)


@dataclass(frozen=True)
class Sector:
    """An arc of the source circle between two cyclically consecutive rays."""

    start_ray: Ray = None
    end_ray: Ray = None
    full_circle: bool = False
    contains_vertical: bool = False  # vertical direction in the interior
    contains_positive_x: bool = False
    contains_negative_x: bool = False

    @property
    def has_vertical_boundary(self):
        return bool(
            (self.start_ray is not None and self.start_ray.is_vertical)
            or (self.end_ray is not None and self.end_ray.is_vertical)
        )

    def touches_vertical(self):
        """Vertical direction in the closed sector (interior or boundary)."""
        return self.full_circle or self.contains_vertical or self.has_vertical_boundary


def _between_cyclic(start_key, end_key, probe_key):
    """Strict cyclic betweenness start < probe < end on the circle."""
    if start_key < end_key:
        return start_key < probe_key and probe_key < end_key
    return probe_key > start_key or probe_key < end_key


def sector_decomposition(rs):
    """Cut the source circle along the rays of a RaySystem."""
    if rs.is_empty:
        return [
            Sector(
                full_circle=True,
                contains_vertical=True,
                contains_positive_x=True,
                contains_negative_x=True,
            )
        ]
    keys = [ray_order_key(r) for r in rs.rays]
    vertical_up = ray_order_key(Ray(slope=None, sign=1))
    vertical_down = ray_order_key(Ray(slope=None, sign=-1))
    positive_x = ray_order_key(Ray(slope=_ZERO_SLOPE, sign=1))
    negative_x = ray_order_key(Ray(slope=_ZERO_SLOPE, sign=-1))
    sectors = []
    n = len(rs.rays)
    for i in range(n):
        j = (i + 1) % n
        start, end = keys[i], keys[j]
        if n == 1:
            # a single ray cannot occur: rays come in pairs; guard anyway
            contains = lambda probe: not (probe == start)  # noqa: E731
        else:
            contains = lambda probe: _between_cyclic(start, end, probe)  # noqa: E731
        sectors.append(
            Sector(
                start_ray=rs.rays[i],
                end_ray=rs.rays[j],
                contains_vertical=contains(vertical_up) or contains(vertical_down),
                contains_positive_x=contains(positive_x)
                or start == positive_x
                or end == positive_x,
                contains_negative_x=contains(negative_x)
                or start == negative_x
                or end == negative_x,
            )
        )
    return sectors


class _ZeroSlope:
    """Exact stand-in for slope 0 in circle-position probes."""

    is_rational = True

    def as_fraction(self):
        return Fraction(0)

    def to_float(self):
        return 0.0

    def __lt__(self, other):
        return Fraction(0) < _as_cmp(other)

    def __gt__(self, other):
        return Fraction(0) > _as_cmp(other)

    def __eq__(self, other):
        return Fraction(0) == _as_cmp(other)

    def __le__(self, other):
        return not self.__gt__(other)

    def __ge__(self, other):
        return not self.__lt__(other)

    def __hash__(self):
        return hash(Fraction(0))


def _as_cmp(other):
    if isinstance(other, _ZeroSlope):
        return Fraction(0)
    return other


_ZERO_SLOPE = _ZeroSlope()


def sector_exponent(f, sec):
    """Hölder exponent of the surface piece over a sector.

    Minimum pairwise contact of the image arcs of the closed sector:
    exactly 1 whenever the closed sector meets a vertical direction (the
    first coordinates then separate at order r); otherwise d2 or d3
    according to which profile separates arcs.
    """
    if sec.touches_vertical():
        return Fraction(1)
    p_profile = f.p.substitute({"x": Fraction(1)})
    if p_profile.depends_on("y"):
        return Fraction(f.d2)
    q_profile = f.q.substitute({"x": Fraction(1)})
    if q_profile.depends_on("y"):
        return Fraction(f.d3)
    raise ValidationError(
        "sector collapses to a curve: finite determinacy violated"
    )


@dataclass(frozen=True)
class GermComplexReport:
    """Everything the classifier derives from one germ."""

    germ: object
    ray_system: RaySystem
    sectors: tuple
    sector_betas: tuple
    link_graph: HolderComplex
    canonical: HolderComplex
    double_curve: CurveGerm
    contact: ContactMatrix


def build_holder_complex(f):
    """Assemble the link graph of a germ and its canonical simplification."""
    rs = double_rays(f)
    sectors = tuple(sector_decomposition(rs))
    betas = tuple(sector_exponent(f, sec) for sec in sectors)

    if rs.is_empty:
        # the link is an embedded circle: one loop vertex by the pure-cycle
        # convention
        link = HolderComplex(("v0",), (("v0", "v0", betas[0]),))
    else:
        classes = rs.pairing_classes()
        class_of = {}
        for cls_index, (i, j) in enumerate(classes):
            class_of[i] = cls_index
            class_of[j] = cls_index
        names = tuple(f"v{k}" for k in range(len(classes)))
        edges = []
        n = len(rs.rays)
        for idx, beta in enumerate(betas):
            a = names[class_of[idx]]
            b = names[class_of[(idx + 1) % n]]
            edges.append((a, b, beta))
        link = HolderComplex(names, tuple(edges))

    canonical = simplify(link)
    curve = image_double_curve(f, rs)
    contact = contact_matrix(curve)
    return GermComplexReport(
        germ=f,
        ray_system=rs,
        sectors=sectors,
        sector_betas=betas,
        link_graph=link,
        canonical=canonical,
        double_curve=curve,
        contact=contact,
    )


@dataclass(frozen=True)
class ClassificationReport:
    """Verdict of classify_inner plus the decomposition sub-verdicts."""

    verdict: Verdict
    report_f: GermComplexReport
    report_g: GermComplexReport
    curves_verdict: Verdict
    link_graphs_isomorphic: bool


def classify_inner(f, g):
    """Decide inner bi-Lipschitz equivalence of the images of two germs by
    comparing their Canonical Hölder Complexes."""
    rf = build_holder_complex(f)
    rg = build_holder_complex(g)
    verdict = combinatorially_equivalent(rf.canonical, rg.canonical)
    curves_verdict = contact_matrices_equivalent(rf.contact, rg.contact)
    link_iso = multigraph_isomorphism(rf.link_graph, rg.link_graph) is not None
    return ClassificationReport(
        verdict=verdict,
        report_f=rf,
        report_g=rg,
        curves_verdict=curves_verdict,
        link_graphs_isomorphic=link_iso,
    )
