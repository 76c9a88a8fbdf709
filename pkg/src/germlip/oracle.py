"""Floating-point cross-checks for the exact pipeline.

Everything here is deliberately independent of the symbolic machinery:
contact orders come from log-log regression on sampled distances, inner
metrics from shortest paths on triangle meshes, and links from
predictor-corrector tracing on a sphere. Agreement with the exact
answers is the evidence; nothing here feeds back into a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import sympy as sp
from scipy.optimize import brentq
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import ValidationError

DEFAULT_RADII = (1e-4, 1e-1, 16)


def default_radii(lo=None, hi=None, count=None):
    """Strictly decreasing logarithmic radius grid."""
    lo = DEFAULT_RADII[0] if lo is None else lo
    hi = DEFAULT_RADII[1] if hi is None else hi
    count = DEFAULT_RADII[2] if count is None else count
    if not (0 < lo < hi):
        raise ValidationError("radius grid needs 0 < lo < hi")
    if count < 4:
        raise ValidationError("radius grid needs at least 4 radii")
    if hi / lo < 100 * (1 - 1e-12):
        raise ValidationError("radius grid must span at least 2 decades")
    return np.geomspace(hi, lo, count)


@dataclass(frozen=True)
class SampledArc:
    """An arc sampled at prescribed distances from the origin."""

    points: np.ndarray  # shape (n, 3)
    radii: np.ndarray  # shape (n,), strictly decreasing

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        rad = np.asarray(self.radii, dtype=float)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "radii", rad)
        if len(pts) != len(rad):
            raise ValidationError("points and radii must align")
        if np.any(np.diff(rad) >= 0):
            raise ValidationError("radii must be strictly decreasing")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - rad) > 1e-9 * rad):
            raise ValidationError("each point must sit on its sphere")


def sample_curve(point_of_t, radii, t_guess=None):
    """Sample a parametrized curve at exact distances from the origin.

    Solves |gamma(t)| = r per radius with a bracketing root finder, so
    the sphere invariant of SampledArc holds to machine precision.
    """
    radii = np.asarray(radii, dtype=float)
    pts = []
    for r in radii:
        t0 = r if t_guess is None else t_guess(r)

        def gap(t):
            return np.linalg.norm(point_of_t(t)) - r

        lo, hi = t0, t0
        while gap(lo) > 0:
            lo /= 2
            if lo < 1e-300:
                raise ValidationError("cannot bracket the sphere crossing")
        while gap(hi) < 0:
            hi *= 2
            if hi > 1e300:
                raise ValidationError("cannot bracket the sphere crossing")
        t = brentq(gap, lo, hi, xtol=1e-15, rtol=1e-14)
        p = np.asarray(point_of_t(t), dtype=float)
        n = np.linalg.norm(p)
        pts.append(p * (r / n))
    return SampledArc(np.array(pts), radii)


def sample_puiseux_arc(arc, radii=None):
    if radii is None:
        radii = default_radii()
    return sample_curve(lambda t: arc.evaluate_float(t), radii)


def sample_germ_direction(f, direction, radii=None):
    """Image arc of a source ray, sampled by distance from the origin."""
    if radii is None:
        radii = default_radii()
    cx, cy = direction
    return sample_curve(lambda t: f.map_point(t * cx, t * cy), radii)


@dataclass(frozen=True)
class ContactEstimate:
    value: float
    residual: float
    infinite: bool = False

    def __float__(self):
        return math.inf if self.infinite else self.value


def estimate_contact(a, b):
    """Least-squares slope of log distance versus log radius.

    The largest decade of radii is dropped when the first fit's residual
    exceeds 0.05, to shed curvature from higher-order terms.
    """
    if len(a.radii) != len(b.radii) or np.any(
        np.abs(a.radii - b.radii) > 1e-12 * a.radii
    ):
        raise ValidationError("arcs must share a radius grid")
    if len(a.radii) < 4 or a.radii[0] / a.radii[-1] < 100 * (1 - 1e-12):
        raise ValidationError("need at least 4 radii spanning 2 decades")
    dists = np.linalg.norm(a.points - b.points, axis=1)
    if np.all(dists < 1e-12):
        return ContactEstimate(math.inf, 0.0, infinite=True)
    keep = dists > 1e-300
    slope, residual = _loglog_fit(a.radii[keep], dists[keep])
    if residual > 0.05:
        cut = a.radii <= a.radii[0] / 10 * (1 + 1e-12)
        keep2 = keep & cut
        if keep2.sum() >= 4:
            slope, residual = _loglog_fit(a.radii[keep2], dists[keep2])
    return ContactEstimate(slope, residual)


def _loglog_fit(radii, dists):
    lr = np.log(radii)
    ld = np.log(dists)
    coeffs, res = np.polyfit(lr, ld, 1, full=True)[:2]
    rms = math.sqrt(res[0] / len(lr)) if len(res) else 0.0
    return float(coeffs[0]), rms


def _ray_angle(ray):
    dx, dy = ray.direction_float()
    return math.atan2(dy, dx)


def sector_directions(sec, samples):
    """Angular samples of a closed sector, boundary included."""
    if samples < 2:
        raise ValidationError("need ≥ 2 directions")
    if sec.full_circle:
        angles = [2 * math.pi * k / samples for k in range(samples)]
    else:
        a0 = _ray_angle(sec.start_ray)
        a1 = _ray_angle(sec.end_ray)
        if a1 <= a0:
            a1 += 2 * math.pi
        angles = [a0 + (a1 - a0) * k / (samples - 1) for k in range(samples)]
    return [(math.cos(a), math.sin(a)) for a in angles]


def estimate_sector_exponent(f, sec, samples=8, radii=None):
    """Minimum pairwise contact estimate over sampled sector directions."""
    dirs = sector_directions(sec, samples)
    arcs = [sample_germ_direction(f, d, radii) for d in dirs]
    best = math.inf
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            est = estimate_contact(arcs[i], arcs[j])
            if not est.infinite:
                best = min(best, est.value)
    if best == math.inf:
        raise ValidationError("all sampled directions collapsed to one arc")
    return best


@dataclass(frozen=True)
class TriMesh:
    """Triangulated surface patch with its source parameters."""

    vertices: np.ndarray  # (n, 3)
    triangles: np.ndarray  # (m, 3) int
    source_params: np.ndarray  # (n, 2)

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, float))
        object.__setattr__(self, "triangles", np.asarray(self.triangles, int))
        object.__setattr__(self, "source_params", np.asarray(self.source_params, float))

    def edges(self):
        seen = set()
        for tri in self.triangles:
            for k in range(3):
                a, b = int(tri[k]), int(tri[(k + 1) % 3])
                seen.add((min(a, b), max(a, b)))
        return sorted(seen)


def _quad_mesh(params_u, params_v, embed, wrap_v=False, centers=True):
    """Tensor-grid mesh, one quad cell per grid square.

    With centers=True each cell gets a center vertex and 4 triangles,
    which keeps edge paths close to straight lines on near-square cells.
    Strongly anisotropic cells should use the plain diagonal split
    instead: a center vertex in a skinny cell creates 2-hop detours far
    longer than the straight distance.
    """
    nu, nv = len(params_u), len(params_v)
    ncols = nv - 1 if wrap_v else nv
    verts, params = [], []
    index = {}
    for i, u in enumerate(params_u):
        for j in range(ncols):
            v = params_v[j]
            index[i, j] = len(verts)
            verts.append(embed(u, v))
            params.append((u, v))
    tris = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            j1 = (j + 1) % ncols if wrap_v else j + 1
            a = index[i, j]
            b = index[i, j1]
            c = index[i + 1, j1]
            d = index[i + 1, j]
            if centers:
                uc = 0.5 * (params_u[i] + params_u[i + 1])
                vc = 0.5 * (params_v[j] + params_v[j + 1])
                center = len(verts)
                verts.append(embed(uc, vc))
                params.append((uc, vc))
                tris.extend(
                    [(a, b, center), (b, c, center), (c, d, center), (d, a, center)]
                )
            else:
                tris.extend([(a, b, c), (a, c, d)])
    return TriMesh(np.array(verts), np.array(tris), np.array(params))


def mesh_flat_disk(radius=1.0, rings=20, wedges=64):
    """Flat round disk in the z = 0 plane: polar rings plus a center fan.

    Ring edges follow the rim, so the worst chords there (tangential
    ones, whose sagitta is below one cell for any polygonal rim) ride
    the rings with almost no overshoot; a triangle fan covers the
    center. Shortest paths at a few cells of range then stay within
    roughly ten percent of straight-line distance.
    """
    rs = np.linspace(radius / rings, radius, rings)
    thetas = np.linspace(0.0, 2 * math.pi, wedges + 1)
    annulus = _quad_mesh(
        rs,
        thetas,
        lambda r, th: (r * math.cos(th), r * math.sin(th), 0.0),
        wrap_v=True,
    )
    center = len(annulus.vertices)
    verts = np.vstack([annulus.vertices, [[0.0, 0.0, 0.0]]])
    params = np.vstack([annulus.source_params, [[0.0, 0.0]]])
    fan = [(center, j, (j + 1) % wedges) for j in range(wedges)]
    tris = np.vstack([annulus.triangles, fan])
    return TriMesh(verts, tris, params)


def mesh_holder_triangle(beta, n=16, x_min=1e-2):
    """The standard region 0 <= y <= x**beta, x_min <= x <= 1, in z = 0."""
    xs = np.geomspace(x_min, 1.0, n + 1)
    us = np.linspace(0.0, 1.0, n + 1)
    b = float(beta)
    return _quad_mesh(xs, us, lambda x, u: (x, u * x**b, 0.0), centers=False)


def mesh_germ_image(f, r_min=1e-2, r_max=0.5, rings=24, wedges=48):
    """Image of a source annulus under a map germ, as a triangle mesh."""
    rs = np.geomspace(r_min, r_max, rings + 1)
    thetas = np.linspace(0.0, 2 * math.pi, wedges + 1)
    return _quad_mesh(
        rs,
        thetas,
        lambda r, th: f.map_point(r * math.cos(th), r * math.sin(th)),
        wrap_v=True,
        centers=False,
    )


def mesh_two_sheet_pinch(n=24, extent=1.0):
    """Two sheets over the same square, touching only at the origin.

    The lower sheet is flat, the upper is the paraboloid z = x^2 + y^2:
    outer distance between matching points vanishes quadratically while
    every inner path has to pass through the shared corner vertex.
    """
    ticks = np.linspace(0.0, extent, n + 1)
    flat = _quad_mesh(ticks, ticks, lambda x, y: (x, y, 0.0), centers=False)
    bump = _quad_mesh(
        ticks, ticks, lambda x, y: (x, y, x * x + y * y), centers=False
    )
    # merge, identifying the two copies of the origin vertex
    origin_flat = int(np.argmin(np.linalg.norm(flat.vertices, axis=1)))
    origin_bump = int(np.argmin(np.linalg.norm(bump.vertices, axis=1)))
    offset = len(flat.vertices)

    def remap(idx):
        return origin_flat if idx == origin_bump else offset + idx

    tris2 = np.vectorize(remap)(bump.triangles)
    verts = np.vstack([flat.vertices, bump.vertices])
    params = np.vstack([flat.source_params, bump.source_params])
    tris = np.vstack([flat.triangles, tris2])
    return TriMesh(verts, tris, params)


@dataclass(frozen=True)
class LneEstimate:
    value: float
    diverged: bool

    def __float__(self):
        return self.value


def lne_estimate(mesh, pairs=400, rng=None, divergence_threshold=8.0, min_hops=12):
    """Max sampled ratio of edge-path distance to Euclidean distance.

    Pairs whose shortest path uses fewer than min_hops edges are
    skipped: at that scale the ratio measures the triangulation, not the
    surface. A genuine failure of normal embedding shows up as a
    many-edge inner path over a short Euclidean gap, which survives the
    floor.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    n = len(mesh.vertices)
    edges = mesh.edges()
    rows = np.array([e[0] for e in edges])
    cols = np.array([e[1] for e in edges])
    lengths = np.linalg.norm(mesh.vertices[rows] - mesh.vertices[cols], axis=1)
    graph = coo_matrix((lengths, (rows, cols)), shape=(n, n))
    hop_graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    valid = np.unique(mesh.triangles)
    sources = np.unique(rng.choice(valid, size=min(pairs, len(valid)), replace=False))
    dist = dijkstra(graph, directed=False, indices=sources)
    hops = dijkstra(hop_graph, directed=False, indices=sources)
    worst = 0.0
    for k, s in enumerate(sources):
        d_in = dist[k, valid]
        if np.isinf(d_in).any():
            raise ValidationError("disconnected mesh")
        d_out = np.linalg.norm(mesh.vertices[valid] - mesh.vertices[s], axis=1)
        keep = (hops[k, valid] >= min_hops) & (d_out > 1e-12)
        if keep.any():
            worst = max(worst, float(np.max(d_in[keep] / d_out[keep])))
    return LneEstimate(worst, worst > divergence_threshold)


@dataclass(frozen=True)
class LinkPolyline:
    """Closed polylines on the sphere of radius R."""

    components: tuple  # tuple of (n_i, 3) arrays
    radius: float

    def __post_init__(self):
        comps = tuple(np.asarray(c, float) for c in self.components)
        object.__setattr__(self, "components", comps)
        for c in comps:
            norms = np.linalg.norm(c, axis=1)
            if np.any(np.abs(norms - self.radius) > 1e-6 * self.radius):
                raise ValidationError("link points must lie on the sphere")

    def total_points(self):
        return sum(len(c) for c in self.components)


class _Implicit:
    def __init__(self, phi, R):
        expr = phi.to_sympy()
        xs = sp.symbols("x y z")
        self.f = sp.lambdify(xs, expr, "numpy")
        self.grad = [sp.lambdify(xs, sp.diff(expr, v), "numpy") for v in xs]
        self.R = R

    def value(self, v):
        return float(self.f(*v))

    def gradient(self, v):
        return np.array([float(g(*v)) for g in self.grad])

    def tangent(self, v):
        t = np.cross(self.gradient(v), v)
        return t

    def correct(self, v, max_iter=25):
        """Newton steps back onto phi = 0 and |v| = R simultaneously."""
        v = np.asarray(v, float)
        for _ in range(max_iter):
            res = np.array([self.value(v), 0.5 * (v @ v - self.R**2)])
            if abs(res[0]) < 1e-12 * max(1.0, self.R**2) and abs(res[1]) < 1e-13 * self.R**2:
                return v
            jac = np.vstack([self.gradient(v), v])
            step, *_ = np.linalg.lstsq(jac, res, rcond=None)
            v = v - step
            if not np.isfinite(v).all() or np.linalg.norm(v) > 10 * self.R:
                break
        raise ValidationError(
            f"corrector diverged near ({v[0]:.6g}, {v[1]:.6g}, {v[2]:.6g})"
        )


def trace_link(phi, R=1.0, step=0.02):
    """Trace {phi = 0} on the sphere of radius R, one polyline per component."""
    if not phi.is_homogeneous():
        raise ValidationError("phi must be homogeneous")
    surf = _Implicit(phi, R)
    seeds = _link_seeds(surf)
    if not seeds:
        raise ValidationError("empty link")
    components = []
    for seed in seeds:
        if any(
            np.min(np.linalg.norm(comp - seed, axis=1)) < 5 * step * R
            for comp in components
        ):
            continue
        components.append(_trace_component(surf, seed, step * R))
    return LinkPolyline(tuple(components), R)


def _link_seeds(surf):
    R = surf.R
    n_th, n_ph = 40, 20
    grid = np.empty((n_ph + 1, n_th, 3))
    vals = np.empty((n_ph + 1, n_th))
    for j in range(n_ph + 1):
        ph = math.pi * j / n_ph
        for i in range(n_th):
            th = 2 * math.pi * i / n_th
            grid[j, i] = R * np.array(
                [math.sin(ph) * math.cos(th), math.sin(ph) * math.sin(th), math.cos(ph)]
            )
            vals[j, i] = surf.value(grid[j, i])
    seeds = []

    def try_edge(a, b):
        va, vb = vals[a], vals[b]
        if va == 0.0 or (va < 0) != (vb < 0):
            mid = 0.5 * (grid[a] + grid[b])
            mid *= R / np.linalg.norm(mid)
            try:
                seeds.append(surf.correct(mid))
            except ValidationError:
                pass

    for j in range(n_ph + 1):
        for i in range(n_th):
            try_edge((j, i), (j, (i + 1) % n_th))
            if j < n_ph:
                try_edge((j, i), (j + 1, i))
    return seeds


def _trace_component(surf, seed, h):
    pts = [seed]
    v = seed
    for _ in range(200000):
        t = surf.tangent(v)
        nt = np.linalg.norm(t)
        if nt < 1e-10 * surf.R**2:
            raise ValidationError(
                f"corrector diverged near ({v[0]:.6g}, {v[1]:.6g}, {v[2]:.6g})"
            )
        v = surf.correct(v + h * t / nt)
        if len(pts) > 3 and np.linalg.norm(v - seed) < 0.75 * h:
            return np.array(pts)
        pts.append(v)
    raise ValidationError("link component failed to close")


def _component_arclength(comp):
    closed = np.vstack([comp, comp[:1]])
    seg = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _point_at_fraction(comp, frac):
    cum = _component_arclength(comp)
    total = cum[-1]
    s = (frac % 1.0) * total
    k = int(np.searchsorted(cum, s, side="right")) - 1
    k = min(k, len(comp) - 1)
    nxt = comp[(k + 1) % len(comp)]
    seg = cum[k + 1] - cum[k]
    w = 0.0 if seg == 0 else (s - cum[k]) / seg
    return (1 - w) * comp[k] + w * nxt


def _fraction_of_point(comp, p):
    cum = _component_arclength(comp)
    a = comp
    b = np.roll(comp, -1, axis=0)
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    w = np.einsum("ij,ij->i", p - a, ab) / np.where(denom == 0, 1.0, denom)
    w = np.clip(np.where(denom == 0, 0.0, w), 0.0, 1.0)
    proj = a + w[:, None] * ab
    d = np.linalg.norm(p - proj, axis=1)
    k = int(np.argmin(d))
    s = cum[k] + w[k] * (cum[k + 1] - cum[k])
    return s / cum[-1], float(d[k])


@dataclass(frozen=True)
class Correspondence:
    """Piecewise-linear map between two links, component by component."""

    source: LinkPolyline
    target: LinkPolyline
    matching: tuple = ()  # index pairs; defaults to identity order

    def __post_init__(self):
        if not self.matching:
            if len(self.source.components) != len(self.target.components):
                raise ValidationError("component counts differ; supply a matching")
            object.__setattr__(
                self, "matching", tuple((i, i) for i in range(len(self.source.components)))
            )

    def __call__(self, p):
        """Map a point on (or near) the source link into the target link."""
        best = None
        for i, j in self.matching:
            frac, dist = _fraction_of_point(self.source.components[i], p)
            if best is None or dist < best[0]:
                best = (dist, frac, j)
        dist, frac, j = best
        q = _point_at_fraction(self.target.components[j], frac)
        return q * (self.target.radius / np.linalg.norm(q))

    def off_link_distance(self, p):
        return min(
            _fraction_of_point(self.source.components[i], p)[1]
            for i, _ in self.matching
        )

    def inverse(self):
        """The reverse correspondence (exact up to PL interpolation)."""
        return Correspondence(
            self.target, self.source, tuple((j, i) for i, j in self.matching)
        )


def dilation_correspondence(link, R):
    """The identity link map onto the same link scaled to radius R."""
    scaled = LinkPolyline(tuple(c * (R / link.radius) for c in link.components), R)
    return Correspondence(link, scaled)


def rotation_correspondence(link, rotation, R=None):
    R = link.radius if R is None else R
    scale = R / link.radius
    rotated = LinkPolyline(
        tuple((c @ rotation.T) * scale for c in link.components), R
    )
    return Correspondence(link, rotated)


def radial_extension(correspondence, p, tolerance=None):
    """Extend a link correspondence sphere by sphere: H(p) has |H(p)| = |p|."""
    p = np.asarray(p, float)
    norm = np.linalg.norm(p)
    if norm == 0.0:
        return np.zeros(3)
    unit = p * (correspondence.source.radius / norm)
    if tolerance is None:
        tolerance = 0.05 * correspondence.source.radius
    if correspondence.off_link_distance(unit) > tolerance:
        raise ValidationError("point is off the traced link")
    w = correspondence(unit)
    return w * (norm / np.linalg.norm(w))


@dataclass(frozen=True)
class LipschitzEstimate:
    c_emp: float
    c_link: float
    bound_ok: bool


def _sample_surface_points(link, rng, count, decades=(1e-2, 1.0)):
    pts = []
    lo, hi = decades
    for _ in range(count):
        comp = link.components[rng.integers(len(link.components))]
        u = _point_at_fraction(comp, float(rng.random()))
        r = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
        pts.append(u * (r / np.linalg.norm(u)))
    return pts


def lipschitz_estimate(correspondence, pairs=1500, rng=None):
    """Empirical Lipschitz data for the radial extension of a link map.

    Checks the bound C = max(1 + C_link / R, 2) with 5 percent slack,
    where C_link is the empirical constant of the link correspondence
    itself and R the target sphere radius.
    """
    rng = np.random.default_rng(1) if rng is None else rng
    src = correspondence.source
    samples = _sample_surface_points(src, rng, pairs)
    images = [radial_extension(correspondence, p) for p in samples]
    c_emp = 0.0
    for _ in range(pairs):
        i, j = rng.integers(len(samples)), rng.integers(len(samples))
        d = np.linalg.norm(samples[i] - samples[j])
        if d < 1e-12:
            continue
        c_emp = max(c_emp, np.linalg.norm(images[i] - images[j]) / d)
    c_link = 0.0
    link_pts = [
        _point_at_fraction(src.components[k % len(src.components)], float(rng.random()))
        for k in range(400)
    ]
    link_pts = [u * (src.radius / np.linalg.norm(u)) for u in link_pts]
    link_images = [correspondence(u) for u in link_pts]
    for _ in range(pairs):
        i, j = rng.integers(len(link_pts)), rng.integers(len(link_pts))
        d = np.linalg.norm(link_pts[i] - link_pts[j])
        if d < 1e-12:
            continue
        c_link = max(c_link, np.linalg.norm(link_images[i] - link_images[j]) / d)
    bound = max(1.0 + c_link / correspondence.target.radius, 2.0)
    return LipschitzEstimate(c_emp, c_link, c_emp <= bound * 1.05)


def plot_link_svg(link, path):
    """Orthographic projection of the link polylines, written as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4, 4))
    for comp in link.components:
        closed = np.vstack([comp, comp[:1]])
        ax.plot(closed[:, 0], closed[:, 1], linewidth=1.0)
    ax.set_aspect("equal")
    ax.set_title(f"link on sphere R={link.radius:g}")
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_contact_svg(a, b, path):
    """Log-log plot of inter-arc distance against radius, written as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    dists = np.linalg.norm(a.points - b.points, axis=1)
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.loglog(a.radii, dists, marker="o", linewidth=1.0)
    ax.set_xlabel("radius")
    ax.set_ylabel("distance")
    fig.savefig(path, format="svg")
    plt.close(fig)
