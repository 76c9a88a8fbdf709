"""Command-line front end.

Exit codes: 0 for success or a positive verdict, 1 for a negative
verdict (or an oracle discrepancy), 2 for any error. Reports print
exact data (defining polynomials, isolating intervals, rationals)
alongside 12-digit decimals that are always annotated "approx".
"""

from __future__ import annotations

import argparse
import json
import sys

from . import oracle
from .classifier import build_holder_complex, classify_inner
from .complexes import canonical_form, render_complex
from .contact import INFINITY, curves_outer_equivalent
from .errors import GermlipError, ParseError
from .germ import parse_germ
from .parser import parse_keyed_file, parse_polynomial


def _approx(x):
    return f"{float(x):.12g} (approx)"


def _load_germ(path):
    with open(path, encoding="utf-8") as fh:
        return parse_germ(fh.read())


def _load_phi(path):
    with open(path, encoding="utf-8") as fh:
        entries = parse_keyed_file(fh.read(), required=("phi",))
    raw, line = entries["phi"]
    return parse_polynomial(raw, ("x", "y", "z"), line=line)


def _ray_report(ray):
    info = {"position": ray.describe()}
    if not ray.is_vertical:
        info["defining_polynomial"] = str(ray.slope.defining_poly)
        info["isolating_interval"] = [str(ray.slope.lo), str(ray.slope.hi)]
        info["slope_decimal"] = _approx(ray.slope.to_float())
    return info


def run_dpoints(args):
    f = _load_germ(args.germ)
    report = build_holder_complex(f)
    rs = report.ray_system
    data = {
        "germ": f.name,
        "rays": [_ray_report(r) for r in rs.rays],
        "pairing": [list(pair) for pair in rs.pairing_classes()],
        "vertical_in_double_set": any(r.is_vertical for r in rs.rays),
        "branches": [
            {
                "label": label,
                "parametrization": [c.render() for c in branch.coords],
            }
            for branch, label in zip(
                report.double_curve.branches, report.double_curve.labels
            )
        ],
    }
    lines = [f"germ: {f.name}" if f.name else "germ: (unnamed)"]
    lines.append(f"double-point rays: {len(rs.rays)}")
    for i, r in enumerate(rs.rays):
        entry = _ray_report(r)
        lines.append(f"  ray {i}: {entry['position']}")
        if not r.is_vertical:
            lines.append(f"    root of {entry['defining_polynomial']}")
            lo, hi = entry["isolating_interval"]
            lines.append(f"    in [{lo}, {hi}], slope = {entry['slope_decimal']}")
    lines.append(
        "vertical line in double-point set: "
        + ("yes" if data["vertical_in_double_set"] else "no")
    )
    lines.append(f"pairing classes: {data['pairing']}")
    lines.append("image double-curve branches:")
    for b in data["branches"]:
        lines.append(f"  {b['label']}:")
        for name, series in zip(("x", "y", "z"), b["parametrization"]):
            lines.append(f"    {name}(t) = {series}")
    return 0, lines, data


def run_complex(args):
    f = _load_germ(args.germ)
    report = build_holder_complex(f)
    data = {
        "germ": f.name,
        "link_graph": render_complex(report.link_graph),
        "sector_exponents": [str(b) for b in report.sector_betas],
    }
    lines = ["link graph:", render_complex(report.link_graph)]
    lines.append(f"sector exponents: {data['sector_exponents']}")
    if args.canonical:
        data["canonical"] = render_complex(report.canonical)
        data["canonical_form"] = canonical_form(report.canonical)
        lines += ["canonical complex:", data["canonical"]]
        lines.append(f"canonical form: {data['canonical_form']}")
    return 0, lines, data


def run_classify(args):
    f = _load_germ(args.germ_f)
    g = _load_germ(args.germ_g)
    rep = classify_inner(f, g)
    cf = canonical_form(rep.report_f.canonical)
    cg = canonical_form(rep.report_g.canonical)
    data = {
        "canonical_f": cf,
        "canonical_g": cg,
        "equivalent": bool(rep.verdict),
        "certificate": rep.verdict.certificate if rep.verdict else None,
        "distinguishing": rep.verdict.distinguishing,
        "double_curves_equivalent": bool(rep.curves_verdict),
        "link_graphs_isomorphic": rep.link_graphs_isomorphic,
        "contact_matrix_f": rep.report_f.contact.render(),
        "contact_matrix_g": rep.report_g.contact.render(),
    }
    lines = [f"canonical complex of {f.name or 'f'}: {cf}"]
    lines.append(f"canonical complex of {g.name or 'g'}: {cg}")
    if rep.verdict:
        lines.append("verdict: inner bi-Lipschitz equivalent")
        lines.append(f"  vertex mapping: {rep.verdict.certificate}")
    else:
        lines.append("verdict: not equivalent")
        lines.append(f"  distinguishing invariant: {rep.verdict.distinguishing}")
    lines.append(
        "double-curve contact matrices equivalent: "
        + ("yes" if rep.curves_verdict else "no")
    )
    lines.append(
        "link graphs isomorphic: " + ("yes" if rep.link_graphs_isomorphic else "no")
    )
    return (0 if rep.verdict else 1), lines, data


def run_curves(args):
    f = _load_germ(args.germ_f)
    g = _load_germ(args.germ_g)
    cf = build_holder_complex(f).double_curve
    cg = build_holder_complex(g).double_curve
    verdict = curves_outer_equivalent(cf, cg)
    data = {
        "equivalent": bool(verdict),
        "certificate": list(verdict.certificate) if verdict.certificate else None,
        "distinguishing": verdict.distinguishing,
    }
    lines = [
        "double curves outer bi-Lipschitz equivalent: "
        + ("yes" if verdict else "no")
    ]
    if verdict.certificate:
        lines.append(f"  branch matching: {list(verdict.certificate)}")
    if verdict.distinguishing:
        lines.append(f"  distinguishing invariant: {verdict.distinguishing}")
    return (0 if verdict else 1), lines, data


def run_contact(args):
    f = _load_germ(args.germ)
    report = build_holder_complex(f)
    m = report.contact
    labels = report.double_curve.labels
    data = {
        "labels": list(labels),
        "matrix": [[str(e) for e in row] for row in m.entries],
    }
    lines = ["branches:"]
    lines += [f"  {i}: {lab}" for i, lab in enumerate(labels)]
    lines.append("contact matrix:")
    lines += ["  " + " ".join(str(e) for e in row) for row in m.entries]
    return 0, lines, data


def _radii_from_args(args):
    if args.radii is None:
        return oracle.default_radii()
    lo, hi, count = args.radii.split(",")
    return oracle.default_radii(float(lo), float(hi), int(count))


def run_oracle_contact(args):
    f = _load_germ(args.germ)
    report = build_holder_complex(f)
    radii = _radii_from_args(args)
    branches = report.double_curve.branches
    sampled = [oracle.sample_puiseux_arc(b, radii) for b in branches]
    rows = []
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            exact = report.contact.entries[i][j]
            est = oracle.estimate_contact(sampled[i], sampled[j])
            rows.append(
                {
                    "pair": [i, j],
                    "exact": str(exact),
                    "estimate": "inf" if est.infinite else _approx(est.value),
                    "residual": _approx(est.residual),
                }
            )
            if args.plot:
                oracle.plot_contact_svg(sampled[i], sampled[j], f"{args.plot}-{i}-{j}.svg")
    lines = ["contact estimates (exact vs numeric):"]
    for r in rows:
        lines.append(
            f"  branches {r['pair'][0]},{r['pair'][1]}: exact {r['exact']}, "
            f"estimate {r['estimate']}, residual {r['residual']}"
        )
    if not rows:
        lines.append("  (fewer than 2 branches)")
    return 0, lines, {"pairs": rows}


def run_oracle_lne(args):
    f = _load_germ(args.germ)
    mesh = oracle.mesh_germ_image(f)
    est = oracle.lne_estimate(mesh, pairs=args.samples or 400)
    data = {"estimate": _approx(est.value), "diverged": est.diverged}
    lines = [f"inner/outer distance ratio estimate: {_approx(est.value)}"]
    if est.diverged:
        lines.append(
            "flag: ratio above divergence threshold (the mesh covers the"
            " parametrized annulus, so sheets meeting along a double curve"
            " read as a pinch)"
        )
    return 0, lines, data


def run_trace_link(args):
    phi = _load_phi(args.phi)
    link = oracle.trace_link(phi, R=1.0)
    data = {
        "components": len(link.components),
        "points": [len(c) for c in link.components],
        "radius": link.radius,
    }
    lines = [f"link components: {len(link.components)}"]
    for i, c in enumerate(link.components):
        lines.append(f"  component {i}: {len(c)} points")
    if args.plot:
        oracle.plot_link_svg(link, args.plot)
        lines.append(f"wrote {args.plot}")
    return 0, lines, data


def _matched_correspondence(link_x, link_y):
    if len(link_x.components) != len(link_y.components):
        raise GermlipError("links have different component counts")

    def order(link):
        import numpy as np

        keys = [
            (round(float(np.mean(c[:, 2])), 6), i)
            for i, c in enumerate(link.components)
        ]
        return [i for _, i in sorted(keys)]

    matching = tuple(zip(order(link_x), order(link_y)))
    return oracle.Correspondence(link_x, link_y, matching)


def run_radial(args):
    phi_x = _load_phi(args.phi_x)
    phi_y = _load_phi(args.phi_y)
    link_x = oracle.trace_link(phi_x, R=1.0)
    link_y = oracle.trace_link(phi_y, R=1.0)
    corr = _matched_correspondence(link_x, link_y)
    pairs = args.samples or 1500
    est = oracle.lipschitz_estimate(corr, pairs=pairs)
    inv = oracle.lipschitz_estimate(corr.inverse(), pairs=pairs)
    ok = est.bound_ok and inv.bound_ok
    data = {
        "c_emp": _approx(est.c_emp),
        "c_link": _approx(est.c_link),
        "bound_ok": bool(est.bound_ok),
        "inverse_c_emp": _approx(inv.c_emp),
        "inverse_bound_ok": bool(inv.bound_ok),
    }
    lines = [
        f"radial extension: C_emp = {_approx(est.c_emp)}, "
        f"C_link = {_approx(est.c_link)}",
        "bound C = max(1 + C_link/R, 2) with 5% slack: "
        + ("satisfied" if est.bound_ok else "violated"),
        f"inverse direction: C_emp = {_approx(inv.c_emp)}, "
        + ("satisfied" if inv.bound_ok else "violated"),
    ]
    return (0 if ok else 1), lines, data


def run_oracle_verify(args, beta_hook=None):
    f = _load_germ(args.germ)
    report = build_holder_complex(f)
    tolerance = args.tolerance if args.tolerance is not None else 0.15
    radii = _radii_from_args(args)
    samples = args.samples or 6
    rows = []
    failed = False
    for i, (sec, beta) in enumerate(zip(report.sectors, report.sector_betas)):
        exact = float(beta)
        if beta_hook is not None:
            exact = beta_hook(i, exact)
        est = oracle.estimate_sector_exponent(f, sec, samples=samples, radii=radii)
        bad = abs(est - exact) > tolerance
        failed = failed or bad
        rows.append(
            {
                "sector": i,
                "exact": f"{exact:g}",
                "estimate": _approx(est),
                "residual": _approx(abs(est - exact)),
                "within_tolerance": not bad,
            }
        )
    branches = report.double_curve.branches
    sampled = [oracle.sample_puiseux_arc(b, radii) for b in branches]
    contact_rows = []
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            exact = report.contact.entries[i][j]
            est = oracle.estimate_contact(sampled[i], sampled[j])
            if exact is INFINITY or est.infinite:
                bad = (exact is INFINITY) != est.infinite
            else:
                bad = abs(est.value - float(exact)) > tolerance
            failed = failed or bad
            contact_rows.append(
                {
                    "pair": [i, j],
                    "exact": str(exact),
                    "estimate": "inf" if est.infinite else _approx(est.value),
                    "within_tolerance": not bad,
                }
            )
    lines = ["sector exponents (exact vs numeric):"]
    for r in rows:
        mark = "ok" if r["within_tolerance"] else "FAIL"
        lines.append(
            f"  sector {r['sector']}: exact {r['exact']}, "
            f"estimate {r['estimate']}, residual {r['residual']} [{mark}]"
        )
    lines.append("branch-pair contacts (exact vs numeric):")
    for r in contact_rows:
        mark = "ok" if r["within_tolerance"] else "FAIL"
        lines.append(
            f"  branches {r['pair'][0]},{r['pair'][1]}: exact {r['exact']}, "
            f"estimate {r['estimate']} [{mark}]"
        )
    if not contact_rows:
        lines.append("  (fewer than 2 branches)")
    data = {"sectors": rows, "contacts": contact_rows, "all_within_tolerance": not failed}
    return (1 if failed else 0), lines, data


def build_parser():
    parser = argparse.ArgumentParser(
        prog="germlip",
        description="Inner bi-Lipschitz classification of parametrized surface germs.",
    )
    parser.add_argument(
        "--format", choices=("text", "structured"), default="text", dest="format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dpoints", help="double-point rays, pairing and image curve")
    p.add_argument("germ")
    p.set_defaults(run=run_dpoints)

    p = sub.add_parser("complex", help="link graph of a germ")
    p.add_argument("germ")
    p.add_argument("--canonical", action="store_true")
    p.set_defaults(run=run_complex)

    p = sub.add_parser("classify", help="compare two germs up to inner bi-Lipschitz")
    p.add_argument("germ_f")
    p.add_argument("germ_g")
    p.set_defaults(run=run_classify)

    p = sub.add_parser("curves", help="compare image double curves")
    p.add_argument("germ_f")
    p.add_argument("germ_g")
    p.set_defaults(run=run_curves)

    p = sub.add_parser("contact", help="exact contact matrix of the double curve")
    p.add_argument("germ")
    p.set_defaults(run=run_contact)

    p = sub.add_parser("oracle-contact", help="numeric contact cross-check")
    p.add_argument("germ")
    p.add_argument("--radii")
    p.add_argument("--plot")
    p.set_defaults(run=run_oracle_contact)

    p = sub.add_parser("oracle-lne", help="inner/outer metric ratio on the image mesh")
    p.add_argument("germ")
    p.add_argument("--samples", type=int)
    p.set_defaults(run=run_oracle_lne)

    p = sub.add_parser("oracle-verify", help="run every numeric cross-check")
    p.add_argument("germ")
    p.add_argument("--radii")
    p.add_argument("--samples", type=int)
    p.add_argument("--tolerance", type=float)
    p.set_defaults(run=run_oracle_verify)

    p = sub.add_parser("trace-link", help="trace an implicit surface link")
    p.add_argument("phi")
    p.add_argument("--plot")
    p.set_defaults(run=run_trace_link)

    p = sub.add_parser("radial", help="radial extension Lipschitz check")
    p.add_argument("phi_x")
    p.add_argument("phi_y")
    p.add_argument("--samples", type=int)
    p.set_defaults(run=run_radial)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, lines, data = args.run(args)
    except ParseError as exc:
        where = ""
        if exc.line is not None:
            where = f" (line {exc.line}" + (
                f", column {exc.column})" if exc.column is not None else ")"
            )
        print(f"error: {exc}{where}", file=sys.stderr)
        return 2
    except (GermlipError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "structured":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
