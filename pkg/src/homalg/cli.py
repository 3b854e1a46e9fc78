"""
Command-line interface.

    homalg group gl --n 2 --q 2 --out g.json
    homalg homology --group zmod:6 --coeff Z --max-degree 3
    homalg cartan --p 3 --dim 2 --max-degree 3
    homalg ss pages --in fc.json --ring F2 --max-page 5
    homalg ss lhs --group zmod:4 --normal gen:2 --coeff F2
    homalg stability orbit-complex --n 1 --q 2 --max-p 2
    homalg stability row-homology --n 1 --q 3 --k 1 --max-degree 2
    homalg stability minweight --p 3 --m 2
    homalg verify ch3
    homalg export --in result.json --format table

Exit codes: 0 success, 1 a verification check failed, 2 input or module
error (reported as JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import HomAlgError, TooLarge

DEFAULT_CAPS = 2_000_000


def _emit(obj, out):
    io.write_text(out, io.canonical(obj))


def _check_caps(order, N, caps):
    if order ** (N + 1) > caps:
        raise TooLarge(f"|G|^(N+1) = {order ** (N + 1)} exceeds --caps {caps}")


def _module(G, args):
    from .exactla import parse_ring
    from .gmodule import GModule, trivial_module
    if getattr(args, "module", None):
        return GModule.from_json(G, io.load_json(args.module))
    return trivial_module(G, parse_ring(args.coeff))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_group_gl(args):
    from .groupcore import general_linear_group
    G = general_linear_group(args.n, args.q)
    art = dict(G.to_json(), kind="group", name=G.name)
    _emit(art, args.out)
    return 0


def cmd_group_show(args):
    from .groupcore import abelianization, parse_group
    G = parse_group(args.group)
    art = {"kind": "group_summary", "name": G.name, "order": G.order,
           "abelian": G.is_abelian, "abelianization": str(abelianization(G))}
    _emit(art, args.out)
    return 0


def cmd_homology(args):
    from .groupcore import parse_group
    from .homology import group_cohomology, group_homology
    G = parse_group(args.group)
    N = args.max_degree
    _check_caps(G.order, N, args.caps)
    M = _module(G, args)
    inputs = {"table": G.table, "module": M.to_json(), "N": N, "co": args.cohomology}

    def compute():
        fn = group_cohomology if args.cohomology else group_homology
        # the library caps simplices of the bar complex, which number |G| per basis element
        res = fn(G, M, N, cap=args.caps * G.order)
        out = res.to_json()
        out.update(kind="homology", group=G.name, max_degree=N, cohomology=args.cohomology)
        return out

    art, _ = io.cached("homology", inputs, compute)
    art["group"] = G.name
    _emit(art, args.out)
    return 0


def cmd_cartan(args):
    from .gradedalg import cartan_verify
    rows = cartan_verify(args.p, args.dim, args.max_degree)
    lines = [f"(Z/{args.p})^{args.dim} over F{args.p}", "  k  expected  computed  status"]
    for r in rows:
        lines.append(f"  {r.degree:<2} {r.expected:>8}  {r.computed:>8}  {'ok' if r.passed else 'MISMATCH'}")
    io.write_text(args.out, "\n".join(lines))
    return 0 if all(r.passed for r in rows) else 1


def cmd_ss_pages(args):
    from .exactla import parse_ring
    from .spectral import FilteredComplex, pages
    obj = io.load_json(args.infile)
    fc = FilteredComplex.from_json(obj)
    if args.ring:
        fc = FilteredComplex(fc.complex.change_ring(parse_ring(args.ring)), fc.levels)
    pg = pages(fc, args.max_page)
    if args.format == "json":
        _emit({"kind": "ss_pages", "pages": [dict(p.to_json(), kind="ss_page") for p in pg]}, args.out)
    else:
        blocks = [f"E^{p.r}\n{p.grid()}" for p in pg]
        io.write_text(args.out, "\n\n".join(blocks))
    return 0


def cmd_ss_lhs(args):
    from .groupcore import parse_group, parse_subgroup
    from .spectral import SSPage, lhs_e2
    G = parse_group(args.group)
    H = parse_subgroup(G, args.normal)
    _check_caps(G.order, max(args.max_p, args.max_q), args.caps)
    M = _module(G, args)
    rep = lhs_e2(G, H, M, args.max_p, args.max_q)
    art = dict(SSPage(2, rep.e2).to_json(), kind="lhs", group=G.name, normal=H,
               abutment=rep.abutment, sums=rep.sums, differential_forced=rep.flags,
               column_edge_ranks=rep.column_edge_ranks, row_edge_ranks=rep.row_edge_ranks)
    if args.format == "json":
        _emit(art, args.out)
    else:
        lines = ["E^2", rep.grid(), "",
                 "  n  sum E^2  dim H_n  forced d",
                 *[f"  {n:<2} {s:>7}  {rep.abutment[n]:>7}  {'yes' if f else 'no'}"
                   for n, (s, f) in enumerate(zip(rep.sums, rep.flags))]]
        io.write_text(args.out, "\n".join(lines))
    return 0


def cmd_orbit_complex(args):
    from .stabilitylab import orbit_row_complex
    orc = orbit_row_complex(args.n, args.q, args.max_p, diagnostic_trivial=args.trivial_group)
    space = orc.simplicial.space
    art = {"kind": "orbit_complex", "n": args.n, "q": args.q,
           "orbit_counts": orc.orbit_counts(), "d1_squared_zero": orc.d1_squared_zero(),
           "orbits": [[{"rep": [list(space.nonzero[i]) for i in t], "dim": d}
                       for t, d in zip(ts, ds)] for ts, ds in zip(orc.labels, orc.dims)],
           "homology": [g.to_json() for g in orc.complex.homology_all()]}
    _emit(art, args.out)
    return 0


def cmd_row_homology(args):
    from .stabilitylab import row_filtration_homology
    r = row_filtration_homology(args.n, args.q, args.k, args.max_degree)
    art = {"kind": "row_homology", "n": r.n, "q": r.q, "k": r.k, "L": r.L,
           "homology": [g.to_json() for g in r.homology],
           "oracle": [g.to_json() for g in r.oracle],
           "agrees_with_oracle": r.agrees, "k_acyclic": r.k_acyclic}
    _emit(art, args.out)
    return 0 if r.agrees else 1


def cmd_minweight(args):
    from .stabilitylab import min_weight_modular
    w, ns = min_weight_modular(args.p, args.m, return_witness=True)
    _emit({"kind": "minweight", "p": args.p, "m": args.m, "min_weight": w,
           "witness": list(ns), "bound": (args.p - 1) * args.m}, args.out)
    return 0


def cmd_verify(args):
    from .verify import run_suite
    results = run_suite(args.suite, sys.stdout, verbose=not args.quiet)
    failed = [r.number for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed"
          + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


def cmd_export(args):
    art = io.load_json(args.infile)
    io.write_text(args.out, io.export(art, args.format))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="homalg", description="Exact group homology and spectral sequences.")
    ap.add_argument("--caps", type=lambda s: int(float(s)), default=DEFAULT_CAPS,
                    help="bound on |G|^(N+1) basis counts (default 2e6)")
    sub = ap.add_subparsers(dest="command", required=True)

    def out_arg(p):
        p.add_argument("--out", default=None, help="output file (default stdout)")

    g = sub.add_parser("group", help="finite groups").add_subparsers(dest="sub", required=True)
    p = g.add_parser("gl", help="GL_n(F_q) as a multiplication table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    out_arg(p)
    p.set_defaults(func=cmd_group_gl)
    p = g.add_parser("show", help="order and abelianization of a group")
    p.add_argument("--group", required=True)
    out_arg(p)
    p.set_defaults(func=cmd_group_show)

    p = sub.add_parser("homology", help="group homology through the bar resolution")
    p.add_argument("--group", required=True, help="zmod:n, sym:n, dihedral:n, gl:n,q, product:a,b, file:path")
    p.add_argument("--coeff", default="Z", help="trivial coefficients Z, Q or Fp")
    p.add_argument("--module", default=None, help="G-module JSON file (overrides --coeff)")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--cohomology", action="store_true")
    out_arg(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("cartan", help="expected vs computed dims for (Z/p)^d")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    out_arg(p)
    p.set_defaults(func=cmd_cartan)

    ss = sub.add_parser("ss", help="spectral sequences").add_subparsers(dest="sub", required=True)
    p = ss.add_parser("pages", help="pages of a filtered complex")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--ring", default=None)
    p.add_argument("--max-page", type=int, default=3)
    p.add_argument("--format", choices=("table", "json"), default="table")
    out_arg(p)
    p.set_defaults(func=cmd_ss_pages)
    p = ss.add_parser("lhs", help="Lyndon/Hochschild-Serre E^2 page")
    p.add_argument("--group", required=True)
    p.add_argument("--normal", required=True, help="gen:a,b or elems:a,b")
    p.add_argument("--coeff", default="F2")
    p.add_argument("--module", default=None)
    p.add_argument("--max-p", type=int, default=3)
    p.add_argument("--max-q", type=int, default=3)
    p.add_argument("--format", choices=("table", "json"), default="table")
    out_arg(p)
    p.set_defaults(func=cmd_ss_lhs)

    st = sub.add_parser("stability", help="orbit complexes over finite fields").add_subparsers(
        dest="sub", required=True)
    p = st.add_parser("orbit-complex")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-p", type=int, default=2)
    p.add_argument("--trivial-group", action="store_true", help="diagnostic: quotient by the trivial group")
    out_arg(p)
    p.set_defaults(func=cmd_orbit_complex)
    p = st.add_parser("row-homology")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=2)
    out_arg(p)
    p.set_defaults(func=cmd_row_homology)
    p = st.add_parser("minweight")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    out_arg(p)
    p.set_defaults(func=cmd_minweight)

    from .verify import SUITES
    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--quiet", action="store_true", help="only print detail for failures")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="render a JSON artifact")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", required=True, help="json or table")
    out_arg(p)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.caps <= 0:
        ap.error("--caps must be positive")
    try:
        return args.func(args)
    except HomAlgError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
