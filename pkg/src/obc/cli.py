"""Command-line interface: orbits, tiles, stability reports, the square
verification suite, window searches, same-code regions and SVG rendering.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .atlas import (
    SearchWindow,
    load_atlas,
    picture_convergence,
    save_atlas,
    scr_region,
    search_tiles,
)
from .dynamics import Code, iterate, orbit_to_text
from .errors import ObcError
from .field import CycloNum
from .geometry import from_xy_approx, hausdorff_distance, point_xy, regular_ngon
from .periodic import analyze_tile, tile_from_code
from .render import RenderSpec, render_svg
from .square import (
    count_attractors_detail,
    existence_condition,
    existence_identity_holds,
    lambda_k,
    square_polygon,
)


def parse_lambda(text):
    if "/" in text:
        num, den = text.split("/", 1)
        lam = Fraction(int(num), int(den))
    else:
        lam = Fraction(text)
    if not 0 < lam <= 1:
        raise ObcError(f"contraction rate must be in (0, 1], got {lam}")
    return lam


def parse_seed(text, n):
    if ":" in text:  # serialized exact point
        try:
            z = CycloNum.parse(text)
        except ValueError as exc:
            raise ObcError(f"bad exact seed {text!r}: {exc}") from exc
        if z.n != n:
            raise ObcError(f"seed conductor {z.n} does not match --n {n}")
        return z
    try:
        xs, ys = text.split(",")
        return from_xy_approx(n, Fraction(xs.strip()), Fraction(ys.strip()))
    except ValueError as exc:
        raise ObcError(f"bad seed {text!r}: {exc}") from exc


def _polygon_for(args):
    if getattr(args, "square_frame", False):
        if args.n != 4:
            raise ObcError("--square-frame only makes sense with --n 4")
        return square_polygon()
    return regular_ngon(args.n)


def _fmt_pt(z):
    x, y = point_xy(z)
    return f"({x:.9g}, {y:.9g})"


def cmd_orbit(args):
    P = _polygon_for(args)
    lam = parse_lambda(args.lam)
    x = parse_seed(args.seed, args.n)
    rec = iterate(P, lam, x, args.steps)
    if args.exact:
        sys.stdout.write(orbit_to_text(rec))
    else:
        for p in rec.points:
            print(_fmt_pt(p))
        print("code=" + ",".join(str(a) for a in rec.code))
    info = rec.termination
    if rec.termination == "exact_repeat":
        info += f" preperiod={rec.preperiod} period={rec.period}"
    elif rec.termination == "hit_singular":
        info += f" step={rec.singular_step}"
    print(f"termination={info}")
    return 0


def _code_from_args(args, P):
    if args.code:
        code = Code.parse(args.code)
        code.validate_labels(len(P.vertices))
        return code
    if not args.seed:
        raise ObcError("need --seed or --code")
    x = parse_seed(args.seed, args.n)
    rec = iterate(P, 1, x, args.max_steps)
    if rec.termination != "exact_repeat":
        raise ObcError(f"seed is not periodic within {args.max_steps} steps ({rec.termination})")
    return Code(rec.cycle_code())


def cmd_tile(args):
    P = _polygon_for(args)
    code = _code_from_args(args, P)
    tile = tile_from_code(P, code)
    print(f"code={code.serialize()}")
    print(f"period={tile.period}")
    print(f"sides={len(tile.polygon.vertices)}")
    for v in tile.polygon.vertices:
        print(f"vertex {_fmt_pt(v)}  {v.serialize()}")
    return 0


def cmd_stability(args):
    P = _polygon_for(args)
    code = _code_from_args(args, P)
    tile = analyze_tile(P, tile_from_code(P, code))
    rep = tile.stability
    print(
        f"code={code.serialize()} period={tile.period} "
        f"symmetric={str(tile.symmetric).lower()} "
        f"stable={str(rep.verdict == 'stable').lower()} "
        f"verdict={rep.verdict} limit={_fmt_pt(rep.limit_point)}"
    )
    return 0


def cmd_square_verify(args):
    tol = Fraction(args.tol)
    if tol <= 0:
        raise ObcError("tolerance must be positive")
    print("k   lambda_k enclosure                          p_k<=0 at mid  identity")
    prev_hi = None
    for k in range(1, args.kmax + 1):
        lo, hi = lambda_k(k, tol)
        mid = (lo + hi) / 2
        exist = existence_condition(k, (hi + 1) / 2) if hi < 1 else True
        ident = existence_identity_holds(k)
        mono = "" if prev_hi is None or lo > prev_hi else "  NOT-INCREASING"
        print(f"{k:<3d} [{float(lo):.15f}, {float(hi):.15f}]  {str(exist):<13s}  {str(ident)}{mono}")
        prev_hi = hi
    if not args.skip_attractors:
        print()
        print("lambda   attractors  undecided  periods")
        for lam in (Fraction(1, 2), Fraction(4, 5), Fraction(9, 10)):
            cnt, codes, und = count_attractors_detail(
                lam, samples=args.samples, max_steps=args.max_steps
            )
            periods = [Code(w).period for w in codes]
            print(f"{str(lam):<8s} {cnt:<11d} {und:<10d} {periods}")
    return 0


def _parse_window(text):
    parts = [Fraction(p.strip()) for p in text.split(",")]
    if len(parts) != 4:
        raise ObcError("window must be x0,x1,t0,t1")
    return tuple(parts)


def cmd_search(args):
    window = SearchWindow(
        n=args.n,
        bounds=_parse_window(args.window),
        grid_resolution=Fraction(args.resolution),
        max_period=args.max_period,
        mode=args.mode,
    )
    atlas = search_tiles(window)
    print(
        f"found {len(atlas.entries)} tile orbits "
        f"({atlas.provenance['seeds']} seeds, "
        f"{atlas.provenance['singular_skipped']} singular, "
        f"{atlas.provenance['undecided']} undecided)"
    )
    for t in atlas.tiles():
        print(
            f"  period={t.period} sides={len(t.polygon.vertices)} "
            f"symmetric={str(t.symmetric).lower()} verdict={t.stability.verdict}"
        )
    if args.out:
        save_atlas(atlas, args.out)
        print(f"atlas written to {args.out}")
    return 0


def cmd_scr(args):
    P = _polygon_for(args)
    x = parse_seed(args.seed, args.n)
    if args.lambdas:
        lams = [parse_lambda(p.strip()) for p in args.lambdas.split(",")]
        rows = picture_convergence(args.n, x, lams, args.depth,
                                   polygon=P if args.square_frame else None)
        print("lambda      hausdorff_to_tile   depth")
        for lam, d in rows:
            print(f"{str(lam):<11s} {d:<19.9f} {args.depth}")
        return 0
    lam = parse_lambda(args.lam)
    region = scr_region(args.n, lam, x, args.depth,
                        polygon=P if args.square_frame else None)
    print(f"depth={args.depth} sides={len(region.polygon.vertices)}")
    for v in region.polygon.vertices:
        print(f"vertex {_fmt_pt(v)}")
    if args.compare_tile:
        rec = iterate(P, 1, x, 4 * args.depth + 16)
        if rec.termination != "exact_repeat":
            raise ObcError("seed is not periodic; cannot compare to its tile")
        tile = tile_from_code(P, Code(rec.cycle_code()))
        print(f"hausdorff_to_tile={hausdorff_distance(region.polygon, tile.polygon):.9f}")
    return 0


def cmd_render(args):
    spec = RenderSpec(
        viewport=tuple(float(Fraction(p)) for p in args.viewport.split(",")),
        precision_bits=args.precision_bits,
    )
    if args.atlas:
        atlas = load_atlas(args.atlas)
        render_svg(atlas, spec, args.out)
    else:
        P = _polygon_for(args)
        lam = parse_lambda(args.lam)
        x = parse_seed(args.seed, args.n)
        rec = iterate(P, lam, x, args.steps)
        render_svg(rec, spec, args.out, polygon=P)
    print(f"wrote {args.out}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="obc",
        description="Outer billiards with contraction outside regular polygons",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, seed=True):
        p.add_argument("--n", type=int, default=4, help="polygon order (vertices at roots of unity)")
        p.add_argument("--square-frame", action="store_true",
                       help="use the axis-aligned square with vertices (+-1,+-1) (n=4 only)")
        if seed:
            p.add_argument("--seed", help="decimal point 'x,y'")

    p = sub.add_parser("orbit", help="iterate the map and dump the orbit")
    add_common(p)
    p.add_argument("--lambda", dest="lam", default="1", help="contraction rate, p/q or decimal")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--exact", action="store_true", help="emit serialized exact points")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("tile", help="build the tile for a seed or a code")
    add_common(p)
    p.add_argument("--code", help="comma-separated vertex labels")
    p.add_argument("--max-steps", type=int, default=4096)
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("stability", help="symmetry and stability report for a tile")
    add_common(p)
    p.add_argument("--code", help="comma-separated vertex labels")
    p.add_argument("--max-steps", type=int, default=4096)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("square-verify", help="square family: thresholds and attractor counts")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--tol", default="1e-12", help="enclosure width (rational or scientific)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--max-steps", type=int, default=10000)
    p.add_argument("--skip-attractors", action="store_true")
    p.set_defaults(func=cmd_square_verify)

    p = sub.add_parser("search", help="scan a window for periodic tiles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", required=True, help="x0,x1,t0,t1 (scaled coordinates)")
    p.add_argument("--resolution", default="1/8")
    p.add_argument("--max-period", type=int, default=64)
    p.add_argument("--mode", choices=("exact", "float_then_certify"), default="exact")
    p.add_argument("--out", help="atlas output path")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("scr", help="same-code region / convergence of picture")
    add_common(p)
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--lambdas", help="comma list; report distances to the tile instead")
    p.add_argument("--depth", type=int, default=50)
    p.add_argument("--compare-tile", action="store_true")
    p.set_defaults(func=cmd_scr)

    p = sub.add_parser("render", help="render an atlas or an orbit to SVG")
    add_common(p)
    p.add_argument("--atlas", help="atlas file to draw")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--out", required=True)
    p.add_argument("--viewport", default="-8,8,-8,8")
    p.add_argument("--precision-bits", type=int, default=53)
    p.set_defaults(func=cmd_render)

    return ap


def run_cli(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ObcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
