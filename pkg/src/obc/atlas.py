"""Tile discovery over spatial windows, same-code regions, and
convergence-of-picture measurements.

Search seeds a rational grid (in (x, ytilde) coordinates, which are exact
field points for every n), iterates the uncontracted map to exact
repetition, and builds each newly seen tile from its canonical code.  An
atlas keys tiles by canonical code, so one entry stands for a whole orbit
of tiles; results are independent of traversal order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .dynamics import Code, iterate, select_vertex
from .errors import AtlasFormatError, CodeNotRealizableError, ObcError
from .field import CycloNum
from .geometry import (
    ConvexPolygon,
    from_scaled,
    halfplane_left_of,
    hausdorff_distance,
    intersect_halfplanes,
    point_xy,
    regular_ngon,
)
from .periodic import analyze_tile, iterate_tiles, tile_from_code


@dataclass(frozen=True)
class SearchWindow:
    """Rational search rectangle in (x, ytilde) coordinates."""

    n: int
    bounds: tuple  # (x0, x1, t0, t1) Fractions
    grid_resolution: Fraction
    max_period: int
    mode: str = "exact"  # "exact" | "float_then_certify"

    def grid(self):
        x0, x1, t0, t1 = (Fraction(b) for b in self.bounds)
        res = Fraction(self.grid_resolution)
        if res <= 0:
            raise ValueError("grid_resolution must be positive")
        xs = []
        v = x0
        while v <= x1:
            xs.append(v)
            v += res
        ts = []
        v = t0
        while v <= t1:
            ts.append(v)
            v += res
        return xs, ts


@dataclass
class Atlas:
    """Tiles keyed by canonical code, with search provenance.

    ``canonical_frame`` records whether the tiles live outside the standard
    regular n-gon (vertices at roots of unity); only canonical-frame atlases
    can be persisted, since the file format identifies the polygon by n
    alone.
    """

    n: int
    entries: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    canonical_frame: bool = True

    def add(self, tile):
        key = tile.code.canonical()
        if key not in self.entries:
            self.entries[key] = tile
            return True
        return False

    def codes(self):
        return set(self.entries)

    def tiles(self):
        return [self.entries[k] for k in sorted(self.entries)]


class _FloatNgon:
    """Hardware-float mirror of the polygon map, for candidate screening."""

    def __init__(self, P):
        self.verts = [(v.to_complex().real, v.to_complex().imag) for v in P.vertices]

    def select(self, x, y):
        vs = self.verts
        m = len(vs)
        for i in range(m):
            vx, vy = vs[i]
            dx, dy = vx - x, vy - y
            nx, ny = vs[(i + 1) % m]
            px, py = vs[(i - 1) % m]
            c1 = dx * (ny - y) - dy * (nx - x)
            c2 = dx * (py - y) - dy * (px - x)
            if c1 > 1e-12 and c2 > 1e-12:
                return i + 1
        return None

    def periodic_code(self, x, y, max_period):
        x0, y0 = x, y
        code = []
        for k in range(max_period):
            lbl = self.select(x, y)
            if lbl is None:
                return None
            vx, vy = self.verts[lbl - 1]
            x, y = 2 * vx - x, 2 * vy - y
            code.append(lbl)
            if abs(x - x0) < 1e-9 and abs(y - y0) < 1e-9:
                return code
        return None


def search_tiles(window, polygon=None):
    """Scan the window grid for periodic tiles of the uncontracted map.

    Grid points falling inside known tiles are skipped; points hitting the
    singular set are counted and skipped.  In float_then_certify mode a
    float orbit proposes the code and exact tile construction plus code
    reproduction certifies it before admission.  ``polygon`` overrides the
    standard regular n-gon (e.g. the axis-aligned square frame); such
    atlases stay in memory only.
    """
    n = window.n
    P = polygon if polygon is not None else regular_ngon(n)
    atlas = Atlas(n=n, canonical_frame=polygon is None)
    atlas.provenance = {
        "bounds": tuple(str(Fraction(b)) for b in window.bounds),
        "grid_resolution": str(Fraction(window.grid_resolution)),
        "max_period": window.max_period,
        "mode": window.mode,
        "singular_skipped": 0,
        "undecided": 0,
        "seeds": 0,
    }
    cover = []  # (tile polygons over the orbit) for cheap skip tests
    fl = _FloatNgon(P) if window.mode == "float_then_certify" else None
    xs, ts = window.grid()
    for tx in ts:
        for x in xs:
            z = from_scaled(n, x, tx)
            atlas.provenance["seeds"] += 1
            zf = z.to_complex()
            covered = False
            for polyf in cover:
                if _float_inside(polyf, zf.real, zf.imag):
                    covered = True
                    break
            if covered:
                continue
            code = None
            if fl is not None:
                fcode = fl.periodic_code(zf.real, zf.imag, window.max_period)
                if fcode is None:
                    atlas.provenance["undecided"] += 1
                    continue
                code = Code(fcode)
            else:
                rec = iterate(P, 1, z, window.max_period)
                if rec.termination == "hit_singular":
                    atlas.provenance["singular_skipped"] += 1
                    continue
                if rec.termination != "exact_repeat":
                    atlas.provenance["undecided"] += 1
                    continue
                code = Code(rec.cycle_code())
            canon = Code(code.canonical())
            if canon.canonical() in atlas.entries:
                continue
            try:
                tile = tile_from_code(P, canon)
            except CodeNotRealizableError:
                atlas.provenance["undecided"] += 1
                continue
            if fl is not None and not _certify(P, tile):
                atlas.provenance["undecided"] += 1
                continue
            analyze_tile(P, tile)
            atlas.add(tile)
            for poly in [tile.polygon] + iterate_tiles(P, tile):
                cover.append(poly.float_vertices())
    return atlas


def _certify(P, tile):
    """Exact check that the tile's centroid reproduces the tile code."""
    x = tile.polygon.centroid()
    for a in Code(tile.code.doubled_even()).word:
        sel = select_vertex(P, x)
        if sel.kind != "vertex" or sel.label != a:
            return False
        v = P.vertices[a - 1]
        x = v * 2 - x
    return True


def _float_inside(poly_pts, x, y, margin=1e-9):
    m = len(poly_pts)
    for i in range(m):
        ax, ay = poly_pts[i]
        bx, by = poly_pts[(i + 1) % m]
        if (bx - ax) * (y - ay) - (by - ay) * (x - ax) <= margin:
            return False
    return True


# -- same-code regions --------------------------------------------------------


@dataclass(frozen=True)
class SCRegion:
    """Truncated region of points sharing the first ``depth`` code symbols."""

    x: CycloNum
    lam: Fraction
    depth: int
    polygon: ConvexPolygon


def scr_constraints(n, lam, x, depth, polygon=None):
    """Half-planes carving the set of points sharing x's first code symbols.

    Step i's selection wedge is pulled back through the inverse of the
    composed affine step map, which keeps every boundary line exactly
    representable.
    """
    lam = Fraction(lam)
    P = polygon if polygon is not None else regular_ngon(n)
    m = len(P.vertices)
    sel = select_vertex(P, x)
    if sel.kind != "vertex":
        raise ObcError(f"point is {sel.kind}; its code is undefined")
    cons = []
    # inverse orbit map G_i(z) = alpha*z + beta, exact
    alpha = Fraction(1)
    beta = CycloNum.zero(x.n)
    cur = x
    for i in range(depth):
        sel = select_vertex(P, cur)
        if sel.kind != "vertex":
            raise ObcError(f"orbit hits the singular set at step {i}")
        a = sel.label
        v = P.vertices[a - 1]
        # pulled-back wedge: the inverse map has scalar linear part, so
        # orientation is preserved and mapping the three defining points
        # suffices
        apex = v * alpha + beta
        nxt = P.vertices[a % m] * alpha + beta
        prv = P.vertices[(a - 2) % m] * alpha + beta
        cons.append(halfplane_left_of(apex, nxt))
        cons.append(halfplane_left_of(apex, prv))
        cur = v * (1 + lam) - cur * lam
        # next inverse map: z -> G_i(((1+lam) v - z)/lam)
        beta = beta + v * (alpha * (1 + lam) / lam)
        alpha = -alpha / lam
    return cons


def scr_region(n, lam, x, depth, polygon=None):
    """Exact truncated same-code region around x (see scr_constraints)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    lam = Fraction(lam)
    cons = scr_constraints(n, lam, x, depth, polygon=polygon)
    if lam < 1:
        w = Fraction(2 * n) * (1 + lam) / (1 - lam) + 4
    else:
        w = None
    res = intersect_halfplanes(cons, half_width=w)
    if res.polygon is None:
        raise ObcError(f"same-code region degenerated: {res.kind}")
    if not res.polygon.contains(x):
        raise ObcError("region does not contain its seed")  # pragma: no cover
    return SCRegion(x, lam, depth, res.polygon)


def picture_convergence(n, x, lambdas, depth=None, tol=1e-9, polygon=None):
    """Hausdorff distance of truncated same-code regions to the tile of x.

    x must be periodic for the uncontracted map; returns [(lam, dist)] in
    the order given.  depth defaults to 50 periods (truncation is
    conservative: deeper regions are nested inside shallower ones).
    """
    P = polygon if polygon is not None else regular_ngon(n)
    rec = iterate(P, 1, x, 4 * (depth or 256) + 16)
    if rec.termination != "exact_repeat":
        raise ObcError("seed is not periodic for the uncontracted map")
    if depth is None:
        depth = 50 * rec.period
    tile = tile_from_code(P, Code(rec.cycle_code()))
    out = []
    for lam in lambdas:
        lam = Fraction(lam)
        if lam == 1:
            out.append((lam, 0.0))
            continue
        region = scr_region(n, lam, x, depth, polygon=polygon)
        out.append((lam, hausdorff_distance(region.polygon, tile.polygon, tol)))
    return out


# -- persistence ---------------------------------------------------------------

_HEADER_PREFIX = "obc-atlas v1 n="


def save_atlas(atlas, path):
    """Write the atlas in its line format: a header then one sorted entry
    per line (code, period, exact vertices, symmetry flag, verdict)."""
    if not atlas.canonical_frame:
        raise ObcError(
            "only canonical-frame atlases are persistable; the file format "
            "identifies the polygon by n alone"
        )
    lines = [f"{_HEADER_PREFIX}{atlas.n}"]
    for key in sorted(atlas.entries):
        t = atlas.entries[key]
        verdict = t.stability.verdict if t.stability else "unstable"
        sym = 1 if t.symmetric else 0
        lines.append(
            "code=" + ",".join(str(a) for a in t.code.word)
            + f";period={t.period}"
            + ";vertices=" + t.polygon.serialize()
            + f";symmetric={sym}"
            + f";stable={verdict}"
        )
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def load_atlas(path):
    """Read an atlas, re-deriving each tile from its code and rejecting
    entries whose stored data disagrees; diagnostics carry line numbers."""
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].startswith(_HEADER_PREFIX):
        raise AtlasFormatError("missing atlas header", lineno=1)
    try:
        n = int(lines[0][len(_HEADER_PREFIX):])
    except ValueError as exc:
        raise AtlasFormatError(f"bad conductor: {exc}", lineno=1) from exc
    P = regular_ngon(n)
    atlas = Atlas(n=n)
    atlas.provenance = {"loaded_from": str(path)}
    diagnostics = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            entry = _parse_entry(line)
            code = Code.parse(entry["code"])
            code.validate_labels(n)
            tile = tile_from_code(P, code)
            stored = ConvexPolygon.parse(entry["vertices"], validate=False)
            if stored != tile.polygon:
                raise AtlasFormatError("stored vertices disagree with the code's tile")
            if int(entry["period"]) != tile.period:
                raise AtlasFormatError("stored period disagrees with the code")
            analyze_tile(P, tile)
            if tile.stability.verdict != entry["stable"]:
                raise AtlasFormatError("stored verdict disagrees")
            if bool(int(entry["symmetric"])) != tile.symmetric:
                raise AtlasFormatError("stored symmetry flag disagrees")
            atlas.add(tile)
        except (AtlasFormatError, ObcError, ValueError, KeyError) as exc:
            diagnostics.append(f"line {lineno}: rejected ({exc})")
    atlas.provenance["diagnostics"] = diagnostics
    return atlas


def _parse_entry(line):
    out = {}
    for part in line.split(";"):
        k, sep, v = part.partition("=")
        if not sep:
            raise AtlasFormatError(f"bad field {part!r}")
        out[k] = v
    for req in ("code", "period", "vertices", "symmetric", "stable"):
        if req not in out:
            raise AtlasFormatError(f"missing field {req!r}")
    return out
