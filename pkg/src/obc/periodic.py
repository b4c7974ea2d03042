"""Periodic points, unfolding chains, tiles and the stability criterion.

A finite code C of length k determines the composed affine map
F_{k-1} o ... o F_0, each F_i being the reflection across the coded vertex
followed by contraction.  Its unique fixed point is

    q_C(lam) = (1 + lam) / (1 - (-lam)^k) * sum_i (-lam)^(k-1-i) * v_i,

exact for rational lam.  For even k the formula degenerates at lam = 1; if
the alternating vertex sum vanishes the limit exists and equals

    (2/k) * sum_i (k-1-i) * w_i       with w_i = (-1)^i * v_i,

which is also the barycenter of any unfolded base-point chain.  A tile is
stable under contraction exactly when that barycenter lies in the tile's
interior.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CodeNotRealizableError,
    IndeterminateFixedPointError,
    StabilityPreconditionError,
)
from .field import CycloNum
from .dynamics import Code, select_vertex, step
from .geometry import ConvexPolygon, halfplane_left_of, intersect_halfplanes


@dataclass(frozen=True)
class UnfoldingChain:
    """Base-point chain p_0..p_k with step vectors w_i (p_{i+1} = p_i + 2 w_i)
    and the reflected polygon copies, one per code symbol."""

    base: CycloNum
    points: tuple
    step_vectors: tuple
    reflected_polygons: tuple

    def closes(self):
        return self.points[0] == self.points[-1]

    def barycenter(self):
        k = len(self.points) - 1
        s = self.points[0]
        for p in self.points[1:k]:
            s = s + p
        return s * Fraction(1, k)


@dataclass(frozen=True)
class StabilityReport:
    limit_point: CycloNum
    barycenter: CycloNum
    verdict: str      # "stable" | "unstable" | "marginal"
    membership: str   # "interior" | "exterior" | "boundary"


@dataclass
class Tile:
    """Open convex tile of mutually periodic points sharing a code."""

    polygon: ConvexPolygon
    code: Code
    period: int
    symmetric: bool | None = None
    stability: StabilityReport | None = None

    def center(self):
        return self.polygon.centroid()


def _code_vertices(P, code):
    vs = P.vertices
    return [vs[a - 1] for a in code]


def code_fixed_point(P, code, lam):
    """The unique fixed point of the code's composed affine map, exactly."""
    code = code if isinstance(code, Code) else Code(code)
    code.validate_labels(len(P.vertices))
    lam = Fraction(lam)
    if not 0 < lam <= 1:
        raise ValueError("need 0 < lam <= 1")
    k = len(code.word)
    neg = -lam
    den = 1 - neg**k
    if den == 0:
        raise IndeterminateFixedPointError("indeterminate; use stability_limit")
    acc = CycloNum.zero(P.vertices[0].n)
    power = Fraction(1)
    for v in reversed(_code_vertices(P, code.word)):
        acc = acc + v * power
        power *= neg
    return acc * ((1 + lam) / den)


def compose_code_map(P, code, lam, z):
    """Apply the k coded reflection-contractions to z, in code order."""
    lam = Fraction(lam)
    for v in _code_vertices(P, code.word if isinstance(code, Code) else code):
        z = v * (1 + lam) - z * lam
    return z


def validate_periodic(P, code, lam):
    """True iff the hypothetical periodic point realizes the code.

    At lam = 1 with even-length code the fixed point is indeterminate; the
    orbit of the tile centroid decides instead.
    """
    code = code if isinstance(code, Code) else Code(code)
    lam = Fraction(lam)
    try:
        q = code_fixed_point(P, code, lam)
    except IndeterminateFixedPointError:
        try:
            t = tile_from_code(P, code)
        except CodeNotRealizableError:
            return False
        q = t.polygon.centroid()
    x = q
    for a in code.word:
        sel = select_vertex(P, x)
        if sel.kind != "vertex" or sel.label != a:
            return False
        x, _ = step(P, lam, x)
    return x == q


def unfold(P, code, base=None):
    """Reflect P along the code, keeping the point fixed.

    Produces the chain p_0..p_k of base-point copies, the step vectors
    w_i = p_i-to-apex (equal to (-1)^i v_i when the base is the center), and
    the chain of reflected polygons.
    """
    code = code if isinstance(code, Code) else Code(code)
    code.validate_labels(len(P.vertices))
    if base is None:
        base = P.centroid()
    pts = [base]
    ws = []
    polys = [P]
    cur_vertices = list(P.vertices)
    cur_p = base
    for a in code.word:
        apex = cur_vertices[a - 1]
        w = apex - cur_p
        ws.append(w)
        cur_p = cur_p + w * 2
        pts.append(cur_p)
        cur_vertices = [apex * 2 - z for z in cur_vertices]
        polys.append(ConvexPolygon(cur_vertices, validate=False))
    return UnfoldingChain(base, tuple(pts), tuple(ws), tuple(polys[:-1]))


def _selection_wedge_constraints(apex, nxt, prv):
    # {y : orientation(y, apex, nxt) > 0 and orientation(y, apex, prv) > 0}
    return (
        halfplane_left_of(apex, nxt),
        halfplane_left_of(apex, prv),
    )


def tile_constraints(P, code):
    """Two half-planes per code symbol, carving the set of points whose
    first len(code) symbols match the code (uncontracted map)."""
    code = code if isinstance(code, Code) else Code(code)
    n = len(P.vertices)
    cons = []
    cur_vertices = list(P.vertices)
    for a in code.word:
        apex = cur_vertices[a - 1]
        nxt = cur_vertices[a % n]
        prv = cur_vertices[(a - 2) % n]
        cons.extend(_selection_wedge_constraints(apex, nxt, prv))
        cur_vertices = [apex * 2 - z for z in cur_vertices]
    return cons


def _tile_box_half_width(cons):
    w = 8.0
    for hp in cons:
        av = hp.a.to_complex().real
        bv = hp.b.to_complex().real
        cv = hp.c.to_complex().real
        h = (av * av + bv * bv) ** 0.5
        if h > 1e-12:
            w = max(w, abs(cv) / h)
    return Fraction(int(2 * w) + 4)


def tile_from_code(P, code):
    """The open tile of points whose periodic itinerary is the given code.

    The polygon is the exact intersection of the per-step selection wedges
    over one period (the code is doubled first when its length is odd).  The
    tile corresponds to the code's own phase: rotating the code yields the
    tile's image under the map.
    """
    code = code if isinstance(code, Code) else Code(code)
    even = Code(code.doubled_even())
    cons = tile_constraints(P, even)
    res = intersect_halfplanes(cons, half_width=_tile_box_half_width(cons))
    if res.kind != "polygon":
        raise CodeNotRealizableError(f"code not realizable ({res.kind})")
    return Tile(polygon=res.polygon, code=code, period=code.period)


def alternating_vertex_sum(P, code):
    """sum_i (-1)^(k-1-i) v_i; must vanish for the limit point to exist."""
    word = code.word if isinstance(code, Code) else tuple(code)
    acc = CycloNum.zero(P.vertices[0].n)
    k = len(word)
    for i, v in enumerate(_code_vertices(P, word)):
        acc = acc + (v if (k - 1 - i) % 2 == 0 else -v)
    return acc


def stability_limit(P, code):
    """Limit of the fixed-point curve as the contraction rate tends to 1.

    Equals (2/k) * sum_i (k-1-i) * (-1)^i * v_i, and also the barycenter
    (1/k) * sum_j p_j of any unfolded chain.
    """
    code = code if isinstance(code, Code) else Code(code)
    word = code.doubled_even()
    if not alternating_vertex_sum(P, word).is_zero():
        raise StabilityPreconditionError(
            "alternating vertex sum does not vanish; not a tile code"
        )
    k = len(word)
    acc = CycloNum.zero(P.vertices[0].n)
    for i, v in enumerate(_code_vertices(P, word)):
        c = Fraction(2 * (k - 1 - i), k)
        acc = acc + v * (c if i % 2 == 0 else -c)
    return acc


def is_lambda_stable(P, code, base=None):
    """Stability verdict by exact location of the chain barycenter
    relative to the open tile: interior = stable, boundary = marginal."""
    code = code if isinstance(code, Code) else Code(code)
    tile = tile_from_code(P, code)
    even = Code(code.doubled_even())
    chain = unfold(P, even, base=base)
    bary = chain.barycenter()
    limit = stability_limit(P, code)
    if bary != limit:  # pragma: no cover - equality is a theorem
        raise AssertionError("chain barycenter disagrees with the limit point")
    membership = tile.polygon.locate(bary)
    verdict = {"interior": "stable", "boundary": "marginal", "exterior": "unstable"}[membership]
    return StabilityReport(limit, bary, verdict, membership)


def iterate_tiles(P, tile):
    """The polygons T(Q), T^2(Q), ... over one primitive period."""
    vs_code = _code_vertices(P, tile.code.word)
    out = []
    poly = tile.polygon
    for i in range(tile.period):
        v = vs_code[i % len(vs_code)]
        poly = poly.mapped(lambda z, v=v: v * 2 - z)
        out.append(poly)
    return out


def is_symmetric(P, tile):
    """True iff some nontrivial rotation of the tile occurs among its
    own map-iterates (rotations by 2*pi*j/n about the center of P)."""
    n = len(P.vertices)
    targets = {tile.polygon.rotated(j).canonical_key() for j in range(1, n)}
    for poly in iterate_tiles(P, tile):
        if poly.canonical_key() in targets:
            return True
    return False


def analyze_tile(P, tile, base=None):
    """Attach symmetry and stability verdicts to a tile (in place)."""
    tile.symmetric = is_symmetric(P, tile)
    tile.stability = is_lambda_stable(P, tile.code, base=base)
    return tile
