"""Exact planar geometry over cyclotomic points.

A point is a CycloNum z = x + i*y read as a plane coordinate.  The real part
x is itself a real field element, but y generally is not (for n = 5 no field
element has imaginary part exactly 1).  All predicates therefore work with
the scaled ordinate

    ytilde = Im(z) / sin(2*pi/n) = (z - conj(z)) / (zeta - conj(zeta)),

which stays in the real subfield.  Scaling y by the positive constant
sin(2*pi/n) preserves every orientation and membership predicate; metric
quantities (norms, Hausdorff distances) are computed from certified numeric
enclosures of the true coordinates instead.  Half-plane coefficients
(a, b, c) are real field elements in these (x, ytilde) coordinates; for
n = 4 the scale factor is 1 and ytilde is the true ordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import GeometryError
from .field import CycloNum, approximate, sign_of_real

# A plane point is just a CycloNum used as a complex coordinate.
ExactPoint = CycloNum

_HALF = Fraction(1, 2)


def _eta(n):
    # zeta - conj(zeta) = 2i sin(2*pi/n), purely imaginary and nonzero
    return CycloNum.zeta(n) - CycloNum.zeta(n, n - 1)


_ETA_INV = {}


def _eta_inv(n):
    v = _ETA_INV.get(n)
    if v is None:
        v = _eta(n).inverse()
        _ETA_INV[n] = v
    return v


def real_part(z):
    """Re(z) as an exact real field element."""
    return (z + z.conj()) * _HALF


def imag_scaled(z):
    """Im(z) / sin(2*pi/n) as an exact real field element."""
    return (z - z.conj()) * _eta_inv(z.n)


def from_scaled(n, x, ytilde):
    """Point with Re = x and Im = ytilde * sin(2*pi/n); x, ytilde rational."""
    half_eta = _eta(n) * _HALF
    return CycloNum.from_rational(n, x) + half_eta * Fraction(ytilde)


def from_xy_approx(n, x, y, bits=20):
    """Field point within 2^-bits of the true coordinates (x, y).

    Exact in y for n = 4 (where sin(2*pi/n) = 1); otherwise the scaled
    ordinate is rounded to the nearest dyadic.
    """
    x = Fraction(x)
    y = Fraction(y)
    if n == 4:
        return from_scaled(4, x, y)
    sigma = math.sin(2.0 * math.pi / n)
    t = Fraction(round(float(y) / sigma * (1 << bits)), 1 << bits)
    return from_scaled(n, x, t)


def point_xy(z):
    """True coordinates of z as floats (from a certified enclosure)."""
    (rl, rh), (il, ih) = approximate(z, 60)
    return (float(rl + rh) / 2.0, float(il + ih) / 2.0)


def cross_scaled(u, w):
    """cross(u, w) / sin(2*pi/n) as an exact real field element."""
    p = u.conj() * w
    return (p - p.conj()) * _eta_inv(u.n)


def dot_part(u, w):
    """Dot product of u and w as an exact real field element."""
    p = u.conj() * w
    return (p + p.conj()) * _HALF


def norm_sq(z):
    """|z|^2 as an exact real field element."""
    return z * z.conj()


def orientation(a, b, c):
    """Exact sign of cross(b - a, c - a); +1 means counterclockwise."""
    return sign_of_real(cross_scaled(b - a, c - a), _checked=True)


class ConvexPolygon:
    """Strictly convex polygon, vertices in counterclockwise order."""

    __slots__ = ("vertices", "_key", "_float")

    def __init__(self, vertices, validate=True):
        vertices = tuple(vertices)
        if len(vertices) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        if validate:
            m = len(vertices)
            for i in range(m):
                if orientation(vertices[i], vertices[(i + 1) % m], vertices[(i + 2) % m]) != 1:
                    raise GeometryError("vertices are not strictly convex counterclockwise")
        self.vertices = vertices
        self._key = None
        self._float = None

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({len(self.vertices)} vertices)"

    def edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def centroid(self):
        s = self.vertices[0]
        for v in self.vertices[1:]:
            s = s + v
        return s * Fraction(1, len(self.vertices))

    def locate(self, z):
        """"interior" / "boundary" / "exterior" of the closed polygon."""
        on_edge = False
        vs = self.vertices
        m = len(vs)
        for i in range(m):
            s = orientation(vs[i], vs[(i + 1) % m], z)
            if s < 0:
                return "exterior"
            if s == 0:
                on_edge = True
        return "boundary" if on_edge else "interior"

    def contains(self, z, strict=False):
        loc = self.locate(z)
        return loc == "interior" if strict else loc != "exterior"

    def translated(self, d):
        return ConvexPolygon([v + d for v in self.vertices], validate=False)

    def mapped(self, f):
        """Image under an orientation-preserving affine map f (unvalidated)."""
        return ConvexPolygon([f(v) for v in self.vertices], validate=False)

    def rotated(self, j):
        """Rotation about the origin by 2*pi*j/n (exact)."""
        zj = CycloNum.zeta(self.vertices[0].n, j)
        return ConvexPolygon([v * zj for v in self.vertices], validate=False)

    def canonical_key(self):
        """Rotation-invariant vertex key; equal keys <=> equal polygons."""
        k = self._key
        if k is None:
            raw = [(v.n, v.coeffs) for v in self.vertices]
            best = min(range(len(raw)), key=lambda i: raw[i:] + raw[:i])
            k = tuple(raw[best:] + raw[:best])
            self._key = k
        return k

    def __eq__(self, other):
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def float_vertices(self):
        fv = self._float
        if fv is None:
            fv = [point_xy(v) for v in self.vertices]
            self._float = fv
        return fv

    def side_lengths_sq(self):
        return [norm_sq(q - p) for p, q in self.edges()]

    def is_regular(self):
        """True when all sides and all turning angles agree exactly."""
        vs = self.vertices
        m = len(vs)
        ds = [vs[(i + 1) % m] - vs[i] for i in range(m)]
        s0 = norm_sq(ds[0])
        c0 = cross_scaled(ds[0], ds[1])
        d0 = dot_part(ds[0], ds[1])
        for i in range(1, m):
            if norm_sq(ds[i]) != s0:
                return False
            if cross_scaled(ds[i], ds[(i + 1) % m]) != c0:
                return False
            if dot_part(ds[i], ds[(i + 1) % m]) != d0:
                return False
        return True

    def serialize(self):
        return " ".join(v.serialize() for v in self.vertices)

    @classmethod
    def parse(cls, text, validate=False):
        return cls([CycloNum.parse(p) for p in text.split()], validate=validate)


def regular_ngon(n):
    """Regular n-gon with vertices zeta_n^0 .. zeta_n^(n-1), labels 1..n."""
    if n < 3:
        raise GeometryError("need n >= 3")
    return ConvexPolygon([CycloNum.zeta(n, k) for k in range(n)], validate=False)


@dataclass(frozen=True)
class HalfPlane:
    """{z : a*x + b*ytilde + c > 0} (or >= 0 when closed).

    a, b, c are real field elements in (x, ytilde) coordinates.
    """

    a: CycloNum
    b: CycloNum
    c: CycloNum
    closed: bool = False

    def __post_init__(self):
        if self.a.is_zero() and self.b.is_zero():
            raise GeometryError("half-plane normal must be nonzero")

    def value(self, z):
        return self.a * real_part(z) + self.b * imag_scaled(z) + self.c

    def side(self, z):
        return sign_of_real(self.value(z), _checked=True)

    def admits(self, z):
        s = self.side(z)
        return s > 0 or (self.closed and s == 0)


def halfplane_left_of(p, q, closed=False):
    """Half-plane strictly left of the directed line p -> q.

    Its value functional at z equals cross(q - p, z - p) / sin(2*pi/n).
    """
    d = q - p
    dc = d.conj()
    a = imag_scaled(dc)
    b = real_part(d)
    c = -(a * real_part(p) + b * imag_scaled(p))
    return HalfPlane(a, b, c, closed)


@dataclass(frozen=True)
class RegionResult:
    """Outcome of a half-plane intersection."""

    kind: str  # "polygon" | "empty" | "lower_dimensional" | "unbounded"
    polygon: ConvexPolygon | None = None


def _clip(points, hp):
    """Sutherland-Hodgman clip of a convex CCW chain by a half-plane (closed)."""
    out = []
    m = len(points)
    vals = [hp.value(z) for z in points]
    sides = [sign_of_real(v, _checked=True) for v in vals]
    for i in range(m):
        cur, nxt = points[i], points[(i + 1) % m]
        sc, sn = sides[i], sides[(i + 1) % m]
        if sc >= 0:
            out.append(cur)
        if (sc > 0 and sn < 0) or (sc < 0 and sn > 0):
            # boundary crossing: cur + t*(nxt - cur) with t = f(cur)/(f(cur)-f(nxt))
            t = vals[i] / (vals[i] - vals[(i + 1) % m])
            out.append(cur + (nxt - cur) * t)
    return out


def _dedupe_collinear(points):
    cleaned = []
    for p in points:
        if not cleaned or cleaned[-1] != p:
            cleaned.append(p)
    if len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
        cleaned.pop()
    changed = True
    while changed and len(cleaned) >= 3:
        changed = False
        m = len(cleaned)
        for i in range(m):
            a, b, c = cleaned[(i - 1) % m], cleaned[i], cleaned[(i + 1) % m]
            if orientation(a, b, c) == 0:
                cleaned.pop(i)
                changed = True
                break
    return cleaned


def _bounding_box(n, half_width):
    w = Fraction(half_width)
    return [
        from_scaled(n, -w, -w),
        from_scaled(n, w, -w),
        from_scaled(n, w, w),
        from_scaled(n, -w, w),
    ]


def _auto_half_width(constraints):
    worst = 4.0
    for hp in constraints:
        av, bv, cv = (x.to_complex().real for x in (hp.a, hp.b, hp.c))
        scale = math.hypot(av, bv)
        if scale > 0:
            worst = max(worst, abs(cv) / scale)
    return Fraction(int(4 * worst) + 4)


def intersect_halfplanes(constraints, half_width=None):
    """Exact intersection of half-planes, clipped against a large box.

    Returns a RegionResult; "unbounded" means the true intersection was
    truncated by the box (some output vertex lies on it).  Openness flags
    on constraints are ignored while clipping (vertices on boundary lines
    are kept); interior membership tests handle strictness.
    """
    constraints = list(constraints)
    if not constraints:
        return RegionResult("unbounded", None)
    n = constraints[0].a.n
    if half_width is None:
        half_width = _auto_half_width(constraints)
    w = Fraction(half_width)
    pts = _bounding_box(n, w)
    for hp in constraints:
        pts = _clip(pts, hp)
        if not pts:
            return RegionResult("empty", None)
    pts = _dedupe_collinear(pts)
    if len(pts) < 3:
        return RegionResult("lower_dimensional", None)
    wq = CycloNum.from_rational(n, w)
    for z in pts:
        x = real_part(z)
        t = imag_scaled(z)
        if x == wq or x == -wq or t == wq or t == -wq:
            return RegionResult("unbounded", ConvexPolygon(pts, validate=False))
    return RegionResult("polygon", ConvexPolygon(pts, validate=False))


# -- approximate metric utilities -------------------------------------------


def _pt_seg_dist(p, a, b):
    px, py = p
    ax, ay = a
    bx, by = b
    vx, vy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return math.hypot(wx, wy)
    t = (wx * vx + wy * vy) / vv
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(wx - t * vx, wy - t * vy)


def _pt_poly_dist(p, poly_pts):
    m = len(poly_pts)
    inside = True
    for i in range(m):
        ax, ay = poly_pts[i]
        bx, by = poly_pts[(i + 1) % m]
        if (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax) < 0.0:
            inside = False
            break
    if inside:
        return 0.0
    return min(
        _pt_seg_dist(p, poly_pts[i], poly_pts[(i + 1) % m]) for i in range(m)
    )


def hausdorff_distance(A, B, tol=1e-9):
    """Hausdorff distance between convex polygons, within tol.

    For convex sets the directed distance is attained at a vertex of the
    source polygon, so vertex-to-polygon projections are exhaustive; the
    only error is floating-point evaluation of certified coordinates, far
    below any tol >= 1e-9.
    """
    if A is None or B is None:
        raise GeometryError("hausdorff_distance needs nonempty polygons")
    if tol <= 0:
        raise GeometryError("tol must be positive")
    pa = A.float_vertices()
    pb = B.float_vertices()
    d1 = max(_pt_poly_dist(p, pb) for p in pa)
    d2 = max(_pt_poly_dist(p, pa) for p in pb)
    return max(d1, d2)
