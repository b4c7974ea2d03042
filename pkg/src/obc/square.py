"""Verification machinery for the square: the threshold polynomials
p_k(t) = 1 - t^(k-1) - t^k + t^(2k), their roots lambda_k, closed-form
periodic coordinates, empirical attractor counts, and the degenerate
boundary orbit.

The square here has vertices (+-1, +-1) in Q(i), labeled counterclockwise
from (1, 1); the index-k orbit has period 4k and its tile is the unit-side
grid square centered at (-2k, 0).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .dynamics import Code, iterate
from .field import CycloNum
from .geometry import ConvexPolygon, cross_scaled, from_scaled, imag_scaled, real_part
from .periodic import validate_periodic


def square_polygon():
    """The square with vertices (1,1), (-1,1), (-1,-1), (1,-1), CCW."""
    return ConvexPolygon(
        [from_scaled(4, 1, 1), from_scaled(4, -1, 1),
         from_scaled(4, -1, -1), from_scaled(4, 1, -1)]
    )


_SQUARE = None


def _sq():
    global _SQUARE
    if _SQUARE is None:
        _SQUARE = square_polygon()
    return _SQUARE


def p_eval(k, lam):
    """p_k(lam) = 1 - lam^(k-1) - lam^k + lam^(2k), exactly."""
    lam = Fraction(lam)
    return 1 - lam ** (k - 1) - lam**k + lam ** (2 * k)


def p_coeffs(k):
    """Coefficient list of p_k, low degree first."""
    out = [Fraction(0)] * (2 * k + 1)
    out[0] += 1
    out[k - 1] -= 1
    out[k] -= 1
    out[2 * k] += 1
    return out


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def existence_identity_holds(k):
    """(1+t)(1-t^k)^2 - (1-t)(1+t^(2k)) == 2t*p_k(t) as exact polynomials.

    This is the corrected form of the threshold condition: the y-coordinate
    bound y_k(lam) <= 1 is equivalent to p_k(lam) <= 0.
    """
    one_minus_tk = [Fraction(0)] * (k + 1)
    one_minus_tk[0] = Fraction(1)
    one_minus_tk[k] = Fraction(-1)
    lhs = _poly_mul([Fraction(1), Fraction(1)], _poly_mul(one_minus_tk, one_minus_tk))
    sub = [Fraction(0)] * (2 * k + 2)
    # (1 - t)(1 + t^2k) = 1 - t + t^2k - t^(2k+1)
    sub[0] += 1
    sub[1] -= 1
    sub[2 * k] += 1
    sub[2 * k + 1] -= 1
    size = max(len(lhs), len(sub))
    lhs = lhs + [Fraction(0)] * (size - len(lhs))
    for i, c in enumerate(sub):
        lhs[i] -= c
    rhs = [Fraction(0)] + [2 * c for c in p_coeffs(k)]
    rhs = rhs + [Fraction(0)] * (size - len(rhs))
    return lhs == rhs


def lambda_k(k, tol=Fraction(1, 10**12)):
    """Isolating rational interval for the unique root of p_k in [0, 1).

    Bisection with exact sign evaluation; for k = 1 the root is 0 exactly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if k == 1:
        return (Fraction(0), Fraction(0))
    lo = Fraction(0)
    hi = None
    probe = Fraction(1, 2)
    while hi is None:
        cand = 1 - probe
        if p_eval(k, cand) < 0:
            hi = cand
        else:
            lo = max(lo, cand)
            probe /= 2
            if probe < Fraction(1, 2**80):  # pragma: no cover
                raise ArithmeticError("failed to bracket the root")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        v = p_eval(k, mid)
        if v == 0:
            return (mid, mid)
        if v > 0:
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def existence_condition(k, lam):
    """True iff the index-k periodic orbit can exist: p_k(lam) <= 0."""
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("need 0 < lam < 1")
    return p_eval(k, lam) <= 0


def sk_code(k):
    """Length-4k code of the index-k orbit, read off the orbit of (-2k, 0)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rec = iterate(_sq(), 1, from_scaled(4, -2 * k, 0), 4 * k + 1)
    if rec.termination != "exact_repeat" or rec.period != 4 * k:  # pragma: no cover
        raise ArithmeticError(f"unexpected orbit structure for index {k}")
    return Code(rec.cycle_code())


def qk_closed_form(k, lam):
    """Closed-form coordinates of the index-k fixed point.

    x = -(1+lam)(1-lam^(2k)) / ((1-lam)(1+lam^(2k))),
    y =  (1+lam)(1-lam^k)^2 / ((1-lam)(1+lam^(2k))); at lam = 1 the curve
    extends continuously to the tile center (-2k, 0).
    """
    lam = Fraction(lam)
    if not 0 < lam <= 1:
        raise ValueError("need 0 < lam <= 1")
    if lam == 1:
        return from_scaled(4, -2 * k, 0)
    den = (1 - lam) * (1 + lam ** (2 * k))
    x = -(1 + lam) * (1 - lam ** (2 * k)) / den
    y = (1 + lam) * (1 - lam**k) ** 2 / den
    return from_scaled(4, x, y)


def yhat(k, lam):
    """y-coordinate of the last subdivision point on the rotated segment:
    the convex combination ((1-t^(k-1)) y_k + (t^(k-1)-t^k) x_k) / (1-t^k)."""
    lam = Fraction(lam)
    q = qk_closed_form(k, lam)
    x = real_part(q).coeffs[0]
    y = imag_scaled(q).coeffs[0]
    den = 1 - lam**k
    return ((1 - lam ** (k - 1)) * y + (lam ** (k - 1) - lam**k) * x) / den


@dataclass
class TransitionCheck:
    index: int
    vertex_label: int
    identity_ok: bool
    wedge_margins: tuple  # float signed margins of the two wedge constraints


@dataclass
class DegenerateOrbit:
    """The 4k-point boundary orbit built from the index-k fixed point by
    quarter-turn symmetry and geometric subdivision of one segment."""

    k: int
    lam: Fraction
    E: list
    F: list
    G: list
    H: list
    transitions: list

    def all_identities_hold(self):
        return all(t.identity_ok for t in self.transitions)

    def worst_margin(self):
        return min(min(t.wedge_margins) for t in self.transitions)


def _rot90(z):
    # counterclockwise quarter turn: multiply by i = zeta_4
    return z * CycloNum.zeta(4)


# vertex the points of each family reflect on: E -> (1,-1), F -> (1,1),
# G -> (-1,1), H -> (-1,-1); labels in the CCW square are 4, 1, 2, 3.
_FAMILY_VERTEX_LABEL = (4, 1, 2, 3)


def degenerate_orbit(k, lam):
    """Construct the 4k points and verify every transition.

    Each transition is checked two ways: the affine identity
    (1+lam) * v - lam * p == p_next holds exactly (it is an algebraic
    identity in lam), and the wedge membership margins of p at its coded
    vertex are reported (they vanish exactly at the threshold root, so for
    a rational lam near it they are small but nonzero).
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("need 0 < lam < 1")
    H0 = qk_closed_form(k, lam)
    E0 = _rot90(H0)
    F0 = _rot90(E0)
    G0 = _rot90(F0)
    den = 1 - lam**k
    E = [E0]
    for j in range(1, k):
        t = (1 - lam**j) / den
        E.append(E0 + (H0 - E0) * t)
    F = [_rot90(z) for z in E]
    G = [_rot90(z) for z in F]
    H = [_rot90(z) for z in G]
    fams = (E, F, G, H)

    def succ(fam, j):
        # family advances by a half turn each step; index k wraps to the
        # quarter-turn-behind family at index 0 (E_k = H_0 and its rotations)
        fam2, j2 = (fam + 2) % 4, j + 1
        if j2 == k:
            fam2, j2 = (fam2 - 1) % 4, 0
        return fam2, j2

    P = _sq()
    transitions = []
    fam, j = 3, 0  # start at H_0
    for i in range(4 * k):
        cur = fams[fam][j]
        fam2, j2 = succ(fam, j)
        nxt = fams[fam2][j2]
        label = _FAMILY_VERTEX_LABEL[fam]
        v = P.vertices[label - 1]
        identity_ok = (v * (1 + lam) - cur * lam) == nxt
        vs = P.vertices
        nxt_v = vs[label % 4]
        prv_v = vs[(label - 2) % 4]
        m1 = cross_scaled(v - cur, nxt_v - cur).to_complex().real
        m2 = cross_scaled(v - cur, prv_v - cur).to_complex().real
        transitions.append(TransitionCheck(i, label, identity_ok, (m1, m2)))
        fam, j = fam2, j2
    return DegenerateOrbit(k, lam, E, F, G, H, transitions)


# -- attractor counting -------------------------------------------------------


class _FloatSquare:
    """Hardware-float mirror of the square dynamics, for screening only."""

    VERTS = ((1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0))

    @classmethod
    def select(cls, x, y):
        vs = cls.VERTS
        for i in range(4):
            vx, vy = vs[i]
            nx, ny = vs[(i + 1) % 4]
            px, py = vs[(i - 1) % 4]
            dx, dy = vx - x, vy - y
            c1 = dx * (ny - y) - dy * (nx - x)
            c2 = dx * (py - y) - dy * (px - x)
            if c1 > 0.0 and c2 > 0.0:
                return i + 1
        return None

    @classmethod
    def orbit_code(cls, x, y, lam, max_steps):
        code = []
        for _ in range(max_steps):
            lbl = cls.select(x, y)
            if lbl is None:
                return code, False
            vx, vy = cls.VERTS[lbl - 1]
            x = (1 + lam) * vx - lam * x
            y = (1 + lam) * vy - lam * y
            code.append(lbl)
            if len(code) % 512 == 0 and _tail_period(code) is not None:
                return code, True
        return code, _tail_period(code) is not None


def _tail_period(code, window=240, max_period=120):
    if len(code) < 2 * window:
        return None
    tail = code[-2 * window :]
    m = len(tail)
    for p in range(1, max_period + 1):
        if all(tail[i] == tail[i + p] for i in range(m - p)):
            return p
    return None


def count_attractors(lam, samples=200, max_steps=10_000, seed=0):
    """Number of distinct periodic attractors reached from random starts.

    Orbits are screened with hardware floats; every candidate code is then
    certified exactly (fixed point + code reproduction) before it counts.
    Undecided orbits are excluded from the count.
    """
    count, _, _ = count_attractors_detail(lam, samples, max_steps, seed)
    return count


def count_attractors_detail(lam, samples=200, max_steps=10_000, seed=0):
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("need 0 < lam < 1")
    lamf = float(lam)
    radius = float(Fraction(1 + lam, 1 - lam)) * 2**0.5
    rng = random.Random(seed)
    candidates = {}
    undecided = 0
    for _ in range(samples):
        while True:
            x = rng.uniform(-radius, radius)
            y = rng.uniform(-radius, radius)
            if x * x + y * y <= radius * radius and max(abs(x), abs(y)) > 1.0:
                break
        code, ok = _FloatSquare.orbit_code(x, y, lamf, max_steps)
        p = _tail_period(code) if ok else None
        if p is None:
            undecided += 1
            continue
        word = tuple(code[-p:])
        canon = Code(word).canonical()
        candidates.setdefault(canon, 0)
        candidates[canon] += 1
    P = _sq()
    verified = set()
    for canon in candidates:
        c = Code(canon)
        primitive = Code(canon[: c.period])
        if validate_periodic(P, primitive, lam):
            verified.add(Code(primitive.canonical()).word)
    return len(verified), sorted(verified), undecided
