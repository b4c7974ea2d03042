"""The outer billiards map with contraction: vertex selection, stepping,
symbolic coding and orbit iteration.

The map sends x to (1 + lam) * v - lam * x, where v is the unique vertex of P
such that P lies on the left of the ray from x through v; lam = 1 is the
uncontracted map.  The singular set S is the union of rays extending the
sides of P, where two vertices qualify and the choice is ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GeometryError, StepDomainError
from .field import CycloNum, sign_of_real
from .geometry import cross_scaled, norm_sq, point_xy


@dataclass(frozen=True)
class Selection:
    kind: str  # "vertex" | "singular" | "inside"
    label: int | None = None
    candidates: tuple[int, ...] = ()


def _neighbor_labels(m, label):
    nxt = label % m + 1
    prv = (label - 2) % m + 1
    return nxt, prv


def _wedge_signs(P, x, label):
    vs = P.vertices
    m = len(vs)
    v = vs[label - 1]
    nxt, prv = _neighbor_labels(m, label)
    s1 = sign_of_real(cross_scaled(v - x, vs[nxt - 1] - x), _checked=True)
    s2 = sign_of_real(cross_scaled(v - x, vs[prv - 1] - x), _checked=True)
    return s1, s2


def _float_guess(P, x):
    fx = x.to_complex()
    vs = [v.to_complex() for v in P.vertices]
    m = len(vs)
    best = None
    for i in range(m):
        v = vs[i]
        dx, dy = v.real - fx.real, v.imag - fx.imag
        nx = vs[(i + 1) % m]
        pv = vs[(i - 1) % m]
        c1 = dx * (nx.imag - fx.imag) - dy * (nx.real - fx.real)
        c2 = dx * (pv.imag - fx.imag) - dy * (pv.real - fx.real)
        if c1 > 0.0 and c2 > 0.0:
            return i + 1
        if best is None and c1 > -1e-12 and c2 > -1e-12:
            best = i + 1
    return best


def select_vertex(P, x):
    """Which vertex x reflects on: a label, or Singular / Inside.

    A point strictly inside a vertex wedge (both neighbor orientations
    strictly positive) selects that vertex; that certificate also proves x
    is outside the closed polygon and off the singular set.
    """
    guess = _float_guess(P, x)
    if guess is not None:
        s1, s2 = _wedge_signs(P, x, guess)
        if s1 > 0 and s2 > 0:
            return Selection("vertex", guess)
    return _select_exhaustive(P, x)


def _select_exhaustive(P, x):
    if P.locate(x) != "exterior":
        return Selection("inside")
    vs = P.vertices
    m = len(vs)
    cands = []
    for i in range(m):
        v = vs[i]
        ok = True
        for j in range(m):
            if j == i:
                continue
            if sign_of_real(cross_scaled(v - x, vs[j] - x), _checked=True) < 0:
                ok = False
                break
        if ok:
            cands.append(i + 1)
    if len(cands) == 1:
        return Selection("vertex", cands[0])
    if len(cands) == 2:
        return Selection("singular", None, tuple(cands))
    raise GeometryError(  # pragma: no cover - impossible for convex P
        f"vertex selection found {len(cands)} candidates"
    )


def _resolve_singular(P, x, candidates, side):
    # both candidates lie on the ray from x; "right" takes the limit from
    # the right of the outward ray direction (the nearer vertex), "left"
    # from the other side (the farther one).
    a, b = (P.vertices[c - 1] for c in candidates)
    da = sign_of_real(norm_sq(a - x) - norm_sq(b - x), _checked=True)
    near, far = (candidates if da < 0 else candidates[::-1])
    return near if side == "right" else far


def step(P, lam, x, side=None):
    """One application of the map: y = (1 + lam) * v - lam * x, exactly.

    side in {None, "left", "right"} resolves singular inputs; None refuses
    them.  Raises StepDomainError for inside/unresolved-singular points.
    """
    lam = Fraction(lam)
    if not 0 < lam <= 1:
        raise ValueError("need 0 < lam <= 1")
    sel = select_vertex(P, x)
    if sel.kind == "inside":
        raise StepDomainError("inside")
    if sel.kind == "singular":
        if side not in ("left", "right"):
            raise StepDomainError("singular")
        label = _resolve_singular(P, x, sel.candidates, side)
    else:
        label = sel.label
    v = P.vertices[label - 1]
    return v * (1 + lam) - x * lam, label


@dataclass
class OrbitRecord:
    """Recorded orbit with its code and termination reason.

    termination is "cap_reached", "exact_repeat" (with preperiod/period) or
    "hit_singular" (with singular_step).  code[i] is the label the i-th
    recorded point reflects on.
    """

    start: CycloNum
    lam: Fraction
    points: list = field(default_factory=list)
    code: list = field(default_factory=list)
    termination: str = "cap_reached"
    preperiod: int | None = None
    period: int | None = None
    singular_step: int | None = None

    def cycle_code(self):
        if self.termination != "exact_repeat":
            raise ValueError("orbit did not close up")
        return tuple(self.code[self.preperiod : self.preperiod + self.period])


def iterate(P, lam, x, max_steps, side=None):
    """Iterate the map, recording points and code.

    Stops at max_steps, at an exact point repetition (hash on the normal
    form; no tolerances), or upon hitting the singular set.
    """
    lam = Fraction(lam)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    rec = OrbitRecord(start=x, lam=lam, points=[x])
    seen = {x: 0}
    cur = x
    for k in range(max_steps):
        try:
            cur, label = step(P, lam, cur, side=side)
        except StepDomainError:
            rec.termination = "hit_singular"
            rec.singular_step = k
            return rec
        rec.code.append(label)
        rec.points.append(cur)
        prev = seen.get(cur)
        if prev is not None:
            rec.termination = "exact_repeat"
            rec.preperiod = prev
            rec.period = k + 1 - prev
            return rec
        seen[cur] = k + 1
    rec.termination = "cap_reached"
    return rec


def orbit_bound(P, lam, norm="euclidean"):
    """(1 + lam)/(1 - lam) * max_i ||v_i|| in the requested norm."""
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("bound defined for 0 < lam < 1 only")
    worst = 0.0
    for v in P.vertices:
        x, y = point_xy(v)
        if norm == "euclidean":
            worst = max(worst, (x * x + y * y) ** 0.5)
        elif norm == "sup":
            worst = max(worst, abs(x), abs(y))
        else:
            raise ValueError(f"unknown norm {norm!r}")
    return float(Fraction(1 + lam, 1 - lam)) * worst


def orbit_to_text(rec):
    """Line-oriented export: one serialized point per line, then a code line."""
    lines = [p.serialize() for p in rec.points]
    lines.append("code=" + ",".join(str(c) for c in rec.code))
    return "\n".join(lines) + "\n"


# -- symbolic codes ----------------------------------------------------------


def least_rotation(seq):
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    s = list(seq) + list(seq)
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def primitive_period(word):
    m = len(word)
    for p in range(1, m + 1):
        if m % p == 0 and all(word[i] == word[i % p] for i in range(m)):
            return p
    return m  # pragma: no cover


class Code:
    """Finite word of vertex labels; the orbit/tile itinerary.

    The canonical form doubles odd-length words and takes the least cyclic
    rotation, so equal orbits compare equal regardless of phase.
    """

    __slots__ = ("word", "_canonical", "_period")

    def __init__(self, word):
        word = tuple(int(a) for a in word)
        if not word:
            raise ValueError("empty code")
        if any(a < 1 for a in word):
            raise ValueError("labels are 1-based")
        self.word = word
        self._canonical = None
        self._period = None

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __eq__(self, other):
        if not isinstance(other, Code):
            return NotImplemented
        return self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def __repr__(self):
        return f"Code({','.join(str(a) for a in self.word)})"

    def validate_labels(self, n):
        if any(a > n for a in self.word):
            raise ValueError(f"label out of range for n={n}")

    @property
    def period(self):
        p = self._period
        if p is None:
            p = primitive_period(self.word)
            self._period = p
        return p

    def doubled_even(self):
        """The word, repeated once if its length is odd."""
        w = self.word
        return w if len(w) % 2 == 0 else w + w

    def canonical(self):
        c = self._canonical
        if c is None:
            w = self.doubled_even()
            k = least_rotation(w)
            c = tuple(w[k:] + w[:k])
            self._canonical = c
        return c

    def canonical_code(self):
        return Code(self.canonical())

    def shifted(self, j=1):
        w = self.word
        j %= len(w)
        return Code(w[j:] + w[:j])

    def serialize(self):
        return ",".join(str(a) for a in self.word)

    @classmethod
    def parse(cls, text):
        return cls(int(p) for p in text.split(","))
