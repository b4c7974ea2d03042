"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are stored in the power basis {1, zeta, ..., zeta^(phi(n)-1)} with
Fraction coefficients, reduced modulo the n-th cyclotomic polynomial.  The
representation is a canonical normal form: an element is zero exactly when
every coefficient is zero, which is what makes certified sign evaluation
possible (refinement only ever runs on provably nonzero inputs).

Numeric enclosures come from interval evaluations of cos(2*pi*k/n) and
sin(2*pi*k/n) (mpmath's interval module supplies those constants); all the
remaining interval arithmetic is exact rational endpoint arithmetic, so the
enclosures are mathematically guaranteed.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import iv

from .errors import ConductorMismatchError, NotRealError

_MAX_SIGN_PREC = 1 << 16

_ZERO = Fraction(0)
_ONE = Fraction(1)


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _poly_div_exact_int(num, den):
    # den is monic; division of integer polynomials known to be exact
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - dd - 1, -1, -1):
        c = num[i + dd]
        out[i] = c
        if c:
            for j, y in enumerate(den):
                num[i + j] -= c * y
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


_CYCLO_CACHE = {}


def cyclotomic_polynomial(n):
    """Monic integer coefficients of Phi_n, low degree first."""
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact_int(poly, cyclotomic_polynomial(d))
    poly = tuple(poly)
    _CYCLO_CACHE[n] = poly
    return poly


def _mpf_tuple_to_fraction(t):
    sign, man, exp, _ = t
    man = int(man)
    if exp >= 0:
        v = Fraction(man * (1 << exp))
    else:
        v = Fraction(man, 1 << -exp)
    return -v if sign else v


class RatInterval:
    """Closed interval with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi

    def __add__(self, other):
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def scaled(self, c):
        if c >= 0:
            return RatInterval(self.lo * c, self.hi * c)
        return RatInterval(self.hi * c, self.lo * c)

    def contains(self, v):
        return self.lo <= v <= self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def __repr__(self):
        return f"RatInterval({self.lo}, {self.hi})"


class Cyclotomic:
    """Per-conductor context: modulus, reduction tables, trig caches."""

    __slots__ = (
        "n", "phi", "modulus", "red_rows", "zeta_rows", "_trig", "_float_trig",
    )

    def __init__(self, n):
        if n < 3:
            raise ValueError("conductor must be >= 3")
        self.n = n
        mod = cyclotomic_polynomial(n)
        phi = len(mod) - 1
        self.phi = phi
        self.modulus = mod
        top = max(2 * phi - 2, n - 1)
        rows = {}
        base = [-c for c in mod[:phi]]
        rows[phi] = base
        for m in range(phi + 1, top + 1):
            prev = rows[m - 1]
            shifted = [0] + prev[:-1]
            carry = prev[-1]
            if carry:
                shifted = [s + carry * b for s, b in zip(shifted, base)]
            rows[m] = shifted
        self.red_rows = rows
        zrows = []
        for k in range(n):
            if k < phi:
                row = [0] * phi
                row[k] = 1
            else:
                row = list(rows[k])
            zrows.append(tuple(row))
        self.zeta_rows = zrows
        self._trig = {}
        self._float_trig = [
            (math.cos(2.0 * math.pi * k / n), math.sin(2.0 * math.pi * k / n))
            for k in range(phi)
        ]

    def trig(self, prec):
        """Certified (cos, sin) enclosures of zeta^k for k < phi at ``prec`` bits."""
        cached = self._trig.get(prec)
        if cached is not None:
            return cached
        old = iv.prec
        try:
            iv.prec = prec
            out = []
            for k in range(self.phi):
                theta = 2 * iv.pi * k / self.n
                c = iv.cos(theta)
                s = iv.sin(theta)
                clo, chi = (_mpf_tuple_to_fraction(t) for t in c._mpi_)
                slo, shi = (_mpf_tuple_to_fraction(t) for t in s._mpi_)
                out.append((RatInterval(clo, chi), RatInterval(slo, shi)))
        finally:
            iv.prec = old
        out = tuple(out)
        self._trig[prec] = out
        return out


_CONTEXTS = {}


def context(n):
    ctx = _CONTEXTS.get(n)
    if ctx is None:
        ctx = Cyclotomic(n)
        _CONTEXTS[n] = ctx
    return ctx


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected int or Fraction, got {type(v).__name__}")


class CycloNum:
    """An element of Q(zeta_n) in reduced power-basis normal form.

    Immutable; all operations return new values.  Mixed arithmetic with int
    and Fraction scalars is supported.
    """

    __slots__ = ("n", "coeffs", "_hash", "_cfloat")

    def __init__(self, n, coeffs):
        ctx = context(n)
        coeffs = tuple(_as_fraction(c) for c in coeffs)
        if len(coeffs) != ctx.phi:
            raise ValueError(
                f"need {ctx.phi} coefficients for conductor {n}, got {len(coeffs)}"
            )
        self.n = n
        self.coeffs = coeffs
        self._hash = None
        self._cfloat = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls(n, (_ZERO,) * context(n).phi)

    @classmethod
    def one(cls, n):
        return cls.from_rational(n, _ONE)

    @classmethod
    def from_rational(cls, n, q):
        ctx = context(n)
        coeffs = [_ZERO] * ctx.phi
        coeffs[0] = _as_fraction(q)
        return cls(n, coeffs)

    @classmethod
    def zeta(cls, n, k=1):
        ctx = context(n)
        row = ctx.zeta_rows[k % n]
        return cls(n, tuple(Fraction(c) for c in row))

    # -- basics ------------------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def is_real(self):
        return self == self.conj()

    def __eq__(self, other):
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n, self.coeffs))
            self._hash = h
        return h

    def __repr__(self):
        return f"CycloNum({self.serialize()!r})"

    def _check(self, other):
        if self.n != other.n:
            raise ConductorMismatchError(
                f"conductor mismatch: {self.n} vs {other.n}"
            )

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(self.n, other)
        elif not isinstance(other, CycloNum):
            return NotImplemented
        self._check(other)
        return CycloNum(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(self.n, other)
        elif not isinstance(other, CycloNum):
            return NotImplemented
        self._check(other)
        return CycloNum(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycloNum(self.n, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return CycloNum(self.n, tuple(a * c for a in self.coeffs))
        if not isinstance(other, CycloNum):
            return NotImplemented
        self._check(other)
        ctx = context(self.n)
        phi = ctx.phi
        a, b = self.coeffs, other.coeffs
        conv = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        rows = ctx.red_rows
        for m in range(2 * phi - 2, phi - 1, -1):
            c = conv[m]
            if c:
                row = rows[m]
                for j in range(phi):
                    r = row[j]
                    if r:
                        conv[j] += c * r
        return CycloNum(self.n, tuple(conv[:phi]))

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloNum.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        ctx = context(self.n)
        mod = [Fraction(c) for c in ctx.modulus]
        r0, r1 = mod, _trim(list(self.coeffs))
        s0, s1 = [], [_ONE]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element not invertible")  # pragma: no cover
        inv_c = 1 / r1[0]
        s1 = [c * inv_c for c in s1]
        # reduce s1 mod the modulus (degree may reach phi for tiny inputs)
        out = [_ZERO] * ctx.phi
        for k, c in enumerate(s1):
            if c:
                row = ctx.zeta_rows[k % ctx.n] if k >= ctx.phi else None
                if row is None:
                    out[k] += c
                else:
                    for j, r in enumerate(row):
                        if r:
                            out[j] += c * r
        return CycloNum(self.n, tuple(out))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self * (1 / c)
        if not isinstance(other, CycloNum):
            return NotImplemented
        self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conj(self):
        """Complex conjugation (zeta -> zeta^(n-1)); a field automorphism."""
        ctx = context(self.n)
        out = [_ZERO] * ctx.phi
        for j, c in enumerate(self.coeffs):
            if c:
                row = ctx.zeta_rows[(self.n - j) % self.n]
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return CycloNum(self.n, tuple(out))

    # -- numeric evaluation --------------------------------------------------

    def enclosure(self, prec):
        """(re, im) RatIntervals guaranteed to contain this element's value."""
        ctx = context(self.n)
        trig = ctx.trig(prec)
        re = RatInterval(_ZERO, _ZERO)
        im = RatInterval(_ZERO, _ZERO)
        for c, (ck, sk) in zip(self.coeffs, trig):
            if c:
                re = re + ck.scaled(c)
                im = im + sk.scaled(c)
        return re, im

    def to_complex(self):
        v = self._cfloat
        if v is None:
            ctx = context(self.n)
            re = im = 0.0
            for c, (ck, sk) in zip(self.coeffs, ctx._float_trig):
                if c:
                    f = float(c)
                    re += f * ck
                    im += f * sk
            v = complex(re, im)
            self._cfloat = v
        return v

    # -- serialization -------------------------------------------------------

    def serialize(self):
        """``n:c0/d0,c1/d1,...`` with coefficients in lowest terms."""
        body = ",".join(f"{c.numerator}/{c.denominator}" for c in self.coeffs)
        return f"{self.n}:{body}"

    @classmethod
    def parse(cls, text):
        head, sep, body = text.partition(":")
        if not sep:
            raise ValueError(f"bad CycloNum literal: {text!r}")
        n = int(head)
        parts = body.split(",")
        coeffs = []
        for p in parts:
            num, sep, den = p.partition("/")
            if not sep:
                raise ValueError(f"bad coefficient {p!r} in {text!r}")
            coeffs.append(Fraction(int(num), int(den)))
        return cls(n, coeffs)


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(a, b):
    out = list(a) + [_ZERO] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [_ZERO] * max(1, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _trim(q), _trim(a[: len(b) - 1])


def sign_of_real(z, _checked=False):
    """Exact sign of a real field element under zeta -> exp(2*pi*i/n).

    Zero is decided by the normal form alone; for provably nonzero input the
    enclosure is refined with doubling precision until it excludes zero.
    """
    if not _checked and not z.is_real():
        raise NotRealError(f"element is not real: {z.serialize()}")
    if z.is_zero():
        return 0
    if z.is_rational():
        c = z.coeffs[0]
        return 1 if c > 0 else -1
    prec = 64
    while prec <= _MAX_SIGN_PREC:
        re, _ = z.enclosure(prec)
        if re.lo > 0:
            return 1
        if re.hi < 0:
            return -1
        prec *= 2
    raise ArithmeticError(  # pragma: no cover - unreachable for normal forms
        f"sign undecided at {_MAX_SIGN_PREC} bits: {z.serialize()}"
    )


def approximate(z, precision_bits):
    """Certified dyadic enclosures ((re_lo, re_hi), (im_lo, im_hi)).

    Endpoints are Fractions on the 2^-(precision_bits+2) grid; enclosures at
    doubled precision are nested inside coarser ones.
    """
    if precision_bits < 16:
        raise ValueError("precision_bits must be >= 16")
    if z.is_zero():
        zz = (_ZERO, _ZERO)
        return zz, zz
    msum = sum(abs(c) for c in z.coeffs)
    mbits = max(0, msum.numerator.bit_length() - msum.denominator.bit_length() + 1)
    work = precision_bits + 16 + mbits
    re, im = z.enclosure(work)
    grid = 1 << (precision_bits + 2)

    def outward(ival):
        lo_n = ival.lo.numerator * grid
        lo = Fraction((lo_n // ival.lo.denominator) - 1, grid)
        hi_n = ival.hi.numerator * grid
        hi = Fraction(-((-hi_n) // ival.hi.denominator) + 1, grid)
        return lo, hi

    return outward(re), outward(im)
