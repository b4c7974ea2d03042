"""Square family: threshold polynomials, closed forms, degenerate orbits,
attractor counting."""

import random
from fractions import Fraction

from obc.geometry import imag_scaled, point_xy
from obc.periodic import code_fixed_point, validate_periodic
from obc.square import (
    count_attractors_detail,
    degenerate_orbit,
    existence_condition,
    existence_identity_holds,
    lambda_k,
    p_eval,
    qk_closed_form,
    sk_code,
    square_polygon,
    yhat,
)

rng = random.Random(31415)

SQ = square_polygon()


def float_root(f, lo, hi, iters=80):
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo


def test_p1_and_lambda1():
    lam = Fraction(2, 7)
    assert p_eval(1, lam) == -lam + lam * lam
    assert lambda_k(1) == (0, 0)


def test_lambda2_and_lambda3_against_independent_bisection():
    lo, hi = lambda_k(2, Fraction(1, 10**10))
    # p_2 factors as (t - 1)(t^3 + t^2 - 1); bisect the cubic in floats
    root = float_root(lambda t: -(t**3 + t**2 - 1), 0.0, 1.0)
    assert abs(float(lo) - root) < 1e-9
    assert abs(float(lo) - 0.7548776662) < 1e-9
    lo3, hi3 = lambda_k(3, Fraction(1, 10**10))
    root3 = float_root(lambda t: p_eval(3, Fraction(t).limit_denominator(10**12)), 0.0, 1.0)
    assert abs(float(lo3) - root3) < 1e-8
    assert abs(float(lo3) - 0.8898912458) < 1e-9
    assert hi - lo <= Fraction(1, 10**10)


def test_lambda_k_monotone_to_one():
    prev_hi = None
    for k in range(1, 13):
        lo, hi = lambda_k(k, Fraction(1, 10**12))
        assert hi - lo <= Fraction(1, 10**12)
        if prev_hi is not None:
            assert lo > prev_hi
        prev_hi = hi
    assert prev_hi > Fraction(99, 100)


def test_pk_sign_shape():
    for k in (2, 3, 5, 8, 10):
        lo, hi = lambda_k(k, Fraction(1, 10**9))
        for j in range(1, 100):
            probe = lo * Fraction(j, 100)
            if probe > 0:
                assert p_eval(k, probe) > 0
            probe2 = hi + (1 - hi) * Fraction(j, 100)
            if probe2 < 1:
                assert p_eval(k, probe2) < 0


def test_sk_code_examples():
    c1 = sk_code(1)
    verts = [point_xy(SQ.vertices[a - 1]) for a in c1.word]
    assert verts == [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
    c3 = sk_code(3)
    assert len(c3.word) == 12
    xs = [int(point_xy(SQ.vertices[a - 1])[0]) for a in c3.word]
    assert xs == [-1, 1, -1, 1, -1, 1, 1, -1, 1, -1, 1, -1]
    # x-coordinates alternate in two runs for every k
    for k in (2, 4, 5):
        xs = [int(point_xy(SQ.vertices[a - 1])[0]) for a in sk_code(k).word]
        assert xs[0] == -1
        for i in range(1, 2 * k):
            assert xs[i] == -xs[i - 1]
        assert xs[2 * k] == xs[2 * k - 1]
        for i in range(2 * k + 1, 4 * k):
            assert xs[i] == -xs[i - 1]


def test_qk_closed_form_values():
    assert qk_closed_form(1, Fraction(1, 2)) == code_fixed_point(SQ, sk_code(1), Fraction(1, 2))
    q = qk_closed_form(1, Fraction(1, 2))
    assert point_xy(q) == (-1.8, 0.6)
    for k in (1, 2, 5):
        assert point_xy(qk_closed_form(k, 1)) == (-2.0 * k, 0.0)


def test_qk_matches_fixed_point_formula():
    for k in range(1, 9):
        code = sk_code(k)
        for _ in range(6):
            lam = Fraction(rng.randint(1, 99), 100)
            assert qk_closed_form(k, lam) == code_fixed_point(SQ, code, lam)


def test_existence_condition():
    assert p_eval(2, Fraction(1, 2)) == Fraction(5, 16)
    assert existence_condition(2, Fraction(1, 2)) is False
    assert existence_condition(2, Fraction(4, 5)) is True
    for k in (2, 3, 4):
        assert existence_condition(k, 1 - Fraction(1, 10**6)) is True


def test_existence_identity():
    for k in range(1, 11):
        assert existence_identity_holds(k)


def test_validate_periodic_straddles_threshold():
    for k in (2, 3):
        lo, hi = lambda_k(k, Fraction(1, 10**9))
        code = sk_code(k)
        assert validate_periodic(SQ, code, hi + Fraction(1, 100)) is True
        assert validate_periodic(SQ, code, lo - Fraction(1, 100)) is False


def test_degenerate_orbit_k2():
    lo, hi = lambda_k(2, Fraction(1, 10**9))
    mid = (lo + hi) / 2
    d = degenerate_orbit(2, mid)
    assert len(d.transitions) == 8
    assert d.all_identities_hold()
    assert d.worst_margin() > -1e-6
    # quarter-turn symmetry of the point set
    for fam_a, fam_b in ((d.E, d.F), (d.F, d.G), (d.G, d.H)):
        for a, b in zip(fam_a, fam_b):
            ax, ay = point_xy(a)
            bx, by = point_xy(b)
            assert abs(complex(bx, by) - complex(ax, ay) * 1j) < 1e-12
    # boundary value: the last subdivision point sits near y = -1
    yh = yhat(2, mid)
    assert abs(float(yh + 1)) < 1e-7
    assert imag_scaled(d.E[-1]).coeffs[0] == yh


def test_degenerate_orbit_k1_collapses():
    d = degenerate_orbit(1, Fraction(1, 10))
    assert len(d.E) == 1
    assert len(d.transitions) == 4
    assert d.all_identities_hold()
    # this is the valid index-1 orbit, well inside its wedges
    assert d.worst_margin() > 0.1


def test_yhat_threshold_equivalence():
    # yhat <= -1 exactly when p_k <= 0
    for k in (2, 3):
        lo, hi = lambda_k(k, Fraction(1, 10**9))
        below = lo - Fraction(1, 50)
        above = hi + Fraction(1, 50)
        assert yhat(k, below) > -1
        assert yhat(k, above) < -1


def test_count_attractors_small_sample():
    cnt, codes, undecided = count_attractors_detail(Fraction(1, 2), samples=60, max_steps=4000)
    assert cnt == 1
    assert undecided == 0
    assert [len(w) for w in codes] == [4]
