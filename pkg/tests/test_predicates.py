from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from twoholes.predicates import incircle, incircle_exact, incircle_sos, orient2d, orient2d_exact

coord = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@given(point, point, point)
def test_orient2d_sign_is_exact(a, b, c):
    assert _sign(orient2d(a, b, c)) == _sign(orient2d_exact(a, b, c))


@given(point, point, point, point)
def test_incircle_sign_is_exact(a, b, c, d):
    assert _sign(incircle(a, b, c, d)) == _sign(incircle_exact(a, b, c, d))


@given(point, point, st.floats(0, 1))
def test_points_on_a_line_are_collinear(a, b, t):
    # a point built exactly on the segment, using rationals to stay exact
    ta = Fraction(t)
    c = tuple(float(Fraction(p) + ta * (Fraction(q) - Fraction(p))) for p, q in zip(a, b))
    if all(Fraction(ci) == Fraction(p) + ta * (Fraction(q) - Fraction(p)) for ci, p, q in zip(c, a, b)):
        assert orient2d(a, b, c) == 0


def test_near_degenerate_orientation():
    a, b = (0.5, 0.5), (12.0, 12.0)
    c = (24.0, 24.0 + 2.0**-48)
    assert orient2d(a, b, c) > 0
    assert orient2d(a, c, b) < 0


def test_cocircular_square():
    a, b, c, d = (0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)
    assert incircle(a, b, c, d) == 0
    # symbolic perturbation breaks the tie, and consistently under relabeling
    s = incircle_sos(a, b, c, d, 0, 1, 2, 3)
    assert s != 0
    assert incircle_sos(b, c, a, d, 1, 2, 0, 3) == s


def test_incircle_inside_outside():
    a, b, c = (0.0, 0.0), (2.0, 0.0), (0.0, 2.0)
    assert incircle(a, b, c, (0.5, 0.5)) > 0
    assert incircle(a, b, c, (3.0, 3.0)) < 0
