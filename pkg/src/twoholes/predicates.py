"""Robust orientation and in-circle predicates.

Both predicates first evaluate in floating point and accept the result when
it clears a forward error bound (Shewchuk's stage-A bounds). Otherwise the
determinant is recomputed exactly with rationals; every binary float is an
exact rational, so the sign returned is always the true sign.

``incircle_sos`` adds a symbolic perturbation of the lifted heights that
breaks cocircular ties consistently (lower vertex index = larger
perturbation), which makes the Delaunay triangulation of any point set
unique.
"""

from __future__ import annotations

from fractions import Fraction

_EPS = 2.0**-53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def orient2d(a, b, c) -> float:
    """Twice the signed area of triangle ``abc``; positive if counterclockwise."""
    acx = a[0] - c[0]
    bcx = b[0] - c[0]
    acy = a[1] - c[1]
    bcy = b[1] - c[1]
    detl = acx * bcy
    detr = acy * bcx
    det = detl - detr
    bound = _CCW_BOUND * (abs(detl) + abs(detr))
    if det > bound or -det > bound:
        return det
    return float(orient2d_exact(a, b, c))


def orient2d_exact(a, b, c) -> Fraction:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    return (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)


def incircle(a, b, c, d) -> float:
    """Positive if ``d`` lies inside the circle through ccw ``a, b, c``."""
    adx = a[0] - d[0]
    bdx = b[0] - d[0]
    cdx = c[0] - d[0]
    ady = a[1] - d[1]
    bdy = b[1] - d[1]
    cdy = c[1] - d[1]

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    bound = _ICC_BOUND * permanent
    if det > bound or -det > bound:
        return det
    return float(incircle_exact(a, b, c, d))


def incircle_exact(a, b, c, d) -> Fraction:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    rows = []
    for p in (a, b, c):
        x = Fraction(p[0]) - dx
        y = Fraction(p[1]) - dy
        rows.append((x, y, x * x + y * y))
    (ax, ay, az), (bx, by, bz), (cx, cy, cz) = rows
    return az * (bx * cy - cx * by) + bz * (cx * ay - ax * cy) + cz * (ax * by - bx * ay)


def _lift_cofactors(a, b, c, d):
    # d(incircle)/d(lift_k) for k = a, b, c, d; they sum to zero.
    da = orient2d_exact(b, c, d)
    db = -orient2d_exact(a, c, d)
    dc = orient2d_exact(a, b, d)
    return da, db, dc, -(da + db + dc)


def incircle_sos(a, b, c, d, ia: int, ib: int, ic: int, id_: int) -> int:
    """Sign of ``incircle`` under a consistent symbolic perturbation.

    Never returns 0 when ``a, b, c`` is a proper (non-degenerate) triangle.
    """
    det = incircle(a, b, c, d)
    if det > 0:
        return 1
    if det < 0:
        return -1
    cof = _lift_cofactors(a, b, c, d)
    for _, k in sorted(((ia, 0), (ib, 1), (ic, 2), (id_, 3))):
        if cof[k] > 0:
            return 1
        if cof[k] < 0:
            return -1
    return 0
