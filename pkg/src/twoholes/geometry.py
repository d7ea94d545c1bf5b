"""Obstacle configurations in the square Q = (-1, 1)^2 and their polygonal form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

BRANCHES = ("adjacent", "opposite", "opp_side", "cluster")
INSET_MODES = ("shift", "shrink")
DEFAULT_N_SIDE = 8
DEFAULT_M_CIRCLE = 32
DEFAULT_INSET = 5e-4
SNAP_TOL = 1e-12


class GeometryError(ValueError):
    pass


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class HoleSpec:
    center: Point2
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise GeometryError(f"hole radius must be positive, got {self.radius}")
        if not all(math.isfinite(c) for c in self.center):
            raise GeometryError("hole center must be finite")


@dataclass(frozen=True)
class CornerParams:
    """Scaled corner-layer offsets: the center sits at (1 - a r, 1 - b r)."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise GeometryError(f"corner parameters must be >= 1, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class Configuration:
    """Zero, one or two equal holes in Q.

    ``hole2`` is None for one-hole branches; both are None for the empty square.
    ``params`` keeps the branch parameters (xi, a, b, theta...) as sorted pairs.
    """

    hole1: HoleSpec | None
    hole2: HoleSpec | None
    r: float
    label: str = "custom"
    params: tuple[tuple[str, float], ...] = ()

    @property
    def holes(self) -> tuple[HoleSpec, ...]:
        return tuple(h for h in (self.hole1, self.hole2) if h is not None)

    def param(self, name: str, default=None):
        return dict(self.params).get(name, default)


@dataclass(frozen=True)
class PolygonDomain:
    """Outer polyline (ccw) with hole polylines (cw); closing vertex not repeated."""

    outer: np.ndarray
    holes: tuple[np.ndarray, ...] = ()
    inset: float = 0.0
    hole_centers: tuple[Point2, ...] = field(default=())

    def area(self) -> float:
        return polygon_area(self.outer) + sum(polygon_area(h) for h in self.holes)


def empty_config() -> Configuration:
    return Configuration(None, None, 0.0, "empty")


def _check_r(r: float) -> None:
    if not (0 < r < 0.5):
        raise GeometryError(f"r must lie in (0, 1/2), got {r}")


def _hole(x: float, y: float, r: float) -> HoleSpec:
    return HoleSpec(Point2(float(x), float(y)), float(r))


def make_branch_config(branch: str, r: float) -> Configuration:
    """Canonical placement of one of the four benchmark branches."""
    _check_r(r)
    if branch == "adjacent":
        return Configuration(_hole(-1 + r, 1 - r, r), _hole(1 - r, 1 - r, r), r, branch)
    if branch == "opposite":
        return Configuration(_hole(1 - r, 1 - r, r), _hole(-1 + r, -1 + r, r), r, branch)
    if branch == "opp_side":
        return Configuration(_hole(0.0, 1 - r, r), _hole(0.0, -1 + r, r), r, branch)
    if branch == "cluster":
        c1, c2 = contact_family(math.pi / 4)
        cfg = make_same_corner_config(c1, c2, r)
        return replace(cfg, label="cluster", params=(("theta", math.pi / 4),))
    raise GeometryError(f"unknown branch {branch!r}; expected one of {BRANCHES}")


def make_side_config(xi: float, r: float) -> Configuration:
    """One hole tangent to the top side, centered at (xi, 1 - r)."""
    _check_r(r)
    if abs(xi) >= 1 - r:
        raise GeometryError(f"|xi| must be < 1 - r = {1 - r}, got {xi}")
    return Configuration(_hole(xi, 1 - r, r), None, r, "side", (("xi", float(xi)),))


def make_endpoint_config(a: float, r: float) -> Configuration:
    """Side hole at xi = 1 - a r; a = 1 is the corner-tangent hole."""
    _check_r(r)
    if a < 1:
        raise GeometryError(f"endpoint parameter a must be >= 1, got {a}")
    cfg = Configuration(_hole(1 - a * r, 1 - r, r), None, r, "endpoint", (("a", float(a)),))
    return cfg


def make_same_corner_config(c1: CornerParams, c2: CornerParams, r: float) -> Configuration:
    """Two holes in the top-right corner layer at (1 - a_i r, 1 - b_i r)."""
    _check_r(r)
    sep = math.hypot(c1.a - c2.a, c1.b - c2.b)
    if sep < 2 - 1e-12:
        raise GeometryError(f"scaled separation {sep:.6g} < 2")
    for c in (c1, c2):
        if 1 - c.a * r - r < -1 or 1 - c.b * r - r < -1:
            raise GeometryError("hole escapes the square")
    cfg = Configuration(
        _hole(1 - c1.a * r, 1 - c1.b * r, r),
        _hole(1 - c2.a * r, 1 - c2.b * r, r),
        r,
        "same_corner",
        (("a1", c1.a), ("a2", c2.a), ("b1", c1.b), ("b2", c2.b)),
    )
    return cfg


def contact_family(theta: float) -> tuple[CornerParams, CornerParams]:
    """Cross-axis contact pair: c1 = (1 + 2 cos t, 1), c2 = (1, 1 + 2 sin t)."""
    if not (0.0 <= theta <= math.pi / 2):
        raise GeometryError(f"theta must lie in [0, pi/2], got {theta}")
    return CornerParams(1 + 2 * math.cos(theta), 1.0), CornerParams(1.0, 1 + 2 * math.sin(theta))


def make_contact_config(theta: float, r: float) -> Configuration:
    c1, c2 = contact_family(theta)
    cfg = make_same_corner_config(c1, c2, r)
    return replace(cfg, label="contact", params=(("theta", float(theta)),))


def custom_config(centers, r: float, label: str = "custom") -> Configuration:
    holes = [_hole(x, y, r) for x, y in centers]
    if len(holes) > 2:
        raise GeometryError("at most two holes")
    holes += [None] * (2 - len(holes))
    return Configuration(holes[0], holes[1], float(r), label)


# ---------------------------------------------------------------- validation
@dataclass(frozen=True)
class ValidityReport:
    containment_margin: float
    separation_margin: float
    contained: bool
    disjoint: bool

    @property
    def valid(self) -> bool:
        return self.contained and self.disjoint

    def lines(self) -> list[str]:
        return [
            f"containment {'pass' if self.contained else 'fail'} margin={self.containment_margin:.6g}",
            f"separation {'pass' if self.disjoint else 'fail'} margin={self.separation_margin:.6g}",
        ]


def validate(config: Configuration, tol: float = 1e-12) -> ValidityReport:
    """Check closure containment in Q and disjointness; report slack of each."""
    holes = config.holes
    cont = math.inf
    for h in holes:
        cx, cy = h.center
        cont = min(cont, 1 - abs(cx) - h.radius, 1 - abs(cy) - h.radius)
    sep = math.inf
    if len(holes) == 2:
        h1, h2 = holes
        sep = math.dist(h1.center, h2.center) - (h1.radius + h2.radius)
    return ValidityReport(cont, sep, cont >= -tol, sep >= -tol)


# -------------------------------------------------------------- symmetries
D4 = ("id", "rot90", "rot180", "rot270", "flip_x", "flip_y", "flip_diag", "flip_anti")


def _d4_map(g: str, x: float, y: float) -> tuple[float, float]:
    return {
        "id": (x, y),
        "rot90": (-y, x),
        "rot180": (-x, -y),
        "rot270": (y, -x),
        "flip_x": (-x, y),  # mirror in the vertical axis
        "flip_y": (x, -y),
        "flip_diag": (y, x),
        "flip_anti": (-y, -x),
    }[g]


def apply_symmetry(config: Configuration, g: str, swap: bool = False) -> Configuration:
    """Image of ``config`` under a square symmetry, optionally swapping the holes."""
    if g not in D4:
        raise GeometryError(f"unknown symmetry {g!r}")
    new = []
    for h in (config.hole1, config.hole2):
        if h is None:
            new.append(None)
        else:
            new.append(HoleSpec(Point2(*_d4_map(g, *h.center)), h.radius))
    if swap:
        new.reverse()
    return replace(config, hole1=new[0], hole2=new[1])


# ------------------------------------------------------------ polygonization
def square_outline(n_side: int = DEFAULT_N_SIDE) -> np.ndarray:
    """Counterclockwise boundary of Q starting at (-1, -1), n_side segments per side."""
    if n_side < 1:
        raise GeometryError("n_side must be >= 1")
    s = -1.0 + 2.0 * np.arange(n_side) / n_side
    bottom = np.c_[s, -np.ones(n_side)]
    right = np.c_[np.ones(n_side), s]
    top = np.c_[-s, np.ones(n_side)]
    left = np.c_[-np.ones(n_side), -s]
    return np.vstack([bottom, right, top, left])


def regular_polygon(center, radius: float, m: int) -> np.ndarray:
    """Clockwise m-gon inscribed in the circle, first vertex at angle 0."""
    k = np.arange(m)
    ang = -2.0 * np.pi * k / m
    pts = np.c_[center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)]
    # exact axis-aligned vertices where the angle is a multiple of pi/2
    for j in range(m):
        q, rem = divmod(4 * j, m)
        if rem == 0:
            c, s = [(1, 0), (0, -1), (-1, 0), (0, 1)][q % 4]
            pts[j] = (center[0] + radius * c, center[1] + radius * s)
    return pts


def polygon_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def inset_hole(h: HoleSpec, inset: float, mode: str) -> tuple[Point2, float]:
    """Center and circumradius of the discretized hole after the inset."""
    if mode == "shrink":
        return h.center, h.radius - inset
    if mode == "shift":
        cx, cy = h.center
        return Point2(cx - inset * np.sign(cx), cy - inset * np.sign(cy)), h.radius
    raise GeometryError(f"unknown inset mode {mode!r}")


def polygonize(
    config: Configuration,
    n_side: int = DEFAULT_N_SIDE,
    m_circle: int = DEFAULT_M_CIRCLE,
    inset: float = DEFAULT_INSET,
    inset_mode: str = "shift",
) -> PolygonDomain:
    """Replace the square and the disks by polylines.

    ``shrink`` inscribes the m-gon in the circle of radius r - inset about the
    same center. ``shift`` keeps radius r and moves every nonzero center
    coordinate by ``inset`` toward the origin, which opens a gap of ``inset``
    at each tangency with the square.
    """
    if m_circle < 8:
        raise GeometryError("m_circle must be >= 8")
    if inset < 0:
        raise GeometryError("inset must be >= 0")
    holes = []
    centers = []
    for h in config.holes:
        if inset >= h.radius / 2:
            raise GeometryError(f"inset {inset} must be < r/2 = {h.radius / 2}")
        c, rad = inset_hole(h, inset, inset_mode)
        holes.append(regular_polygon(c, rad, m_circle))
        centers.append(c)
    outer = square_outline(n_side)
    holes = _snap(holes)
    dom = PolygonDomain(outer, tuple(holes), inset, tuple(centers))
    check_polygons(dom)
    return dom


def _snap(holes: list[np.ndarray]) -> list[np.ndarray]:
    # touching m-gons meet in vertices that differ by rounding; give them one position
    if len(holes) < 2:
        return holes
    a, b = holes[0].copy(), holes[1].copy()
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    i, j = np.nonzero(d <= SNAP_TOL)
    for ii, jj in zip(i, j):
        b[jj] = a[ii]
    return [a, b]


def _segments_of(poly: np.ndarray):
    return [(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]


def _proper_cross(p, q, r, s) -> bool:
    from .predicates import orient2d

    o1 = orient2d(p, q, r)
    o2 = orient2d(p, q, s)
    o3 = orient2d(r, s, p)
    o4 = orient2d(r, s, q)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    # collinear overlap counts as an intersection
    if o1 == 0 and o2 == 0:
        def proj(u):
            d = q - p
            return float(np.dot(u - p, d))

        lo, hi = sorted((proj(r), proj(s)))
        L = float(np.dot(q - p, q - p))
        return hi > 0 and lo < L and not (hi <= 0 or lo >= L)
    return False


def _inside(poly: np.ndarray, pt) -> bool:
    x, y = pt
    xs, ys = poly[:, 0], poly[:, 1]
    xj, yj = np.roll(xs, 1), np.roll(ys, 1)
    cross = ((ys > y) != (yj > y)) & (x < (xj - xs) * (y - ys) / (yj - ys + 1e-300) + xs)
    return bool(np.count_nonzero(cross) % 2)


def check_polygons(dom: PolygonDomain) -> None:
    """Raise if polylines are not simple, disjoint and nested as required.

    Two holes may share isolated vertices (a pinch point); any other contact
    is an error.
    """
    if polygon_area(dom.outer) <= 0:
        raise GeometryError("outer polyline must be counterclockwise")
    polys = [dom.outer, *dom.holes]
    for h in dom.holes:
        if polygon_area(h) >= 0:
            raise GeometryError("hole polylines must be clockwise")
        lo = dom.outer.min(axis=0)
        hi = dom.outer.max(axis=0)
        if (h.min(axis=0) <= lo).any() or (h.max(axis=0) >= hi).any():
            raise GeometryError("hole polygon touches or leaves the square")
    segs = [(k, s) for k, p in enumerate(polys) for s in _segments_of(p)]
    boxes = np.array([[min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1])] for _, (a, b) in segs])
    n = len(segs)
    for i in range(n):
        cand = np.nonzero(
            (boxes[i + 1 :, 0] <= boxes[i, 2])
            & (boxes[i + 1 :, 2] >= boxes[i, 0])
            & (boxes[i + 1 :, 1] <= boxes[i, 3])
            & (boxes[i + 1 :, 3] >= boxes[i, 1])
        )[0]
        for j in cand + i + 1:
            (p, q), (r, s) = segs[i][1], segs[j][1]
            if _proper_cross(p, q, r, s):
                raise GeometryError("polygons intersect after inset")
            # a vertex of one polyline in the interior of another's segment
            for u in (r, s):
                if not _same(u, p) and not _same(u, q) and _on_segment(p, q, u):
                    raise GeometryError("polygons touch along a segment")
    if len(dom.holes) == 2:
        a, b = dom.holes
        if any(_inside(a, v) for v in b if not any(_same(v, w) for w in a)):
            raise GeometryError("holes overlap")


def _same(u, v) -> bool:
    return u[0] == v[0] and u[1] == v[1]


def _on_segment(p, q, u) -> bool:
    from .predicates import orient2d

    if orient2d(p, q, u) != 0:
        return False
    return min(p[0], q[0]) <= u[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= u[1] <= max(p[1], q[1])


# ------------------------------------------------------------- serialization
def to_keyvalue(config: Configuration) -> str:
    lines = [f"branch={config.label}", f"r={float(config.r)!r}"]
    for k, v in config.params:
        lines.append(f"{k}={float(v)!r}")
    for i, h in enumerate(config.holes, 1):
        lines.append(f"hole{i}={float(h.center.x)!r},{float(h.center.y)!r},{float(h.radius)!r}")
    return "\n".join(lines) + "\n"


def from_keyvalue(text: str) -> Configuration:
    kv = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            k, v = line.split("=", 1)
            kv[k.strip()] = v.strip()
    holes = []
    for i in (1, 2):
        if f"hole{i}" in kv:
            x, y, rad = (float(t) for t in kv[f"hole{i}"].split(","))
            holes.append(_hole(x, y, rad))
    holes += [None] * (2 - len(holes))
    label = kv.get("branch", "custom")
    params = tuple(sorted((k, float(v)) for k, v in kv.items() if k not in ("branch", "r") and not k.startswith("hole")))
    return Configuration(holes[0], holes[1], float(kv.get("r", 0.0)), label, params)
