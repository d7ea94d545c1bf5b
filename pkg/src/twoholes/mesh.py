"""Triangle meshes of polygonal domains: CDT generation and red refinement."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import cdt as _cdt
from .geometry import PolygonDomain, polygon_area

log = logging.getLogger(__name__)

INTERIOR = 0
OUTER = 1


def hole_marker(k: int) -> int:
    """Boundary marker of hole ``k`` (0-based)."""
    return 2 + k


@dataclass(frozen=True)
class TriMesh:
    """Vertices, ccw triangles, per-vertex markers and the constraint segments.

    ``regions`` is 0 for the physical domain; with ``keep_holes`` the interior
    of hole k is kept as region k + 1.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    markers: np.ndarray
    segments: np.ndarray
    segment_markers: np.ndarray
    regions: np.ndarray

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def edges(self) -> np.ndarray:
        return unique_edges(self.triangles)[0]

    def submesh(self, regions=(0,)) -> "TriMesh":
        """Mesh restricted to triangles of the given regions, vertices compacted."""
        keep = np.isin(self.regions, list(regions))
        tri = self.triangles[keep]
        used = np.unique(tri)
        remap = -np.ones(self.n_vertices, dtype=np.int64)
        remap[used] = np.arange(len(used))
        seg_ok = (remap[self.segments] >= 0).all(axis=1) if len(self.segments) else np.zeros(0, bool)
        return TriMesh(
            self.vertices[used],
            remap[tri],
            self.markers[used],
            remap[self.segments[seg_ok]],
            self.segment_markers[seg_ok],
            self.regions[keep],
        )


@dataclass(frozen=True)
class MeshStats:
    n_vertices: int
    n_triangles: int
    min_angle: float
    max_h: float


def _pslg(domain: PolygonDomain):
    pts: list[tuple[float, float]] = []
    index: dict[tuple[float, float], int] = {}
    segs: list[tuple[int, int]] = []
    marks: list[int] = []

    def add(p):
        key = (float(p[0]), float(p[1]))
        if key not in index:
            index[key] = len(pts)
            pts.append(key)
        return index[key]

    for marker, poly in [(OUTER, domain.outer)] + [(hole_marker(k), h) for k, h in enumerate(domain.holes)]:
        ids = [add(p) for p in poly]
        for i in range(len(ids)):
            segs.append((ids[i], ids[(i + 1) % len(ids)]))
            marks.append(marker)
    return pts, segs, marks


def triangulate(
    domain: PolygonDomain,
    keep_holes: bool = False,
    quality: dict | None = None,
    engine: str = "native",
    extra_points=None,
) -> TriMesh:
    """Constrained Delaunay triangulation of the region outer minus holes.

    ``quality`` (off by default) is forwarded to the Ruppert-style pass, e.g.
    ``{"min_angle": 25, "size": f}``. ``engine="geos"`` delegates to shapely's
    constrained Delaunay triangulation instead of the built-in one.
    """
    if engine == "geos":
        if keep_holes or quality or extra_points is not None:
            raise ValueError("the geos engine supports only the plain CDT")
        return _triangulate_geos(domain)
    if engine != "native":
        raise ValueError(f"unknown engine {engine!r}")
    pts, segs, marks = _pslg(domain)
    n_input = len(pts)
    if extra_points is not None:
        pts = pts + [tuple(map(float, p)) for p in extra_points]
    centers = domain.hole_centers or tuple(tuple(h.mean(axis=0)) for h in domain.holes)
    hole_seeds = []
    for k, c in enumerate(centers):
        rid = k + 1 if keep_holes else _cdt.EXTERIOR
        hole_seeds.append((rid, (float(c[0]), float(c[1]))))
    tri = _cdt.CDT(pts)
    idx = tri.index_of
    for (u, v), m in zip(segs, marks):
        tri.insert_segment(idx[u], idx[v], m)
        for w in (idx[u], idx[v]):
            if tri.marker[w] == 0:
                tri.marker[w] = m
    tri.mark_regions(hole_seeds)
    if quality is not None:
        q = dict(quality)
        q.setdefault("regions", (0,) + tuple(range(1, len(domain.holes) + 1)) if keep_holes else (0,))
        added = tri.refine_quality(**q)
        log.info("quality pass inserted %d vertices", added)
    verts, tris, regions, markers, s_out, sm_out = _cdt._extract(tri)
    n_steiner = len(verts) - n_input - (0 if extra_points is None else len(extra_points))
    if n_steiner > 0 and quality is None:
        log.info("constraint recovery inserted %d Steiner points", n_steiner)
    return _finish(verts, tris, markers, s_out, sm_out, regions)


def _finish(verts, tris, markers, segs, smarks, regions) -> TriMesh:
    V = np.asarray(verts, dtype=float)
    T = np.asarray(tris, dtype=np.int64).reshape(-1, 3)
    return TriMesh(
        V,
        T,
        np.asarray(markers, dtype=np.int64),
        np.asarray(segs, dtype=np.int64).reshape(-1, 2),
        np.asarray(smarks, dtype=np.int64),
        np.asarray(regions, dtype=np.int64),
    )


def _triangulate_geos(domain: PolygonDomain) -> TriMesh:
    import shapely

    poly = shapely.Polygon(domain.outer, [h for h in domain.holes])
    tris = shapely.constrained_delaunay_triangles(poly)
    index: dict[tuple[float, float], int] = {}
    verts = []
    T = []
    for g in tris.geoms:
        ids = []
        for q in list(g.exterior.coords)[:3]:
            key = (float(q[0]), float(q[1]))
            if key not in index:
                index[key] = len(verts)
                verts.append(key)
            ids.append(index[key])
        a, b, c = (verts[i] for i in ids)
        if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0:
            ids = [ids[0], ids[2], ids[1]]
        T.append(ids)
    pts, segs, marks = _pslg(domain)
    markers = np.zeros(len(verts), dtype=np.int64)
    seg_out = []
    for (u, v), m in zip(segs, marks):
        iu, iv = index[pts[u]], index[pts[v]]
        seg_out.append((min(iu, iv), max(iu, iv)))
        for w in (iu, iv):
            if markers[w] == 0:
                markers[w] = m
    return _finish(verts, T, markers, seg_out, marks, [0] * len(T))


# ------------------------------------------------------------- refinement
def unique_edges(triangles: np.ndarray):
    """Sorted unique edges and, per triangle corner, the index of the opposite edge.

    Returns ``(edges, tri_edge)`` where ``tri_edge[t, i]`` is the edge opposite
    vertex ``i`` of triangle ``t``.
    """
    t = triangles
    e = np.vstack([t[:, [1, 2]], t[:, [2, 0]], t[:, [0, 1]]])
    e.sort(axis=1)
    edges, inv = np.unique(e, axis=0, return_inverse=True)
    inv = inv.ravel().reshape(3, -1).T
    return edges, inv


def _edge_lookup(edges: np.ndarray, pairs: np.ndarray, n: int) -> np.ndarray:
    keys = edges[:, 0] * n + edges[:, 1]
    p = np.sort(pairs, axis=1)
    q = p[:, 0] * n + p[:, 1]
    pos = np.searchsorted(keys, q)
    if len(q) and (pos >= len(keys)).any() or len(q) and (keys[np.minimum(pos, len(keys) - 1)] != q).any():
        raise ValueError("segment is not a mesh edge")
    return pos


def refine_red(mesh: TriMesh) -> TriMesh:
    """Split every triangle into four similar children through edge midpoints."""
    n = mesh.n_vertices
    T = mesh.triangles
    edges, te = unique_edges(T)
    mids = 0.5 * (mesh.vertices[edges[:, 0]] + mesh.vertices[edges[:, 1]])
    m0 = te[:, 0] + n  # midpoint of edge (1, 2)
    m1 = te[:, 1] + n  # midpoint of edge (2, 0)
    m2 = te[:, 2] + n  # midpoint of edge (0, 1)
    a, b, c = T[:, 0], T[:, 1], T[:, 2]
    children = np.vstack(
        [
            np.c_[a, m2, m1],
            np.c_[m2, b, m0],
            np.c_[m1, m0, c],
            np.c_[m0, m1, m2],
        ]
    )
    new_markers = np.zeros(len(edges), dtype=np.int64)
    segs = mesh.segments
    if len(segs):
        pos = _edge_lookup(edges, segs, n)
        new_markers[pos] = mesh.segment_markers
        mid_ids = pos + n
        new_segs = np.vstack([np.c_[segs[:, 0], mid_ids], np.c_[mid_ids, segs[:, 1]]])
        new_smarks = np.concatenate([mesh.segment_markers, mesh.segment_markers])
    else:
        new_segs = segs
        new_smarks = mesh.segment_markers
    return TriMesh(
        np.vstack([mesh.vertices, mids]),
        children,
        np.concatenate([mesh.markers, new_markers]),
        np.sort(new_segs, axis=1),
        new_smarks,
        np.tile(mesh.regions, 4),
    )


def refine_times(mesh: TriMesh, k: int) -> TriMesh:
    for _ in range(k):
        mesh = refine_red(mesh)
    return mesh


# ----------------------------------------------------------------- checks
def signed_areas(mesh: TriMesh) -> np.ndarray:
    x = mesh.vertices[mesh.triangles]
    d1 = x[:, 1] - x[:, 0]
    d2 = x[:, 2] - x[:, 0]
    return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def stats(mesh: TriMesh) -> MeshStats:
    x = mesh.vertices[mesh.triangles]
    ang_min = math.inf
    for i in range(3):
        p = x[:, i]
        u = x[:, (i + 1) % 3] - p
        v = x[:, (i + 2) % 3] - p
        cross = np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
        dot = (u * v).sum(axis=1)
        ang_min = min(ang_min, float(np.degrees(np.arctan2(cross, dot)).min()))
    edges = mesh.edges()
    h = np.linalg.norm(mesh.vertices[edges[:, 0]] - mesh.vertices[edges[:, 1]], axis=1)
    return MeshStats(mesh.n_vertices, mesh.n_triangles, ang_min, float(h.max()))


def check_conformity(mesh: TriMesh) -> list[str]:
    """Problems found; empty when the mesh is a conforming triangulation.

    Every edge must be shared by at most two triangles, boundary edges (used
    once) must be constraint segments, and all triangles positively oriented.
    """
    problems = []
    if (signed_areas(mesh) <= 0).any():
        problems.append("non-positive triangle area")
    T = mesh.triangles
    e = np.sort(np.vstack([T[:, [0, 1]], T[:, [1, 2]], T[:, [2, 0]]]), axis=1)
    edges, counts = np.unique(e, axis=0, return_counts=True)
    if (counts > 2).any():
        problems.append("edge shared by more than two triangles")
    # oriented edges must not repeat (two triangles on the same side of an edge)
    oe = np.vstack([T[:, [0, 1]], T[:, [1, 2]], T[:, [2, 0]]])
    if len(np.unique(oe, axis=0)) != len(oe):
        problems.append("overlapping triangles")
    seg = {tuple(s) for s in np.sort(mesh.segments, axis=1)}
    for u, v in edges[counts == 1]:
        if (u, v) not in seg:
            problems.append(f"boundary edge ({u}, {v}) is not a constraint")
            break
    # every segment is a mesh edge
    eset = {tuple(x) for x in edges}
    if any(tuple(s) not in eset for s in np.sort(mesh.segments, axis=1)):
        problems.append("constraint segment missing from the mesh")
    # boundary vertices carry markers
    bv = np.unique(mesh.segments)
    if len(bv) and (mesh.markers[bv] == 0).any():
        problems.append("unmarked vertex on a constraint")
    return problems


def check_delaunay(mesh: TriMesh, tol: float = 1e-12) -> list[tuple[int, int]]:
    """Unconstrained interior edges whose opposite vertex lies inside the circumcircle.

    The in-circle determinant is scaled by the fourth power of the local edge
    length so ``tol`` is relative.
    """
    T = mesh.triangles
    edges, te = unique_edges(T)
    n_e = len(edges)
    owner = -np.ones((n_e, 2), dtype=np.int64)
    opp = -np.ones((n_e, 2), dtype=np.int64)
    for i in range(3):
        ids = te[:, i]
        first = owner[ids, 0] < 0
        for slot, sel in ((0, first), (1, ~first)):
            owner[ids[sel], slot] = np.nonzero(sel)[0]
            opp[ids[sel], slot] = T[sel, i]
    interior = (owner >= 0).all(axis=1)
    seg = {tuple(s) for s in np.sort(mesh.segments, axis=1)}
    P = mesh.vertices
    bad = []
    for k in np.nonzero(interior)[0]:
        u, v = edges[k]
        if (u, v) in seg:
            continue
        t = T[owner[k, 0]]
        d = P[opp[k, 1]]
        a, b, c = P[t[0]], P[t[1]], P[t[2]]
        m = np.array([[*(a - d), np.dot(a - d, a - d)], [*(b - d), np.dot(b - d, b - d)], [*(c - d), np.dot(c - d, c - d)]])
        scale = np.linalg.norm(P[u] - P[v]) ** 4
        if np.linalg.det(m) > tol * scale:
            bad.append((int(u), int(v)))
    return bad


def total_area(mesh: TriMesh) -> float:
    return float(signed_areas(mesh).sum())


def domain_area(domain: PolygonDomain) -> float:
    return polygon_area(domain.outer) + sum(polygon_area(h) for h in domain.holes)


# ----------------------------------------------------------------- export
def to_text(mesh: TriMesh) -> str:
    out = [f"vertices {mesh.n_vertices}"]
    for i, ((x, y), m) in enumerate(zip(mesh.vertices, mesh.markers)):
        out.append(f"{i} {float(x)!r} {float(y)!r} {m}")
    out.append(f"triangles {mesh.n_triangles}")
    for i, (a, b, c) in enumerate(mesh.triangles):
        out.append(f"{i} {a} {b} {c}")
    return "\n".join(out) + "\n"


def from_text(text: str) -> TriMesh:
    lines = iter(text.splitlines())
    nv = int(next(lines).split()[1])
    V = np.empty((nv, 2))
    mk = np.empty(nv, dtype=np.int64)
    for _ in range(nv):
        i, x, y, m = next(lines).split()
        V[int(i)] = (float(x), float(y))
        mk[int(i)] = int(m)
    nt = int(next(lines).split()[1])
    T = np.empty((nt, 3), dtype=np.int64)
    for _ in range(nt):
        i, a, b, c = next(lines).split()
        T[int(i)] = (int(a), int(b), int(c))
    edges, counts = np.unique(np.sort(np.vstack([T[:, [0, 1]], T[:, [1, 2]], T[:, [2, 0]]]), axis=1), axis=0, return_counts=True)
    segs = edges[counts == 1]
    sm = np.maximum(mk[segs[:, 0]], mk[segs[:, 1]])
    return TriMesh(V, T, mk, segs, sm, np.zeros(nt, dtype=np.int64))
