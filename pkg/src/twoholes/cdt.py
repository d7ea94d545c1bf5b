"""Constrained Delaunay triangulation by incremental insertion.

Points are inserted one at a time into a large enclosing triangle and made
Delaunay by Lawson flips; cocircular ties are broken by the symbolic
perturbation in :func:`twoholes.predicates.incircle_sos`, so the result does
not depend on insertion order. Constraint segments are recovered by
flipping the edges they cross (Sloan's method) and the triangulation is then
re-legalized without ever flipping a constrained edge. Regions are labelled
by flood fill from seed points, stopping at constraints.

The optional quality pass is a plain Ruppert-style loop: split encroached
segments at their midpoints, insert circumcenters of skinny or oversized
triangles. It is not used for reproducing the benchmark meshes.
"""

from __future__ import annotations

import logging
import math
from collections import deque

from .predicates import incircle_sos, orient2d

log = logging.getLogger(__name__)

EXTERIOR = -1


class TriangulationError(ValueError):
    pass


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class CDT:
    """Mutable constrained Delaunay triangulation.

    Triangles are stored as vertex triples in counterclockwise order with the
    neighbour across the edge opposite vertex ``i`` in ``nbr[t][i]``.
    """

    def __init__(self, points, bbox_scale: float = 64.0):
        pts = [(float(x), float(y)) for x, y in points]
        if not pts:
            raise TriangulationError("no points")
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        cx = 0.5 * (min(xs) + max(xs))
        cy = 0.5 * (min(ys) + max(ys))
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0) * bbox_scale
        self.pts: list[tuple[float, float]] = []
        self.tri: list[list[int]] = []
        self.nbr: list[list[int]] = []
        self.region: list[int] = []
        self.vtri: list[int] = []
        self.constrained: dict[tuple[int, int], int] = {}
        self.marker: list[int] = []
        # super triangle vertices get indices 0..2; user points follow
        for p in ((cx - 2 * span, cy - span), (cx + 2 * span, cy - span), (cx, cy + 2 * span)):
            self._add_vertex(p)
        self.tri.append([0, 1, 2])
        self.nbr.append([-1, -1, -1])
        self.region.append(0)
        for v in range(3):
            self.vtri[v] = 0
        self.n_super = 3
        self._last = 0
        self._rng = 12345
        self.index_of: list[int] = []
        for p in pts:
            self.index_of.append(self.insert_point(p))

    # ------------------------------------------------------------------ basics
    def _add_vertex(self, p) -> int:
        self.pts.append(p)
        self.vtri.append(-1)
        self.marker.append(0)
        return len(self.pts) - 1

    def _new_tri(self, v, n, region) -> int:
        self.tri.append(v)
        self.nbr.append(n)
        self.region.append(region)
        t = len(self.tri) - 1
        for a in v:
            self.vtri[a] = t
        return t

    def _replace_nbr(self, t: int, old: int, new: int) -> None:
        if t < 0:
            return
        n = self.nbr[t]
        for k in range(3):
            if n[k] == old:
                n[k] = new
                return
        raise TriangulationError("neighbour bookkeeping broken")

    def _orient(self, a: int, b: int, c: int) -> float:
        p = self.pts
        return orient2d(p[a], p[b], p[c])

    def _rand3(self) -> int:
        self._rng = (1103515245 * self._rng + 12345) & 0x7FFFFFFF
        return self._rng % 3

    # --------------------------------------------------------------- location
    def locate(self, p, start: int | None = None) -> int:
        """Triangle containing ``p`` (possibly on its boundary)."""
        t = self._last if start is None else start
        tri, nbr, pts = self.tri, self.nbr, self.pts
        for _ in range(4 * len(tri) + 16):
            v = tri[t]
            k0 = self._rand3()
            for k in range(3):
                i = (k0 + k) % 3
                a = v[(i + 1) % 3]
                b = v[(i + 2) % 3]
                if orient2d(pts[a], pts[b], p) < 0:
                    nt = nbr[t][i]
                    if nt < 0:
                        raise TriangulationError("point outside the enclosing triangle")
                    t = nt
                    break
            else:
                self._last = t
                return t
        raise TriangulationError("point location did not terminate")

    # -------------------------------------------------------------- insertion
    def insert_point(self, p, marker: int = 0) -> int:
        p = (float(p[0]), float(p[1]))
        t = self.locate(p)
        v = self.tri[t]
        pts = self.pts
        for a in v:
            if pts[a][0] == p[0] and pts[a][1] == p[1]:
                return a
        on_edge = -1
        for i in range(3):
            if orient2d(pts[v[(i + 1) % 3]], pts[v[(i + 2) % 3]], p) == 0:
                on_edge = i
                break
        k = self._add_vertex(p)
        self.marker[k] = marker
        if on_edge < 0:
            self._split_triangle(t, k)
        else:
            self._split_edge(t, on_edge, k)
        return k

    def _split_triangle(self, t: int, k: int) -> None:
        a, b, c = self.tri[t]
        na, nb, nc = self.nbr[t]
        reg = self.region[t]
        t1 = len(self.tri)
        t2 = t1 + 1
        self.tri[t] = [k, b, c]
        self.nbr[t] = [na, t1, t2]
        self._new_tri([k, c, a], [nb, t2, t], reg)
        self._new_tri([k, a, b], [nc, t, t1], reg)
        self._replace_nbr(nb, t, t1)
        self._replace_nbr(nc, t, t2)
        self.vtri[k] = t
        self.vtri[b] = t
        self.vtri[c] = t
        self._legalize(k, [t, t1, t2])

    def _split_edge(self, t: int, i: int, k: int) -> None:
        # edge (b, c) opposite vertex a of t is split at k
        a = self.tri[t][i]
        b = self.tri[t][(i + 1) % 3]
        c = self.tri[t][(i + 2) % 3]
        u = self.nbr[t][i]
        n_b = self.nbr[t][(i + 1) % 3]  # across (c, a)
        n_c = self.nbr[t][(i + 2) % 3]  # across (a, b)
        reg_t = self.region[t]
        key = _key(b, c)
        cmark = self.constrained.pop(key, None)
        if u < 0:
            raise TriangulationError("cannot split a hull edge")
        j = self.nbr[u].index(t)
        d = self.tri[u][j]
        m_c = self.nbr[u][(j + 1) % 3]  # across (b, d)
        m_b = self.nbr[u][(j + 2) % 3]  # across (d, c)
        reg_u = self.region[u]
        t1 = len(self.tri)
        u1 = t1 + 1
        # t: (k, c, a)  t1: (k, a, b)  u: (k, b, d)  u1: (k, d, c)
        self.tri[t] = [k, c, a]
        self.nbr[t] = [n_b, t1, u1]
        self._new_tri([k, a, b], [n_c, u, t], reg_t)
        self.tri[u] = [k, b, d]
        self.nbr[u] = [m_c, u1, t1]
        self._new_tri([k, d, c], [m_b, t, u], reg_u)
        self._replace_nbr(n_c, t, t1)
        self._replace_nbr(m_b, u, u1)
        for w, tt in ((k, t), (c, t), (a, t), (b, u), (d, u)):
            self.vtri[w] = tt
        if cmark is not None:
            self.constrained[_key(b, k)] = cmark
            self.constrained[_key(k, c)] = cmark
            if self.marker[k] == 0:
                self.marker[k] = cmark
        self._legalize(k, [t, t1, u, u1])

    def _flip(self, t: int, i: int) -> int:
        """Flip the edge opposite vertex ``i`` of ``t``; returns the other triangle."""
        u = self.nbr[t][i]
        a = self.tri[t][i]
        b = self.tri[t][(i + 1) % 3]
        c = self.tri[t][(i + 2) % 3]
        n_b = self.nbr[t][(i + 1) % 3]
        n_c = self.nbr[t][(i + 2) % 3]
        j = self.nbr[u].index(t)
        d = self.tri[u][j]
        m_c = self.nbr[u][(j + 1) % 3]
        m_b = self.nbr[u][(j + 2) % 3]
        self.tri[t] = [a, b, d]
        self.nbr[t] = [m_c, u, n_c]
        self.tri[u] = [a, d, c]
        self.nbr[u] = [m_b, n_b, t]
        self._replace_nbr(m_c, u, t)
        self._replace_nbr(n_b, t, u)
        self.vtri[a] = t
        self.vtri[b] = t
        self.vtri[d] = t
        self.vtri[c] = u
        return u

    def _should_flip(self, t: int, i: int) -> bool:
        u = self.nbr[t][i]
        if u < 0:
            return False
        a = self.tri[t][i]
        b = self.tri[t][(i + 1) % 3]
        c = self.tri[t][(i + 2) % 3]
        if _key(b, c) in self.constrained:
            return False
        j = self.nbr[u].index(t)
        d = self.tri[u][j]
        p = self.pts
        return incircle_sos(p[a], p[b], p[c], p[d], a, b, c, d) > 0

    def _legalize(self, k: int, stack: list[int]) -> None:
        while stack:
            t = stack.pop()
            v = self.tri[t]
            if k not in v:
                continue
            i = v.index(k)
            if self._should_flip(t, i):
                u = self._flip(t, i)
                stack.append(t)
                stack.append(u)

    def _legalize_edges(self, edges) -> None:
        """Lawson flips until every listed (and affected) edge is locally Delaunay."""
        stack = list(edges)
        while stack:
            e = stack.pop()
            found = self.find_edge(*e)
            if found is None:
                continue
            t, i = found
            if self._should_flip(t, i):
                a = self.tri[t][i]
                b = self.tri[t][(i + 1) % 3]
                c = self.tri[t][(i + 2) % 3]
                u = self.nbr[t][i]
                d = self.tri[u][self.nbr[u].index(t)]
                self._flip(t, i)
                stack.extend(((a, b), (b, d), (d, c), (c, a)))

    # ---------------------------------------------------------- edge helpers
    def star(self, v: int):
        """Triangles around vertex ``v`` in counterclockwise order."""
        t0 = self.vtri[v]
        t = t0
        out = []
        while True:
            out.append(t)
            i = self.tri[t].index(v)
            t = self.nbr[t][(i + 2) % 3]
            if t == t0:
                return out
            if t < 0:
                # open fan: walk the other way from t0 and prepend
                back = []
                t = t0
                while True:
                    i = self.tri[t].index(v)
                    t = self.nbr[t][(i + 1) % 3]
                    if t < 0:
                        break
                    back.append(t)
                return back[::-1] + out

    def find_edge(self, u: int, v: int):
        """``(t, i)`` with edge ``(u, v)`` opposite vertex ``i`` of ``t``, or None."""
        for t in self.star(u):
            tv = self.tri[t]
            i = tv.index(u)
            if tv[(i + 1) % 3] == v:
                return t, (i + 2) % 3
            if tv[(i + 2) % 3] == v:
                return t, (i + 1) % 3
        return None

    # ------------------------------------------------------------ constraints
    def insert_segment(self, a: int, b: int, marker: int = 1) -> None:
        if a == b:
            return
        pending = [(a, b)]
        while pending:
            u, v = pending.pop()
            if self.find_edge(u, v) is not None:
                self.constrained[_key(u, v)] = marker
                continue
            w, crossed = self._trace(u, v)
            if w is not None:
                pending.append((w, v))
                pending.append((u, w))
                continue
            new_edges = self._recover(u, v, crossed)
            self.constrained[_key(u, v)] = marker
            self._legalize_edges(new_edges)

    def _trace(self, a: int, b: int):
        """Edges crossed by segment ``ab``; or a vertex lying on it."""
        pts = self.pts
        pa, pb = pts[a], pts[b]
        crossed = []
        L = R = -1
        t_cur = -1
        for t in self.star(a):
            tv = self.tri[t]
            i = tv.index(a)
            x = tv[(i + 1) % 3]
            y = tv[(i + 2) % 3]
            ox = orient2d(pa, pb, pts[x])
            if ox == 0 and _between(pa, pb, pts[x]):
                return x, None
            oy = orient2d(pa, pb, pts[y])
            if ox < 0 and oy > 0:
                R, L = x, y
                t_cur = t
                break
        else:
            raise TriangulationError("segment start could not be traced")
        if (L, R) != (-1, -1):
            pass
        while True:
            crossed.append((L, R))
            # the triangle on the far side of edge (L, R) from t_cur
            tv = self.tri[t_cur]
            i = [k for k in range(3) if tv[k] not in (L, R)][0]
            t_nxt = self.nbr[t_cur][i]
            if t_nxt < 0:
                raise TriangulationError("segment leaves the triangulation")
            nv = self.tri[t_nxt]
            z = [w for w in nv if w not in (L, R)][0]
            if _key(L, R) in self.constrained:
                raise TriangulationError("constraint segments intersect")
            if z == b:
                return None, crossed
            oz = orient2d(pa, pb, pts[z])
            if oz == 0:
                return z, None
            if oz > 0:
                L = z
            else:
                R = z
            t_cur = t_nxt

    def _recover(self, a: int, b: int, crossed):
        pts = self.pts
        pa, pb = pts[a], pts[b]
        queue = deque(crossed)
        new_edges = []
        stall = 0
        while queue:
            L, R = queue.popleft()
            found = self.find_edge(L, R)
            if found is None:
                continue
            t, i = found
            u = self.nbr[t][i]
            p = self.tri[t][i]
            q = self.tri[u][self.nbr[u].index(t)]
            # strictly convex quad <=> diagonal pq properly crosses LR
            if orient2d(pts[p], pts[q], pts[L]) * orient2d(pts[p], pts[q], pts[R]) < 0 and (
                orient2d(pts[L], pts[R], pts[p]) * orient2d(pts[L], pts[R], pts[q]) < 0
            ):
                self._flip(t, i)
                stall = 0
                if p in (a, b) or q in (a, b):
                    new_edges.append((p, q))
                    continue
                op = orient2d(pa, pb, pts[p])
                oq = orient2d(pa, pb, pts[q])
                if op * oq < 0:
                    queue.append((p, q))
                else:
                    new_edges.append((p, q))
            else:
                queue.append((L, R))
                stall += 1
                if stall > 4 * len(queue) + 8:
                    raise TriangulationError("segment recovery stalled")
        return new_edges

    # ----------------------------------------------------------------- regions
    def mark_regions(self, seeds=None) -> None:
        """Label triangles: EXTERIOR outside the constraints, seed ids elsewhere.

        ``seeds`` is a sequence of ``(region_id, point)``. Triangles reached
        from the enclosing triangle or from a seed of id EXTERIOR are
        exterior; each other seed floods its id; unreached triangles are
        region 0.
        """
        n = len(self.tri)
        region = [0] * n
        done = [False] * n
        starts: list[tuple[int, int]] = []
        for t in range(n):
            if any(v < self.n_super for v in self.tri[t]):
                starts.append((t, EXTERIOR))
        for rid, p in seeds or ():
            starts.append((self.locate(p), rid))
        for t0, rid in starts:
            if done[t0]:
                continue
            stack = [t0]
            done[t0] = True
            while stack:
                t = stack.pop()
                region[t] = rid
                tv = self.tri[t]
                for i in range(3):
                    u = self.nbr[t][i]
                    if u < 0 or done[u]:
                        continue
                    if _key(tv[(i + 1) % 3], tv[(i + 2) % 3]) in self.constrained:
                        continue
                    done[u] = True
                    stack.append(u)
        self.region = region

    # ----------------------------------------------------------------- quality
    def refine_quality(
        self,
        min_angle: float = 25.0,
        size=None,
        max_vertices: int = 200_000,
        regions=(0,),
    ) -> int:
        """Ruppert-style refinement of the triangles in ``regions``.

        ``size(x, y)`` is a target edge length; a triangle whose longest edge
        exceeds it at the centroid is split, as is one with an angle below
        ``min_angle`` degrees. Encroached segments are split at their
        midpoints first. Returns the number of inserted vertices.
        """
        regions = set(regions)
        bound = 1.0 / (2.0 * math.sin(math.radians(min_angle)))
        small = self._small_input_angles()
        segq = deque((u, v, False) for u, v in self.constrained)
        triq = deque((t, tuple(self.tri[t])) for t in range(len(self.tri)) if self.region[t] in regions)
        inserted = 0
        while len(self.pts) < max_vertices:
            if segq:
                u, v, force = segq.popleft()
                if _key(u, v) not in self.constrained:
                    continue
                if not force and not self._segment_encroached(u, v, regions):
                    continue
                k = self._split_segment(u, v)
                inserted += 1
                segq.extend(((u, k, False), (k, v, False)))
                self._queue_star(k, segq, triq, regions)
                continue
            if not triq:
                return inserted
            t, verts = triq.popleft()
            if tuple(self.tri[t]) != verts or self.region[t] not in regions:
                continue
            if not self._is_bad(t, bound, size, small):
                continue
            cc = _circumcenter(*(self.pts[v] for v in verts))
            kind, hit = self._walk_to(t, cc)
            if kind == "segment":
                # the circumcenter lies beyond this constraint, which it encroaches
                segq.append((*hit, True))
                triq.append((t, verts))
                continue
            if self.region[hit] not in regions:
                continue
            enc = self._cavity_segments(hit, cc)
            if enc:
                segq.extend((u, v, True) for u, v in enc)
                triq.append((t, verts))
                continue
            k = self.insert_point(cc)
            inserted += 1
            self._queue_star(k, segq, triq, regions)
        log.warning("quality refinement stopped at the vertex cap (%d)", max_vertices)
        return inserted

    def _queue_star(self, k, segq, triq, regions) -> None:
        for t in self.star(k):
            tv = self.tri[t]
            if self.region[t] in regions:
                triq.append((t, tuple(tv)))
            i = tv.index(k)
            e = _key(tv[(i + 1) % 3], tv[(i + 2) % 3])
            if e in self.constrained:
                segq.append((*e, False))

    def _small_input_angles(self) -> set[int]:
        # vertices where two constraints meet at less than 60 degrees
        adj: dict[int, list[int]] = {}
        for u, v in self.constrained:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        out = set()
        for v, ws in adj.items():
            pv = self.pts[v]
            for i in range(len(ws)):
                for j in range(i + 1, len(ws)):
                    if _angle(pv, self.pts[ws[i]], self.pts[ws[j]]) < math.radians(60.0):
                        out.add(v)
        return out

    def _segment_encroached(self, u: int, v: int, regions) -> bool:
        found = self.find_edge(u, v)
        if found is None:
            return False
        t, i = found
        pu, pv = self.pts[u], self.pts[v]
        if self.region[t] in regions and _in_diametral(pu, pv, self.pts[self.tri[t][i]]):
            return True
        o = self.nbr[t][i]
        if o >= 0 and self.region[o] in regions:
            w = self.tri[o][self.nbr[o].index(t)]
            if _in_diametral(pu, pv, self.pts[w]):
                return True
        return False

    def _cavity_segments(self, t0: int, p) -> list[tuple[int, int]]:
        """Constraints on the boundary of the insertion cavity of ``p`` that it encroaches."""
        from .predicates import incircle

        pts = self.pts
        seen = {t0}
        stack = [t0]
        out = []
        while stack:
            t = stack.pop()
            tv = self.tri[t]
            for i in range(3):
                e = _key(tv[(i + 1) % 3], tv[(i + 2) % 3])
                if e in self.constrained:
                    if _in_diametral(pts[e[0]], pts[e[1]], p):
                        out.append(e)
                    continue
                u = self.nbr[t][i]
                if u < 0 or u in seen:
                    continue
                uv = self.tri[u]
                if incircle(pts[uv[0]], pts[uv[1]], pts[uv[2]], p) > 0:
                    seen.add(u)
                    stack.append(u)
        return out

    def _split_segment(self, u: int, v: int) -> int:
        pu, pv = self.pts[u], self.pts[v]
        mid = (0.5 * (pu[0] + pv[0]), 0.5 * (pu[1] + pv[1]))
        found = self.find_edge(u, v)
        if found is None:
            raise TriangulationError("segment to split is not an edge")
        mark = self.constrained.get(_key(u, v), 1)
        t, i = found
        k = self._add_vertex(mid)
        self.marker[k] = mark
        self._split_edge(t, i, k)
        return k

    def _is_bad(self, t, ratio_bound, size, small_input) -> bool:
        a, b, c = (self.pts[v] for v in self.tri[t])
        la = math.dist(b, c)
        lb = math.dist(c, a)
        lc = math.dist(a, b)
        lmin = min(la, lb, lc)
        if size is not None:
            cx = (a[0] + b[0] + c[0]) / 3.0
            cy = (a[1] + b[1] + c[1]) / 3.0
            if max(la, lb, lc) > size(cx, cy):
                return True
        area2 = abs(orient2d(a, b, c))
        if area2 == 0.0:
            return False
        R = la * lb * lc / (2.0 * area2)
        if R / lmin <= ratio_bound:
            return False
        # a skinny triangle sitting in a small input angle cannot be fixed
        k = (la, lb, lc).index(lmin)
        tv = self.tri[t]
        return tv[(k + 1) % 3] not in small_input and tv[(k + 2) % 3] not in small_input

    def _walk_to(self, t: int, p):
        """Straight walk from the centroid of ``t`` to ``p``.

        Returns ``("triangle", t)`` for the triangle containing ``p`` or
        ``("segment", e)`` for the first constraint crossed.
        """
        pts = self.pts
        tri, nbr = self.tri, self.nbr
        v = tri[t]
        g = (
            (pts[v[0]][0] + pts[v[1]][0] + pts[v[2]][0]) / 3.0,
            (pts[v[0]][1] + pts[v[1]][1] + pts[v[2]][1]) / 3.0,
        )
        prev = -1
        for _ in range(4 * len(tri) + 16):
            v = tri[t]
            exit_i = -1
            for i in range(3):
                a = v[(i + 1) % 3]
                b = v[(i + 2) % 3]
                if nbr[t][i] == prev or orient2d(pts[a], pts[b], p) >= 0:
                    continue
                if orient2d(g, p, pts[a]) * orient2d(g, p, pts[b]) <= 0:
                    exit_i = i
                    break
                if exit_i < 0:
                    exit_i = i
            if exit_i < 0:
                return ("triangle", t)
            a = v[(exit_i + 1) % 3]
            b = v[(exit_i + 2) % 3]
            if _key(a, b) in self.constrained:
                return ("segment", _key(a, b))
            prev = t
            t = nbr[t][exit_i]
            if t < 0:
                raise TriangulationError("walk left the triangulation")
        raise TriangulationError("walk did not terminate")

    # ------------------------------------------------------------------ output
    def triangles_in(self, regions) -> list[list[int]]:
        regions = set(regions)
        return [self.tri[t] for t in range(len(self.tri)) if self.region[t] in regions]

    def check_delaunay(self, regions=None) -> list[tuple[int, int]]:
        """Unconstrained edges failing the (unperturbed) in-circle test."""
        from .predicates import incircle

        bad = []
        pts = self.pts
        for t in range(len(self.tri)):
            if regions is not None and self.region[t] not in regions:
                continue
            for i in range(3):
                u = self.nbr[t][i]
                if u < 0 or u < t:
                    continue
                if regions is not None and self.region[u] not in regions:
                    continue
                a, b, c = self.tri[t][i], self.tri[t][(i + 1) % 3], self.tri[t][(i + 2) % 3]
                if _key(b, c) in self.constrained:
                    continue
                d = self.tri[u][self.nbr[u].index(t)]
                if incircle(pts[a], pts[b], pts[c], pts[d]) > 0:
                    bad.append((b, c))
        return bad


def _between(pa, pb, px) -> bool:
    # px collinear with pa-pb: strictly between the endpoints?
    dx = pb[0] - pa[0]
    dy = pb[1] - pa[1]
    s = (px[0] - pa[0]) * dx + (px[1] - pa[1]) * dy
    return 0 < s < dx * dx + dy * dy


def _in_diametral(pu, pv, pw) -> bool:
    return (pu[0] - pw[0]) * (pv[0] - pw[0]) + (pu[1] - pw[1]) * (pv[1] - pw[1]) < 0


def _angle(pv, pa, pb) -> float:
    ax, ay = pa[0] - pv[0], pa[1] - pv[1]
    bx, by = pb[0] - pv[0], pb[1] - pv[1]
    return abs(math.atan2(ax * by - ay * bx, ax * bx + ay * by))


def _circumcenter(a, b, c):
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    return (a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d)


def triangulate_pslg(
    points,
    segments=(),
    segment_markers=None,
    seeds=None,
    quality: dict | None = None,
):
    """Triangulate a planar straight-line graph.

    Returns ``(vertices, triangles, regions, markers, segments, segment_markers)``
    for all non-exterior triangles; vertex indices are compacted.
    """
    cdt = CDT(points)
    idx = cdt.index_of
    if segment_markers is None:
        segment_markers = [1] * len(segments)
    for (u, v), m in zip(segments, segment_markers):
        cdt.insert_segment(idx[u], idx[v], m)
        for w in (idx[u], idx[v]):
            if cdt.marker[w] == 0:
                cdt.marker[w] = m
    cdt.mark_regions(seeds)
    if quality is not None:
        cdt.refine_quality(**quality)
    return _extract(cdt)


def _extract(cdt: CDT):
    keep = [t for t in range(len(cdt.tri)) if cdt.region[t] != EXTERIOR]
    used = sorted({v for t in keep for v in cdt.tri[t]})
    remap = {v: i for i, v in enumerate(used)}
    verts = [cdt.pts[v] for v in used]
    tris = [[remap[v] for v in cdt.tri[t]] for t in keep]
    regions = [cdt.region[t] for t in keep]
    markers = [cdt.marker[v] for v in used]
    segs = []
    smarks = []
    for (u, v), m in sorted(cdt.constrained.items()):
        if u in remap and v in remap:
            segs.append((remap[u], remap[v]))
            smarks.append(m)
    return verts, tris, regions, markers, segs, smarks
