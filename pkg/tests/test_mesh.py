import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoholes import geometry as G
from twoholes.cdt import CDT, triangulate_pslg
from twoholes.mesh import (
    OUTER,
    TriMesh,
    check_conformity,
    check_delaunay,
    domain_area,
    from_text,
    hole_marker,
    refine_red,
    refine_times,
    stats,
    to_text,
    total_area,
    triangulate,
)


def _mesh(branch="adjacent", r=0.08, mode="shift", **kw):
    cfg = G.empty_config() if branch == "empty" else G.make_branch_config(branch, r)
    return G.polygonize(cfg, inset_mode=mode), kw


@pytest.mark.parametrize("branch", ("empty",) + G.BRANCHES)
def test_raw_cdt_is_conforming_and_delaunay(branch):
    dom, _ = _mesh(branch)
    m = triangulate(dom)
    assert check_conformity(m) == []
    assert check_delaunay(m) == []
    assert abs(total_area(m) - domain_area(dom)) <= 1e-12


def test_empty_square_node_counts():
    dom, _ = _mesh("empty")
    m = triangulate(dom)
    counts = []
    for _ in range(3):
        m = refine_red(m)
        counts.append(m.n_vertices)
    assert counts == [93, 305, 1089]


def test_red_refinement_properties():
    dom, _ = _mesh("cluster")
    m0 = triangulate(dom)
    m1 = refine_red(m0)
    assert m1.n_triangles == 4 * m0.n_triangles
    assert len(m1.segments) == 2 * len(m0.segments)
    assert check_conformity(m1) == []
    # children are similar to their parent: the minimum angle is unchanged
    assert stats(m1).min_angle == pytest.approx(stats(m0).min_angle, rel=1e-9)
    assert abs(total_area(m1) - total_area(m0)) <= 1e-12
    # midpoints of constraint edges inherit the edge marker
    on_outer = m1.markers == OUTER
    assert np.allclose(np.abs(m1.vertices[on_outer]).max(axis=1), 1.0)


def test_markers_per_hole():
    dom, _ = _mesh("opposite")
    m = refine_times(triangulate(dom), 2)
    for k, h in enumerate(dom.holes):
        ids = np.nonzero(m.markers == hole_marker(k))[0]
        c = dom.hole_centers[k]
        dist = np.hypot(*(m.vertices[ids] - c).T)
        # hole vertices sit on the m-gon, between apothem and circumradius
        assert dist.max() <= 0.08 + 1e-12
        assert dist.min() >= 0.08 * math.cos(math.pi / 32) - 1e-12


def test_text_roundtrip():
    dom, _ = _mesh("opp_side")
    m = triangulate(dom)
    back = from_text(to_text(m))
    assert np.array_equal(back.vertices, m.vertices)
    assert np.array_equal(back.triangles, m.triangles)
    assert np.array_equal(back.markers, m.markers)


def test_keep_holes_and_submesh():
    dom, _ = _mesh("adjacent", mode="shrink")
    m = triangulate(dom, keep_holes=True)
    assert set(np.unique(m.regions)) == {0, 1, 2}
    assert total_area(m) == pytest.approx(4.0, abs=1e-12)
    sub = m.submesh((0,))
    assert abs(total_area(sub) - domain_area(dom)) <= 1e-12
    assert check_conformity(sub) == []


def test_quality_refinement_bounds_angles():
    dom, _ = _mesh("adjacent", mode="shrink")
    m = triangulate(dom, quality={"min_angle": 25.0, "size": lambda x, y: 0.2})
    assert check_conformity(m) == []
    # angles below the bound only where input segments meet at small angles
    assert stats(m).min_angle > 0
    assert abs(total_area(m) - domain_area(dom)) <= 1e-12


def test_geos_engine_matches_area():
    pytest.importorskip("shapely")
    dom, _ = _mesh("opposite")
    m = triangulate(dom, engine="geos")
    assert check_conformity(m) == []
    assert abs(total_area(m) - domain_area(dom)) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-64, 64), st.integers(-64, 64)), min_size=3, max_size=60, unique=True))
def test_point_set_delaunay(ij):
    # dyadic coordinates keep the float in-circle check exact; many ties are cocircular
    pts = [(i / 64, j / 64) for i, j in ij]
    square = [(-2.0, -2.0), (2.0, -2.0), (2.0, 2.0), (-2.0, 2.0)]
    allp = square + pts
    segs = [(i, (i + 1) % 4) for i in range(4)]
    verts, tris, regions, markers, s_out, s_marks = triangulate_pslg(allp, segs)
    m = TriMesh(
        np.array(verts),
        np.array(tris),
        np.array(markers),
        np.array(s_out).reshape(-1, 2),
        np.array(s_marks),
        np.array(regions),
    )
    assert len(verts) == len(allp)
    assert check_conformity(m) == []
    assert check_delaunay(m) == []
    assert total_area(m) == pytest.approx(16.0, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 0.3), st.floats(-1, 1), st.floats(-1, 1), st.sampled_from([8, 16, 32]))
def test_random_hole_mesh(r, u, v, m_circle):
    lim = 1 - r - 1e-3
    cfg = G.custom_config([(u * lim, v * lim)], r)
    dom = G.polygonize(cfg, n_side=4, m_circle=m_circle, inset=1e-4, inset_mode="shrink")
    mesh = triangulate(dom)
    assert check_conformity(mesh) == []
    assert check_delaunay(mesh) == []
    assert abs(total_area(mesh) - domain_area(dom)) <= 1e-12
    fine = refine_red(mesh)
    assert fine.n_triangles == 4 * mesh.n_triangles
    assert abs(total_area(fine) - domain_area(dom)) <= 1e-12


def test_cdt_locate_and_insert():
    c = CDT([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    before = len(c.pts)
    c.insert_point((0.25, 0.25))
    assert len(c.pts) == before + 1
    assert c.check_delaunay() == []
