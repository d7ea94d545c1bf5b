import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoholes import geometry as G


@pytest.mark.parametrize("branch", G.BRANCHES)
@pytest.mark.parametrize("r", [0.07, 0.08, 0.09])
def test_branches_admissible_and_tangent(branch, r):
    cfg = G.make_branch_config(branch, r)
    rep = G.validate(cfg)
    assert rep.valid
    # every branch touches the boundary; cluster holes also touch each other
    assert abs(rep.containment_margin) < 1e-12
    if branch == "cluster":
        assert abs(rep.separation_margin) < 1e-12


def test_cluster_is_contact_at_quarter_pi():
    a = G.make_branch_config("cluster", 0.08)
    b = G.make_contact_config(math.pi / 4, 0.08)
    assert a.holes == b.holes


def test_bad_inputs():
    with pytest.raises(G.GeometryError):
        G.make_branch_config("nope", 0.1)
    with pytest.raises(G.GeometryError):
        G.make_branch_config("adjacent", 0.6)
    with pytest.raises(G.GeometryError):
        G.CornerParams(0.5, 1.0)
    with pytest.raises(G.GeometryError):
        G.make_same_corner_config(G.CornerParams(1, 1), G.CornerParams(1.5, 1), 0.1)
    with pytest.raises(G.GeometryError):
        G.contact_family(2.0)
    with pytest.raises(G.GeometryError):
        G.polygonize(G.make_branch_config("adjacent", 0.08), m_circle=4)


def test_square_outline_and_polygon():
    out = G.square_outline(8)
    assert out.shape == (32, 2)
    assert G.polygon_area(out) == pytest.approx(4.0, abs=1e-15)
    poly = G.regular_polygon((0.2, -0.1), 0.3, 32)
    # clockwise, first vertex at angle 0, axis vertices exact
    assert G.polygon_area(poly) < 0
    assert tuple(poly[0]) == (0.5, -0.1)
    assert tuple(poly[8]) == (0.2, -0.4)


@pytest.mark.parametrize("mode", G.INSET_MODES)
def test_inset_opens_gap(mode):
    cfg = G.make_branch_config("adjacent", 0.08)
    dom = G.polygonize(cfg, inset=5e-4, inset_mode=mode)
    for h in dom.holes:
        assert np.abs(h).max() <= 1 - 5e-4 + 1e-15


def test_symmetry_maps_adjacent_family():
    cfg = G.make_branch_config("adjacent", 0.08)
    img = G.apply_symmetry(cfg, "flip_x", swap=True)
    assert {h.center for h in img.holes} == {h.center for h in cfg.holes}
    with pytest.raises(G.GeometryError):
        G.apply_symmetry(cfg, "shear")


@given(st.sampled_from(G.D4), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_symmetry_is_isometry(g, x, y):
    cfg = G.custom_config([(x * 0.85, y * 0.85)], 0.1)
    img = G.apply_symmetry(cfg, g)
    (h,), (k,) = cfg.holes, img.holes
    assert math.hypot(*k.center) == pytest.approx(math.hypot(*h.center), abs=1e-15)
    assert G.validate(img).valid == G.validate(cfg).valid


@given(st.floats(0.01, 0.3), st.floats(0, 1), st.floats(0, 1))
def test_keyvalue_roundtrip(r, u, v):
    lim = 1 - r
    cfg = G.custom_config([(-lim + u * 2 * lim * 0.4, -lim + v * 2 * lim)], r)
    back = G.from_keyvalue(G.to_keyvalue(cfg))
    assert back.holes == cfg.holes
    assert back.r == cfg.r


@given(st.floats(0.0, math.pi / 2), st.floats(0.02, 0.1))
def test_contact_family_touches(theta, r):
    cfg = G.make_contact_config(theta, r)
    rep = G.validate(cfg)
    assert rep.valid
    assert abs(rep.separation_margin) < 1e-12


def test_polygon_area_converges_quadratically():
    cfg = G.make_branch_config("opp_side", 0.08)
    target = math.pi * (0.08 - 5e-4) ** 2
    errs = []
    for m in (32, 64, 128):
        dom = G.polygonize(cfg, m_circle=m, inset_mode="shrink")
        errs.append(target - abs(G.polygon_area(dom.holes[0])))
    # inscribed polygons undershoot; each doubling divides the error by ~4
    assert all(e > 0 for e in errs)
    for e0, e1 in zip(errs, errs[1:]):
        assert e0 / e1 == pytest.approx(4.0, rel=0.01)


def test_zero_inset_interior_hole():
    cfg = G.custom_config([(0.1, -0.2)], 0.2)
    dom = G.polygonize(cfg, inset=0.0)
    assert np.hypot(*(dom.holes[0] - [0.1, -0.2]).T) == pytest.approx(0.2, abs=1e-15)
