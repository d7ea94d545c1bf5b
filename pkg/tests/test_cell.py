import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoholes import cell as C


def test_jinf_series_against_closed_form():
    assert math.pi * C.jinf_series() == pytest.approx(C.jinf_closed_form(), abs=1e-12)
    assert abs(C.jinf_partial(10**4) - C.jinf_closed_form() / math.pi) < 1e-3


@given(st.floats(1.01, 20))
def test_jhp_above_lower_bound(b):
    assert C.jhp_series(b) >= C.jhp_lower_bound(b) * (1 - 1e-12)
    assert C.jhp_series(b) > 2 * math.pi


@given(st.floats(1.01, 10), st.floats(0.01, 5))
def test_jhp_increasing(b, db):
    # the datum y grows with the height of the hole
    assert C.jhp_series(b + db) > C.jhp_series(b)


def test_jhp_domain():
    with pytest.raises(ValueError):
        C.jhp_series(1.0)


def test_competitor_quadrature():
    assert C.competitor_quadrature() == pytest.approx(C.COMPETITOR, abs=1e-8)
    q = C.competitor_constants_quadrature()
    for k, v in C.competitor_constants().items():
        assert q[k] == pytest.approx(v, rel=1e-10)


def test_polygon_moments_of_disk():
    from twoholes.geometry import regular_polygon

    mo = C.polygon_moments(regular_polygon((2.0, 1.0), 1.0, 2048))
    assert mo["area"] == pytest.approx(math.pi, rel=1e-5)
    assert mo["s"] == pytest.approx(2 * math.pi, rel=1e-5)
    assert mo["ss"] + mo["tt"] == pytest.approx(math.pi * (4 + 1 + 0.5), rel=1e-5)


def test_cellspec_validation():
    with pytest.raises(ValueError):
        C.CellSpec(((0.5, 1.0),))
    with pytest.raises(ValueError):
        C.CellSpec(((1.0, 1.0), (1.5, 1.0)))
    with pytest.raises(ValueError):
        C.CellSpec(((1.0, 1.0),), datum="xy")
    with pytest.raises(ValueError):
        C.CellSpec(((3.0, 3.0),), R=8)


def test_compare_statuses():
    assert C.compare("x", 2.0, 1.0).status == C.PASS
    assert C.compare("x", 1.0, 2.0).status == C.FAIL
    assert C.compare("x", 1.05, 1.0, error=0.1).status == C.INCONCLUSIVE
    assert C.compare("x", 1.0, 1.0, strict=False).status == C.PASS


def test_energy_E_one():
    res = C.energy_E(1.0, R=16, density=2)
    # below the explicit competitor, above 2pi
    assert 2 * math.pi < res.energy < C.COMPETITOR
    assert res.discretization_estimate > 0 and res.truncation_estimate > 0


def test_symmetry_of_F():
    chk = C.symmetry_check(1.5, 1.0, R=16, density=2)
    assert chk.status == C.PASS


def test_energy_identity_closes():
    rep = C.general_identity_residuals(1.5, 1.0, R=16)
    named = {r.name: r for r in rep.residuals}
    for k in ("res_energy", "res_dy", "res_dx"):
        assert named[k].within


def test_axis_term_breaks_I_equals_aJ():
    # I_y - a J_y stays O(1) under refinement: the identity I = aJ omits the
    # boundary term of (s - a) t on the axis s = 0
    rep = C.general_identity_residuals(1.5, 1.5)
    named = {r.name: r for r in rep.residuals}
    assert abs(named["res_Iy"].value) > 10 * named["res_Iy"].estimate


def test_gamma_k_close_to_twice_jinf():
    g = C.gamma_K_estimate(R=16)
    assert g.mk == pytest.approx(2 * C.JINF, rel=5e-3)
    assert g.gamma_k == pytest.approx(math.pi**2 / 4 * g.mk)


def test_csv_row():
    spec = C.CellSpec(((1.0, 1.0),), R=16)
    res = C.CellResult(14.9, 14.5, 1e-2, 1e-1, 100)
    row = C.cell_csv_row(spec, res)
    assert row.split(",")[0] == "st"
    assert len(row.split(",")) == len(C.CELL_CSV_HEADER.split(","))
