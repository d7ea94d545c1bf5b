import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoholes import bench as B
from twoholes import geometry as G
from twoholes.fem import Protocol
from twoholes.mesh import check_conformity, total_area

record = st.builds(
    B.BenchRecord,
    geometry=st.sampled_from(["adjacent", "opposite", "empty"]),
    r=st.sampled_from([0.0, 0.07, 0.08]),
    level=st.integers(1, 4),
    nodes=st.integers(1, 10**6),
    triangles=st.integers(1, 10**6),
    lambda1=st.floats(4.0, 10.0),
)


@given(st.lists(record, max_size=20))
def test_csv_roundtrip(recs):
    text = B.to_csv(recs)
    back = B.from_csv(text)
    assert len(back) == len(recs)
    assert B.to_csv(back) == text


def test_csv_header_check():
    with pytest.raises(ValueError):
        B.from_csv("a,b\n")


def test_csv_is_deterministic():
    a = B.to_csv(B.empty_square_convergence(levels=2).records)
    b = B.to_csv(B.empty_square_convergence(levels=2).records)
    assert a == b
    assert a.splitlines()[0] == B.CSV_HEADER


def test_theta_grid():
    g = B.default_theta_grid(32)
    assert len(g) == 32 and g[0] == 0 and g[-1] == pytest.approx(math.pi / 2)


def test_run_parallel_order():
    assert B.run_parallel(abs, [-3, 2, -1], jobs=1) == [3, 2, 1]


@pytest.mark.parametrize("transform", ["flip_x", "rot180"])
def test_mirrored_mesh(transform):
    cfg = G.make_branch_config("adjacent", 0.08)
    half = B._half_domain(cfg, Protocol())
    from twoholes.mesh import triangulate

    h = triangulate(half)
    full = B.mirrored_mesh(h, transform)
    assert check_conformity(full) == []
    assert total_area(full) == pytest.approx(2 * total_area(h), abs=1e-12)
    # the mirror image of every vertex is a vertex
    sign = np.array([-1.0, 1.0]) if transform == "flip_x" else np.array([-1.0, -1.0])
    key = {tuple(np.round(v, 12)) for v in full.vertices}
    assert all(tuple(np.round(v * sign, 12)) in key for v in full.vertices)


def test_common_topology_gap_positive():
    (la, _), (lo, _) = B.common_topology_pair(0.09, levels=2)
    assert lo > la


@pytest.mark.parametrize("name", ["corner_one_hole", "side_center", "side_at:0.5", "endpoint:2", "adjacent"])
def test_scaling_configs(name):
    cfg = B.scaling_config(name, 0.05)
    assert G.validate(cfg).valid
    assert B.nominal_exponent(name) in (2, 4)


def test_scaling_unknown_branch():
    with pytest.raises(ValueError):
        B.scaling_config("corner_three", 0.05)


def test_predicted_coefficients():
    from twoholes.cell import JINF

    assert B.side_coefficient_prediction() == pytest.approx(math.pi**2 / 4 * (JINF + math.pi))
    assert B.corner_coefficient_prediction(15.0) == pytest.approx(math.pi**4 / 16 * (15.0 + 2.5 * math.pi))


def test_report_lines():
    rep = B.Report("t", [])
    rep.check("a", True, "x")
    rep.check("b", False)
    assert not rep.ok
    assert rep.lines() == ["t", "  [pass] a: x", "  [FAIL] b"]
