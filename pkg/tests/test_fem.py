import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from twoholes import geometry as G
from twoholes.fem import (
    EigenSolveError,
    EigenSolveSettings,
    Protocol,
    apply_dirichlet,
    assemble,
    dirichlet_nodes,
    lambda1,
    smallest_eigenpair,
    solve_mesh,
)
from twoholes.mesh import TriMesh, refine_times, triangulate


def _single(verts):
    return TriMesh(
        np.asarray(verts, dtype=float),
        np.array([[0, 1, 2]]),
        np.zeros(3, dtype=np.int64),
        np.zeros((0, 2), dtype=np.int64),
        np.zeros(0, dtype=np.int64),
        np.zeros(1, dtype=np.int64),
    )


def test_reference_element_exact():
    K, M = assemble(_single([[0, 0], [1, 0], [0, 1]]))
    assert np.array_equal(K.toarray(), [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]])
    assert np.allclose(M.toarray(), (np.ones((3, 3)) + np.eye(3)) / 24, rtol=0, atol=1e-17)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-2, 2))
def test_element_invariants(x0, y0, w, h, shear):
    K, M = assemble(_single([[x0, y0], [x0 + w, y0], [x0 + shear, y0 + h]]))
    Kd = K.toarray()
    # constants lie in the kernel, linear functions reproduce the gradient energy
    assert np.abs(Kd.sum(axis=1)).max() <= 1e-12 * np.abs(Kd).max()
    assert M.sum() == pytest.approx(0.5 * w * h, rel=1e-12)
    ux = np.array([x0, x0 + w, x0 + shear])
    assert ux @ Kd @ ux == pytest.approx(0.5 * w * h, rel=1e-9)


def test_inverted_triangle_rejected():
    with pytest.raises(ValueError):
        assemble(_single([[0, 0], [0, 1], [1, 0]]))


def test_dirichlet_elimination():
    dom = G.polygonize(G.make_branch_config("adjacent", 0.08))
    m = refine_times(triangulate(dom), 1)
    K, M = assemble(m)
    red = apply_dirichlet(K, M, m)
    fixed = dirichlet_nodes(m)
    assert len(red.free) + len(fixed) == m.n_vertices
    assert (m.markers[red.free] == 0).all()
    u = red.scatter(np.ones(len(red.free)))
    assert (u[fixed] == 0).all()
    # reduced matrices stay symmetric
    assert abs(red.K - red.K.T).max() < 1e-14


def test_empty_square_against_exact():
    res = lambda1(G.empty_config(), 3)
    lam = [q.lambda1 for q in res]
    assert lam[0] > lam[1] > lam[2] > math.pi**2 / 2
    assert all(q.positive and q.residual <= 1e-10 for q in res)


def test_lumped_mass_lowers_eigenvalue():
    m = refine_times(triangulate(G.polygonize(G.empty_config())), 2)
    ep_c, _ = solve_mesh(m)
    ep_l, _ = solve_mesh(m, lumped=True)
    assert ep_l.value < ep_c.value


def test_lanczos_matches_inverse_iteration():
    m = refine_times(triangulate(G.polygonize(G.make_branch_config("cluster", 0.08))), 2)
    a, _ = solve_mesh(m)
    b, _ = solve_mesh(m, EigenSolveSettings(method="shift_invert_lanczos"))
    assert a.value == pytest.approx(b.value, rel=1e-9)


def test_settings_validation():
    with pytest.raises(ValueError):
        EigenSolveSettings(tolerance=0)
    with pytest.raises(ValueError):
        EigenSolveSettings(method="qr")


def test_nonconvergence_raised():
    K = sp.diags([1.0, 1.0 + 1e-9, 3.0]).tocsr()
    M = sp.identity(3, format="csr")
    with pytest.raises(EigenSolveError):
        smallest_eigenpair(K, M, EigenSolveSettings(tolerance=1e-15, max_iterations=2))


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(G.BRANCHES), st.floats(0.05, 0.12))
def test_holes_raise_eigenvalue(branch, r):
    # removing holes can only raise the first eigenvalue
    empty = lambda1(G.empty_config(), 2)[-1].lambda1
    lam = lambda1(G.make_branch_config(branch, r), 2)[-1].lambda1
    assert lam > empty


def test_protocol_shrink_mode_runs():
    res = lambda1(G.make_branch_config("opposite", 0.08), 2, protocol=Protocol(inset_mode="shrink"))
    assert res[-1].lambda1 > math.pi**2 / 2
