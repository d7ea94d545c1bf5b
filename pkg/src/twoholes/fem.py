"""P1 finite elements: assembly, Dirichlet elimination, smallest eigenpair."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .geometry import Configuration, polygonize
from .mesh import MeshStats, TriMesh, refine_red, signed_areas, stats, triangulate

log = logging.getLogger(__name__)

PI2_HALF = math.pi**2 / 2
POSITIVITY_TOL = 1e-4


class EigenSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenSolveSettings:
    tolerance: float = 1e-10
    max_iterations: int = 500
    shift: float = 0.0
    method: str = "inverse_iteration"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.method not in ("inverse_iteration", "shift_invert_lanczos"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float
    iterations: int = 0
    positive: bool = True
    min_ratio: float = 0.0


@dataclass(frozen=True)
class ReducedPencil:
    K: sp.csr_matrix
    M: sp.csr_matrix
    free: np.ndarray
    n_full: int

    def scatter(self, u: np.ndarray) -> np.ndarray:
        """Full nodal vector with zeros on eliminated boundary vertices."""
        out = np.zeros(self.n_full)
        out[self.free] = u
        return out


def element_gradients(mesh: TriMesh):
    """Per-triangle barycentric gradients (T, 3, 2) and areas (T,)."""
    x = mesh.vertices[mesh.triangles]
    area = signed_areas(mesh)
    if (area <= 0).any():
        raise ValueError("degenerate or inverted triangle")
    G = np.empty((len(area), 3, 2))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        G[:, i, 0] = x[:, j, 1] - x[:, k, 1]
        G[:, i, 1] = x[:, k, 0] - x[:, j, 0]
    G /= (2.0 * area)[:, None, None]
    return G, area


def assemble(mesh: TriMesh, lumped: bool = False):
    """Stiffness and mass matrices over all vertices (CSR, symmetric)."""
    G, area = element_gradients(mesh)
    Ke = np.einsum("eik,ejk->eij", G, G) * area[:, None, None]
    T = mesh.triangles
    rows = np.repeat(T, 3, axis=1).ravel()
    cols = np.tile(T, (1, 3)).ravel()
    n = mesh.n_vertices
    K = sp.csr_matrix((Ke.ravel(), (rows, cols)), shape=(n, n))
    if lumped:
        d = np.zeros(n)
        np.add.at(d, T.ravel(), np.repeat(area / 3.0, 3))
        M = sp.diags(d).tocsr()
    else:
        Me = (np.ones((3, 3)) + np.eye(3))[None] * (area / 12.0)[:, None, None]
        M = sp.csr_matrix((Me.ravel(), (rows, cols)), shape=(n, n))
    K.sum_duplicates()
    M.sum_duplicates()
    return K, M


def dirichlet_nodes(mesh: TriMesh, markers=None) -> np.ndarray:
    """Vertices carrying one of ``markers`` (default: every nonzero marker)."""
    if markers is None:
        return np.nonzero(mesh.markers != 0)[0]
    return np.nonzero(np.isin(mesh.markers, list(markers)))[0]


def apply_dirichlet(K, M, mesh: TriMesh, markers=None) -> ReducedPencil:
    fixed = np.zeros(mesh.n_vertices, dtype=bool)
    fixed[dirichlet_nodes(mesh, markers)] = True
    free = np.nonzero(~fixed)[0]
    if len(free) == 0:
        raise ValueError("no free DOFs")
    K = K.tocsr()[free][:, free]
    M = M.tocsr()[free][:, free]
    return ReducedPencil(K.tocsr(), M.tocsr(), free, mesh.n_vertices)


def _residual(K, M, u, lam) -> float:
    Mu = M @ u
    return float(np.linalg.norm(K @ u - lam * Mu) / np.linalg.norm(Mu))


def smallest_eigenpair(K, M, settings: EigenSolveSettings | None = None) -> EigenPair:
    """Smallest eigenpair of K u = lambda M u for SPD K and M.

    Inverse iteration on a sparse LU factorization of K - shift M, started
    from the all-ones vector; stops when the relative residual
    |K u - lambda M u| / |M u| reaches the tolerance.
    """
    s = settings or EigenSolveSettings()
    n = K.shape[0]
    if n == 1:
        k = float(K[0, 0])
        m = float(M[0, 0])
        return EigenPair(k / m, np.array([1.0 / math.sqrt(m)]), 0.0, 0, True, 1.0)
    if s.method == "shift_invert_lanczos":
        w, V = spla.eigsh(K.tocsc(), k=1, M=M.tocsc(), sigma=s.shift, which="LM", tol=0.0)
        u = V[:, 0]
        u /= math.sqrt(u @ (M @ u))
        lam = float(u @ (K @ u))
        return _finalize(K, M, u, lam, 0, s)
    A = (K - s.shift * M).tocsc() if s.shift else K.tocsc()
    try:
        lu = spla.splu(A)
    except RuntimeError as exc:
        raise EigenSolveError(f"factorization failed: {exc}") from exc
    u = np.ones(n)
    u /= math.sqrt(u @ (M @ u))
    lam = float(u @ (K @ u))
    for it in range(1, s.max_iterations + 1):
        y = lu.solve(M @ u)
        u = y / math.sqrt(y @ (M @ y))
        lam = float(u @ (K @ u))
        res = _residual(K, M, u, lam)
        if res <= s.tolerance:
            return _finalize(K, M, u, lam, it, s, res)
    raise EigenSolveError(f"inverse iteration did not converge in {s.max_iterations} steps (residual {res:.3e})")


def _finalize(K, M, u, lam, it, s, res=None) -> EigenPair:
    if u.sum() < 0:
        u = -u
    res = _residual(K, M, u, lam) if res is None else res
    # P1 on obtuse red-refined triangles is not monotone: nodes in the thin
    # pockets next to tangent holes may dip slightly below zero
    ratio = float(u.min() / np.abs(u).max())
    positive = ratio >= -POSITIVITY_TOL
    if not positive:
        log.info("first eigenvector changes sign (min/max = %.3e)", ratio)
    return EigenPair(lam, u, res, it, positive, ratio)


def solve_mesh(mesh: TriMesh, settings: EigenSolveSettings | None = None, markers=None, lumped=False):
    K, M = assemble(mesh, lumped=lumped)
    red = apply_dirichlet(K, M, mesh, markers)
    return smallest_eigenpair(red.K, red.M, settings), red


@dataclass(frozen=True)
class LevelResult:
    level: int
    stats: MeshStats
    lambda1: float
    residual: float
    positive: bool
    min_ratio: float = 0.0
    mesh: TriMesh | None = field(default=None, repr=False)
    eigvec: np.ndarray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class Protocol:
    """Discretization protocol of the benchmark."""

    n_side: int = 8
    m_circle: int = 32
    inset: float = 5e-4
    inset_mode: str = "shift"
    engine: str = "native"


def lambda1(
    config: Configuration,
    levels: int = 3,
    settings: EigenSolveSettings | None = None,
    protocol: Protocol | None = None,
    keep: bool = False,
) -> list[LevelResult]:
    """polygonize, triangulate, refine ``levels`` times; solve at levels 1..levels.

    Level 0 (the raw CDT) is skipped because the empty square has no
    interior vertex there.
    """
    p = protocol or Protocol()
    dom = polygonize(config, p.n_side, p.m_circle, p.inset, p.inset_mode)
    mesh = triangulate(dom, engine=p.engine)
    out = []
    for lev in range(1, levels + 1):
        mesh = refine_red(mesh)
        ep, red = solve_mesh(mesh, settings)
        out.append(
            LevelResult(
                lev,
                stats(mesh),
                ep.value,
                ep.residual,
                ep.positive,
                ep.min_ratio,
                mesh if keep else None,
                red.scatter(ep.vector) if keep else None,
            )
        )
    return out


def eigenfunction_table(mesh: TriMesh, values: np.ndarray) -> str:
    lines = [f"values {mesh.n_vertices}"]
    lines += [f"{i} {float(v)!r}" for i, v in enumerate(values)]
    return "\n".join(lines) + "\n"
