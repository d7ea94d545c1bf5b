"""First Dirichlet eigenvalue of the square with two circular holes.

Modules: ``geometry`` (configurations and polygons), ``mesh`` (constrained
Delaunay meshing, red refinement), ``fem`` (P1 assembly, eigen-solver),
``cell`` (corner-cell potentials and constants), ``bench`` (tables, scans,
scaling fits) and ``cli``.
"""

from .fem import EigenSolveSettings, Protocol, lambda1
from .geometry import (
    Configuration,
    CornerParams,
    contact_family,
    empty_config,
    make_branch_config,
    make_contact_config,
    make_endpoint_config,
    make_same_corner_config,
    make_side_config,
    polygonize,
)
from .mesh import TriMesh, refine_red, triangulate

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "CornerParams",
    "EigenSolveSettings",
    "Protocol",
    "TriMesh",
    "contact_family",
    "empty_config",
    "lambda1",
    "make_branch_config",
    "make_contact_config",
    "make_endpoint_config",
    "make_same_corner_config",
    "make_side_config",
    "polygonize",
    "refine_red",
    "triangulate",
]
