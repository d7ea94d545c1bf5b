import xml.etree.ElementTree as ET

import numpy as np
import pytest

from twoholes import geometry as G
from twoholes.mesh import refine_red, triangulate
from twoholes.svg import _colour, heatmap_svg, line_plot, mesh_svg


@pytest.fixture(scope="module")
def mesh():
    return refine_red(triangulate(G.polygonize(G.make_branch_config("cluster", 0.08))))


def test_mesh_svg_is_valid_xml(mesh):
    root = ET.fromstring(mesh_svg(mesh))
    polys = root.findall(".//{http://www.w3.org/2000/svg}polygon")
    assert len(polys) == mesh.n_triangles


def test_heatmap(mesh):
    vals = np.hypot(*mesh.vertices.T)
    root = ET.fromstring(heatmap_svg(mesh, vals))
    assert len(root.findall("{http://www.w3.org/2000/svg}polygon")) == mesh.n_triangles
    with pytest.raises(ValueError):
        heatmap_svg(mesh, vals[:-1])


def test_colour_endpoints():
    assert _colour(0.0) == "#440154"
    assert _colour(1.0) == "#fde725"
    assert _colour(-5) == _colour(0.0)


def test_line_plot():
    svg = line_plot({"a": ([1, 2, 3], [3.0, 2.0, 1.5]), "b & c": ([1, 3], [1.0, 1.0])}, "t<1>", "x", "y")
    root = ET.fromstring(svg)
    assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 2
    with pytest.raises(ValueError):
        line_plot({})
