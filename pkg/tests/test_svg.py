import re
from fractions import Fraction as Q

import pytest

from poncelet_lab import __version__
from poncelet_lab.geometry import BoundaryCircle, ConfocalPencil
from poncelet_lab.svg import FIGURE_SCENES, Polygon, SceneSpec, polygon_for, render_svg


@pytest.mark.parametrize("name", sorted(FIGURE_SCENES))
def test_figure_scenes(name, tmp_path):
    rep = render_svg(FIGURE_SCENES[name](), tmp_path / f"{name}.svg")
    assert rep.tangency_residuals and rep.max_tangency_residual < 1e-8
    text = rep.path.read_text()
    assert text.startswith("<?xml") and text.rstrip().endswith("</svg>")
    assert f"generator: poncelet_lab {__version__}" in text
    assert 'class="boundary"' in text and 'class="polygon"' in text


def test_rendering_is_deterministic(tmp_path):
    a = render_svg(FIGURE_SCENES["foci-on-circle"](), tmp_path / "a.svg").path.read_bytes()
    b = render_svg(FIGURE_SCENES["foci-on-circle"](), tmp_path / "b.svg").path.read_bytes()
    assert a == b


def test_quadrangle_scene_draws_two_members(tmp_path):
    scene = FIGURE_SCENES["foci-symmetric"]()
    assert len(scene.ts) == 2 and all(len(p.vertices) == 4 for p in scene.polygons)
    text = render_svg(scene, tmp_path / "s.svg").path.read_text()
    assert len(re.findall('class="focus"', text)) == 2
    assert len(re.findall('class="vertex"', text)) == 8


def test_hyperbola_member_is_clipped(tmp_path):
    g, p = BoundaryCircle(0, 0), ConfocalPencil(2, 1)
    scene = SceneSpec(circle=g, pencil=p, ts=(Q(3, 2),))
    rep = render_svg(scene, tmp_path / "h.svg")
    xs = [float(v) for v in re.findall(r"[ML](-?[\d.]+),", rep.path.read_text())]
    lo, _, w, _ = rep.viewbox
    assert min(xs) >= lo - 1e-9 and max(xs) <= lo + w + 1e-9


def test_scene_validation():
    g, p = BoundaryCircle(0, 0), ConfocalPencil(3, 1)
    poly = polygon_for(g, p, Q(3, 4), 3)
    with pytest.raises(ValueError):
        SceneSpec(circle=g, pencil=p, ts=(Q(0),), polygons=(poly,))
    with pytest.raises(ValueError):
        SceneSpec(circle=g, pencil=p, ts=(Q(3, 4),), polygons=(Polygon(poly.vertices, Q(3, 4), ""),))
    with pytest.raises(ValueError):
        SceneSpec(circle=g, pencil=p, ts=(Q(1),))
