import re

import pytest

from mslab.render import RenderSpec, render


@pytest.mark.parametrize("model,glyphs", [("chi", 5), ("xi0", 6)])
def test_glyph_count(tmp_path, model, glyphs):
    out = tmp_path / f"{model}.svg"
    assert render(RenderSpec(model, str(out), size=256, density=8)) == glyphs
    svg = out.read_text("utf-8")
    assert svg.startswith("<svg")
    assert len(re.findall(r'class="glyph ', svg)) == glyphs


def test_smallest_allowed_spec(tmp_path):
    out = tmp_path / "small.svg"
    render(RenderSpec("xi0", str(out), size=64, density=4, emphasize=False))
    assert 'stroke-width="0.8"' in out.read_text("utf-8")


@pytest.mark.parametrize("size,density", [(32, 16), (512, 2)])
def test_invalid_spec(size, density):
    with pytest.raises(ValueError):
        RenderSpec("xi0", "x.svg", size=size, density=density)
