import xml.etree.ElementTree as ET

import pytest

from outreg import svgplot
from outreg.simulate import run
from outreg.scenario import with_overrides


@pytest.fixture
def short_log(steady_cfg):
    return run(with_overrides(steady_cfg, t_end=5.0))


def _parse(svg):
    # raises if not well-formed XML
    return ET.fromstring(svg)


def test_plots_deterministic_and_well_formed(short_log):
    for fn in (svgplot.trajectory_svg, svgplot.error_svg,
               svgplot.estimates_svg, svgplot.khat_svg):
        one = fn(short_log)
        two = fn(short_log)
        assert one == two
        root = _parse(one)
        assert root.tag.endswith("svg")
        assert 'viewBox="0 0 760 440"' in one


def test_series_labels_present(short_log):
    assert "x1" in svgplot.trajectory_svg(short_log)
    assert "Tracking error" in svgplot.error_svg(short_log)
    est = svgplot.estimates_svg(short_log)
    for label in ("a11", "a21", "a23"):
        assert label in est
    assert "khat" in svgplot.khat_svg(short_log)


def test_line_chart_thins_long_series():
    n = 120000
    xs = tuple(float(i) for i in range(n))
    ys = tuple(float(i % 11) for i in range(n))
    svg = svgplot.line_chart([("long", xs, ys)], "big", "t", "y")
    _parse(svg)
    # every plotted point contributes one "x,y" token to the polyline
    body = svg.split("polyline")[1]
    assert body.count(",") <= 2100
    # the final sample survives thinning
    assert svg.count("points=") == 1


def test_constant_series_padded_axes():
    svg = svgplot.line_chart([("c", (0.0, 1.0, 2.0), (5.0, 5.0, 5.0))],
                             "flat", "t", "y")
    _parse(svg)
    assert "NaN" not in svg and "inf" not in svg


def test_empty_series_rejected():
    with pytest.raises(ValueError):
        svgplot.line_chart([("e", (), ())], "t", "x", "y")
    with pytest.raises(ValueError):
        svgplot.line_chart([], "t", "x", "y")


def test_mismatched_lengths_rejected():
    with pytest.raises(ValueError):
        svgplot.line_chart([("m", (0.0, 1.0), (1.0,))], "t", "x", "y")
