from fractions import Fraction

import pytest

from kstab.exceptions import FixtureError
from kstab.fixtures import load_fixture, parse_fixture, shipped_fixtures

GOOD = """
# trapezoid
[polytope]
vertex 0 0
vertex 1 0
vertex 1 1
vertex 0 2

[actions]
x = 1 0 | 0
half = 1/2 0 | -1/3

[config crease]
piece 0 0 | 0
piece 1 1 | -1
cap 2

[scan s]
config crease
depths 1/16 1/8
vertex 0 2

[subdivision tri]
point 0 0
point 1 0
point 1 1
point 0 2
simplex 0 1 2
simplex 0 2 3
"""


def test_parses_every_section():
    fx = parse_fixture(GOOD, "trap")
    assert fx.polytope.volume() == Fraction(3, 2)
    assert fx.actions["half"].linear == (Fraction(1, 2), 0)
    assert fx.configs["crease"].cap == 2
    assert fx.scans["s"].depths == (Fraction(1, 16), Fraction(1, 8))
    assert fx.scans["s"].config == "crease"
    assert len(fx.subdivisions["tri"].simplices) == 2
    assert fx.action("crease") is fx.configs["crease"]


def test_halfspace_form():
    fx = parse_fixture("[polytope]\nhalfspace -1 <= 0\nhalfspace 1 <= 3\n")
    assert fx.polytope.volume() == 3


@pytest.mark.parametrize("text, line, fld", [
    ("[polytope]\nvertex 0 0\nvertex 1 0.5\nvertex 0 1\n", 3, "polytope.vertex"),
    ("[polytope]\nvertex 0 0\nvertex 1 0\nvertex 0 1\n[actions]\nx = 1 | 0\n", 6, "actions.x"),
    ("[polytope]\nvertex 0 0\nvertex 1 0\nvertex 0 1\n[config c]\npiece 1 0 | 0\nlevel 3\n", 7, "config.c"),
    ("[polytope]\nvertex 0\nvertex 1\n[scan s]\nvertex 1/2\ndepths 1/4\n", 5, "scan.s.vertex"),
    ("[polytope]\nvertex 0\nvertex 1\n[wat]\n", None, None),
])
def test_errors_carry_line_and_field(text, line, fld):
    with pytest.raises(FixtureError) as info:
        parse_fixture(text)
    if line is not None:
        assert info.value.line == line
        assert info.value.field == fld
        assert f"line {line}" in str(info.value)


def test_duplicate_names_rejected():
    text = "[polytope]\nvertex 0\nvertex 1\n[actions]\nx = 1 | 0\n[config x]\npiece 1 | 0\n"
    with pytest.raises(FixtureError, match="duplicate"):
        parse_fixture(text)


def test_scan_must_name_a_known_config():
    text = "[polytope]\nvertex 0\nvertex 1\n[scan s]\nconfig nope\ndepths 1/4\n"
    with pytest.raises(FixtureError, match="unknown config"):
        parse_fixture(text)


def test_bad_subdivision_reported_on_its_header():
    text = "[polytope]\nvertex 0\nvertex 1\n[subdivision bad]\npoint 0\npoint 1\npoint 1/2\nsimplex 0 1\n"
    with pytest.raises(FixtureError) as info:
        parse_fixture(text)
    assert info.value.field == "subdivision.bad"


def test_shipped_fixtures_load():
    names = shipped_fixtures()
    assert {"cp1", "blp2", "simplex2", "simplex3", "square", "pentagon"} <= set(names)
    for n in names:
        assert load_fixture(n).name == n


def test_load_from_path(tmp_path):
    p = tmp_path / "trap.fixture"
    p.write_text(GOOD)
    assert load_fixture(p).name == "trap"
    with pytest.raises(FixtureError):
        load_fixture(tmp_path / "missing.fixture")
