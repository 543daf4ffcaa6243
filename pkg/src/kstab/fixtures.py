"""Line-oriented fixture files.

A fixture describes one polytope and named objects on it::

    # comments run to the end of the line
    [polytope]
    vertex 0 0
    vertex 1 0
    vertex 1 1
    vertex 0 2
    # or: halfspace -1 0 <= 0

    [actions]
    x = 1 0 | 0          # linear coefficients | constant

    [config step]
    piece 0 0 | 0        # f = max of the pieces
    piece 1 1 | -1
    cap 1                # optional, defaults to ceil(max f)

    [scan small]
    depths 1/8 1/4 3/8 1/2 5/8 3/4
    vertex 1 1           # optional, defaults to the repulsive vertex
    config step          # optional, the configuration being chopped

    [subdivision mid]
    point 0 0
    ...
    simplex 0 1 2        # point indices; or "triangulate delaunay [seed]",
                         # which uses the lattice points when no points are given

Numbers are integers or rationals ``p/q``; decimals are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .configs import AffineAction, TestConfig, make_config
from .exceptions import FixtureError, InputError
from .polytope import Polytope, lattice_points
from .subdivision import Subdivision, delaunay_like, make_subdivision

_NUMBER = re.compile(r"^[+-]?\d+(/\d+)?$")
_HEADER = re.compile(r"^\[\s*([a-z]+)(?:\s+([A-Za-z_][\w.-]*))?\s*\]$")

SECTIONS = {"polytope": False, "actions": False, "config": True, "scan": True, "subdivision": True}


@dataclass(frozen=True)
class Scan:
    depths: tuple
    vertex: tuple | None = None
    config: str | None = None


@dataclass
class Fixture:
    polytope: Polytope
    actions: dict = field(default_factory=dict)
    configs: dict = field(default_factory=dict)
    scans: dict = field(default_factory=dict)
    subdivisions: dict = field(default_factory=dict)
    name: str = ""

    def action(self, name: str):
        """Look up an action or configuration by name."""
        if name in self.actions:
            return self.actions[name]
        if name in self.configs:
            return self.configs[name]
        raise FixtureError(f"no action or config named {name!r}", field=name)


def _number(tok: str, line: int, fld: str) -> Fraction:
    if not _NUMBER.match(tok):
        raise FixtureError(f"expected an integer or p/q, got {tok!r}", line, fld)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise FixtureError(f"zero denominator in {tok!r}", line, fld) from None


def _numbers(toks, line, fld) -> tuple:
    return tuple(_number(t, line, fld) for t in toks)


def _affine(text: str, line: int, fld: str) -> tuple[tuple, Fraction]:
    if "|" not in text:
        raise FixtureError("expected 'coefficients | constant'", line, fld)
    lin, const = text.split("|", 1)
    c = const.split()
    if len(c) != 1:
        raise FixtureError("expected a single constant after '|'", line, fld)
    return _numbers(lin.split(), line, fld), _number(c[0], line, fld)


def _blocks(text: str):
    """Yield ``(kind, name, header line, [(line number, content)])``."""
    current = None
    for no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        if content.startswith("["):
            m = _HEADER.match(content)
            if not m:
                raise FixtureError(f"malformed section header {content!r}", no)
            kind, name = m.group(1), m.group(2)
            if kind not in SECTIONS:
                raise FixtureError(f"unknown section {kind!r}", no)
            if SECTIONS[kind] and not name:
                raise FixtureError(f"section [{kind}] needs a name", no)
            if not SECTIONS[kind] and name:
                raise FixtureError(f"section [{kind}] takes no name", no)
            if current:
                yield current
            current = (kind, name, no, [])
        else:
            if current is None:
                raise FixtureError("content before the first section header", no)
            current[3].append((no, content))
    if current:
        yield current


def _parse_polytope(lines, header) -> Polytope:
    verts, hs = [], []
    for no, content in lines:
        key, _, rest = content.partition(" ")
        if key == "vertex":
            verts.append(_numbers(rest.split(), no, "polytope.vertex"))
        elif key == "halfspace":
            if "<=" not in rest:
                raise FixtureError("expected 'halfspace a1 .. an <= b'", no, "polytope.halfspace")
            lhs, rhs = rest.split("<=", 1)
            b = rhs.split()
            if len(b) != 1:
                raise FixtureError("expected a single bound after '<='", no, "polytope.halfspace")
            hs.append((_numbers(lhs.split(), no, "polytope.halfspace"), _number(b[0], no, "polytope.halfspace")))
        else:
            raise FixtureError(f"unknown polytope entry {key!r}", no, "polytope")
    if verts and hs:
        raise FixtureError("give either vertices or halfspaces, not both", header, "polytope")
    if not verts and not hs:
        raise FixtureError("empty polytope section", header, "polytope")
    rows = verts or [a for a, _ in hs]
    if len({len(r) for r in rows}) != 1:
        raise FixtureError("entries have inconsistent dimensions", header, "polytope")
    try:
        return Polytope.from_vertices(verts) if verts else Polytope.from_halfspaces(hs)
    except InputError as exc:
        raise FixtureError(str(exc), header, "polytope") from exc


def parse_fixture(text: str, name: str = "") -> Fixture:
    """Parse fixture text; errors carry line numbers and a field path."""
    blocks = list(_blocks(text))
    poly_blocks = [b for b in blocks if b[0] == "polytope"]
    if len(poly_blocks) != 1:
        raise FixtureError("exactly one [polytope] section is required",
                           poly_blocks[1][2] if poly_blocks else None, "polytope")
    P = _parse_polytope(poly_blocks[0][3], poly_blocks[0][2])
    fx = Fixture(P, name=name)
    seen = set()
    for kind, bname, header, lines in blocks:
        if kind == "polytope":
            continue
        if kind == "actions":
            for no, content in lines:
                if "=" not in content:
                    raise FixtureError("expected 'name = coefficients | constant'", no, "actions")
                aname, body = (s.strip() for s in content.split("=", 1))
                fld = f"actions.{aname}"
                if aname in seen:
                    raise FixtureError(f"duplicate name {aname!r}", no, fld)
                lin, const = _affine(body, no, fld)
                if len(lin) != P.dim:
                    raise FixtureError(f"expected {P.dim} coefficients", no, fld)
                fx.actions[aname] = AffineAction(lin, const)
                seen.add(aname)
            continue
        fld = f"{kind}.{bname}"
        if bname in seen:
            raise FixtureError(f"duplicate name {bname!r}", header, fld)
        seen.add(bname)
        if kind == "config":
            fx.configs[bname] = _parse_config(P, lines, header, fld)
        elif kind == "scan":
            fx.scans[bname] = _parse_scan(P, lines, header, fld)
        else:
            fx.subdivisions[bname] = _parse_subdivision(P, lines, header, fld)
    for sname, scan in fx.scans.items():
        if scan.config is not None and scan.config not in fx.configs:
            raise FixtureError(f"scan refers to unknown config {scan.config!r}", field=f"scan.{sname}.config")
    return fx


def _parse_config(P, lines, header, fld) -> TestConfig:
    pieces, cap = [], None
    for no, content in lines:
        key, _, rest = content.partition(" ")
        if key == "piece":
            lin, const = _affine(rest, no, fld + ".piece")
            if len(lin) != P.dim:
                raise FixtureError(f"expected {P.dim} coefficients", no, fld + ".piece")
            pieces.append((lin, const))
        elif key == "cap":
            toks = rest.split()
            if len(toks) != 1:
                raise FixtureError("expected one number", no, fld + ".cap")
            cap = _number(toks[0], no, fld + ".cap")
        else:
            raise FixtureError(f"unknown config entry {key!r}", no, fld)
    if not pieces:
        raise FixtureError("a config needs at least one piece", header, fld)
    try:
        return make_config(P, pieces, cap)
    except InputError as exc:
        raise FixtureError(str(exc), header, fld) from exc


def _parse_scan(P, lines, header, fld) -> Scan:
    depths, vertex, cname = None, None, None
    for no, content in lines:
        key, _, rest = content.partition(" ")
        if key == "depths":
            depths = _numbers(rest.split(), no, fld + ".depths")
        elif key == "vertex":
            vertex = _numbers(rest.split(), no, fld + ".vertex")
            if vertex not in P.vertices:
                raise FixtureError("not a vertex of the polytope", no, fld + ".vertex")
        elif key == "config":
            toks = rest.split()
            if len(toks) != 1:
                raise FixtureError("expected one config name", no, fld + ".config")
            cname = toks[0]
        else:
            raise FixtureError(f"unknown scan entry {key!r}", no, fld)
    if not depths:
        raise FixtureError("a scan needs a depths line", header, fld)
    return Scan(depths, vertex, cname)


def _parse_subdivision(P, lines, header, fld) -> Subdivision:
    points, simplices, mode = [], [], None
    for no, content in lines:
        key, _, rest = content.partition(" ")
        if key == "point":
            pt = _numbers(rest.split(), no, fld + ".point")
            if len(pt) != P.dim:
                raise FixtureError(f"expected {P.dim} coordinates", no, fld + ".point")
            points.append(pt)
        elif key == "simplex":
            idx = rest.split()
            if not all(t.isdigit() for t in idx):
                raise FixtureError("simplex entries are point indices", no, fld + ".simplex")
            simplices.append([int(t) for t in idx])
        elif key == "triangulate":
            args = rest.split()
            if not args or args[0] != "delaunay" or len(args) > 2 or (len(args) == 2 and not args[1].isdigit()):
                raise FixtureError("expected 'triangulate delaunay [seed]'", no, fld + ".triangulate")
            mode = int(args[1]) if len(args) == 2 else 0
        else:
            raise FixtureError(f"unknown subdivision entry {key!r}", no, fld)
    if mode is not None and simplices:
        raise FixtureError("give simplices or 'triangulate', not both", header, fld)
    try:
        if mode is not None:
            return delaunay_like(P, points or lattice_points(P), mode)
        return make_subdivision(P, points, simplices)
    except InputError as exc:
        raise FixtureError(str(exc), header, fld) from exc


def load_fixture(path) -> Fixture:
    """Load a fixture from a path, or a shipped fixture by bare name (``cp1``, ``blp2`` ...)."""
    p = Path(path)
    if p.exists():
        return parse_fixture(p.read_text(), p.stem)
    shipped = resources.files("kstab") / "data" / f"{path}.fixture"
    if shipped.is_file():
        return parse_fixture(shipped.read_text(), str(path))
    raise FixtureError(f"no such fixture file: {path}")


def shipped_fixtures() -> list[str]:
    root = resources.files("kstab") / "data"
    return sorted(p.name[: -len(".fixture")] for p in root.iterdir() if p.name.endswith(".fixture"))
