"""Text serialisation of nets.

A net file is one JSON header line followed by one point per line::

    {"dimension": 2, "epsilon_bound": "1/2", "level": 1, "space_tag": "cube"}
    0/2^0 0/2^0
    0/2^0 1/2^1
    ...

Coordinates are written in canonical form (odd numerator or exponent 0) and
points in lexicographic order, so writing a net that was read from a file
written here reproduces the file byte for byte. Punctured nets also carry
``center`` and ``d_squared`` in the header.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .netbuilder import Boundary, Cube, DyadicPoint, EpsNet, OffGridError, Punctured, points_to_grid

_COORD = re.compile(r"^(\d+)/2\^(\d+)$")


class NetFormatError(ValueError):
    pass


def header_of(net: EpsNet) -> dict:
    tag = net.space_tag
    header = {
        "dimension": net.dimension,
        "level": net.level,
        "epsilon_bound": str(net.epsilon_bound),
        "space_tag": tag.kind,
    }
    if isinstance(tag, Punctured):
        header["center"] = str(tag.center)
        header["d_squared"] = str(tag.d_squared)
    return header


def format_net(net: EpsNet) -> str:
    lines = [json.dumps(header_of(net), sort_keys=True)]
    for p in net.coords.tolist():
        lines.append(str(DyadicPoint.from_grid(p, net.level)))
    return "\n".join(lines) + "\n"


def parse_point(line: str, lineno: int | None = None) -> DyadicPoint:
    coords = []
    for token in line.split():
        m = _COORD.match(token)
        if m is None:
            raise NetFormatError(f"line {lineno}: bad coordinate {token!r}")
        coords.append((int(m.group(1)), int(m.group(2))))
    try:
        return DyadicPoint(tuple(coords))
    except ValueError as exc:
        raise NetFormatError(f"line {lineno}: {exc}") from None


def parse_net(text: str) -> EpsNet:
    lines = text.splitlines()
    if not lines:
        raise NetFormatError("empty net file")
    try:
        header = json.loads(lines[0])
        D, level = int(header["dimension"]), int(header["level"])
        eps = Fraction(header["epsilon_bound"])
        kind = header["space_tag"]
    except (ValueError, KeyError, TypeError) as exc:
        raise NetFormatError(f"bad header: {exc}") from None
    if kind == "cube":
        tag = Cube()
    elif kind == "boundary":
        tag = Boundary()
    elif kind == "punctured":
        try:
            tag = Punctured(parse_point(header["center"], 1), Fraction(header["d_squared"]))
        except (KeyError, ValueError) as exc:
            raise NetFormatError(f"bad punctured header: {exc}") from None
    else:
        raise NetFormatError(f"unknown space_tag {kind!r}")
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        p = parse_point(line, lineno)
        if p.dimension != D:
            raise NetFormatError(f"line {lineno}: expected {D} coordinates")
        if p.level > level:
            raise OffGridError(f"line {lineno}: {p} is not on the level-{level} grid")
        points.append(p)
    try:
        return EpsNet(D, level, points_to_grid(points, level, D), eps, tag)
    except OffGridError:
        raise
    except ValueError as exc:
        raise NetFormatError(str(exc)) from None


def format_csv(net: EpsNet) -> str:
    """Decimal point cloud for plotting; dyadic coordinates have exact decimal forms."""
    names = ",".join(f"x{i}" for i in range(net.dimension))
    rows = [names]
    for p in net.coords.tolist():
        rows.append(",".join(_decimal(k, net.level) for k in p))
    return "\n".join(rows) + "\n"


def _decimal(k: int, level: int) -> str:
    if level == 0 or k % (1 << level) == 0:
        return str(k >> level)
    digits = k * 5**level
    s = str(digits).rjust(level + 1, "0")
    return (s[:-level] + "." + s[-level:]).rstrip("0")
