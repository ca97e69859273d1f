"""Text syntax for paths, cylinders and diagonal elements.

Paths are written range-first as dotted edge ids::

    v                  the length-0 path at v
    nu1.g.f            three edges
    nu1~(g.f.nu1)      nu1 then g f nu1 repeated; ``v~(c)`` for an empty prefix
    nu1.nu2@nu         nu1 nu2 then every edge of tail ``nu``; ``w@nu`` alone

Edges of infinite families are ``e[3]``, tail edges ``nu[2]``, entry edges
``nu#2/label``, tail vertices ``nu#2``.

Cylinders: ``stem`` or ``stem\\{e1,e2}``.  Elements: ``(1/2+3i)*P(nu1.g) - P(v)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .graph import EntryEdge, FamilyEdge, GraphError, PresentedGraph, TailEdge, TailVertex
from .paths import Absorbed, Path, PathError, Periodic, check_walk
from .scalars import Gaussian


class LiteralError(ValueError):
    pass


def format_vertex(v) -> str:
    return str(v)


def format_edge(e) -> str:
    return str(e)


def format_path(x) -> str:
    if x.is_finite:
        if not x.edges:
            return str(x.vertex)
        return ".".join(map(str, x.edges))
    head = ".".join(map(str, x.prefix.edges)) if x.prefix.edges else str(x.vertex)
    if isinstance(x, Periodic):
        return f"{head}~({'.'.join(map(str, x.cycle))})"
    return f"{head}@{x.tail}"


_TAIL_VERTEX = re.compile(r"^([^#]+)#(\d+)$")
_ENTRY = re.compile(r"^([^#]+)#(\d+)/(.+)$")
_INDEXED = re.compile(r"^(.+)\[(\d+)\]$")


def parse_vertex(g: PresentedGraph, text: str):
    text = text.strip()
    m = _TAIL_VERTEX.match(text)
    if m and g.has_tail(m.group(1)):
        v = TailVertex(m.group(1), int(m.group(2)))
    else:
        v = text
    if not g.has_vertex(v):
        raise LiteralError(f"unknown vertex {text!r}")
    return v


def parse_edge(g: PresentedGraph, text: str):
    text = text.strip()
    if g.has_edge(text):
        return text
    m = _ENTRY.match(text)
    if m:
        e = EntryEdge(m.group(1), int(m.group(2)), m.group(3))
    else:
        m = _INDEXED.match(text)
        if not m:
            raise LiteralError(f"unknown edge {text!r}")
        name, idx = m.group(1), int(m.group(2))
        if g.has_family(name):
            e = FamilyEdge(name, idx)
        elif g.has_tail(name):
            e = TailEdge(name, idx)
        else:
            raise LiteralError(f"unknown edge {text!r}")
    if not g.has_edge(e):
        raise LiteralError(f"unknown edge {text!r}")
    return e


def _edges_or_vertex(g: PresentedGraph, text: str) -> Path:
    if not text:
        raise LiteralError("empty path literal")
    parts = text.split(".")
    if len(parts) == 1:
        try:
            return Path(parse_vertex(g, parts[0]))
        except LiteralError:
            pass
    edges = tuple(parse_edge(g, p) for p in parts)
    return Path(g.range(edges[0]), edges)


def parse_path(g: PresentedGraph, text: str):
    """Inverse of :func:`format_path`; the result is checked against ``g``."""
    text = text.strip()
    try:
        if "~" in text:
            head, _, rest = text.partition("~")
            if not (rest.startswith("(") and rest.endswith(")")):
                raise LiteralError(f"cycle must be parenthesised in {text!r}")
            prefix = _edges_or_vertex(g, head)
            cycle = tuple(parse_edge(g, p) for p in rest[1:-1].split("."))
            x = Periodic(prefix, cycle)
        elif "@" in text:
            head, _, tid = text.partition("@")
            if not g.has_tail(tid):
                raise LiteralError(f"unknown tail {tid!r}")
            x = Absorbed(_edges_or_vertex(g, head), tid)
        else:
            x = _edges_or_vertex(g, text)
        check_walk(g, x)
    except (PathError, GraphError) as exc:
        raise LiteralError(f"{text!r}: {exc}") from None
    return x


def parse_relative(g: PresentedGraph, start, text: str) -> Path:
    """A finite path with range ``start``; ``start`` itself names the empty path."""
    text = text.strip()
    if text == str(start):
        return Path(start)
    p = _edges_or_vertex(g, text)
    if p.vertex != start:
        raise LiteralError(f"{text!r} does not have range {start}")
    return p


# cylinders


def format_cylinder(z) -> str:
    from .cylinders import Cylinder

    stem = format_path(z.stem)
    if not z.forbidden:
        return stem
    if isinstance(z, Cylinder):
        items = sorted(map(str, z.forbidden))
    else:
        items = sorted(format_path(p) for p in z.forbidden)
    return f"{stem}\\{{{','.join(items)}}}"


def parse_cylinder(g: PresentedGraph, text: str, general: bool = False):
    from .cylinders import Cylinder, GeneralCylinder, check_cylinder
    from .paths import source

    text = text.strip()
    head, sep, rest = text.partition("\\")
    stem = parse_path(g, head)
    if not stem.is_finite:
        raise LiteralError("a cylinder stem must be finite")
    items = []
    if sep:
        rest = rest.strip()
        if not (rest.startswith("{") and rest.endswith("}")):
            raise LiteralError(f"forbidden set must be braced in {text!r}")
        items = [s for s in (p.strip() for p in rest[1:-1].split(",")) if s]
    at = source(g, stem)
    try:
        if general:
            z = GeneralCylinder(stem, frozenset(parse_relative(g, at, s) for s in items))
        else:
            z = Cylinder(stem, frozenset(parse_edge(g, s) for s in items))
        check_cylinder(g, z)
    except (PathError, GraphError) as exc:
        raise LiteralError(f"{text!r}: {exc}") from None
    return z


# scalars and elements

_SCALAR = re.compile(r"^([+-]?\d+(?:/\d+)?)?(?:([+-])?(\d+(?:/\d+)?)?i)?$")


def parse_scalar(text: str) -> Gaussian:
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise LiteralError("empty scalar")
    # split into real and imaginary parts at the last top-level sign
    if s.endswith("i"):
        cut = max(s.rfind("+", 1), s.rfind("-", 1))
        real_txt, imag_txt = (s[:cut], s[cut:-1]) if cut > 0 else ("0", s[:-1])
        if imag_txt in ("", "+"):
            imag_txt = "1"
        elif imag_txt == "-":
            imag_txt = "-1"
    else:
        real_txt, imag_txt = s, "0"
    try:
        return Gaussian(Fraction(real_txt), Fraction(imag_txt))
    except (ValueError, ZeroDivisionError):
        raise LiteralError(f"bad scalar {text!r}") from None


def _split_terms(text: str) -> list:
    """``[(sign, body), ...]`` split at top-level ``+``/``-``."""
    out, depth, start, sign = [], 0, 0, 1
    s = text.strip()
    i = 0
    if s[:1] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = start = 1
    while i < len(s):
        c = s[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif c in "+-" and depth == 0:
            out.append((sign, s[start:i].strip()))
            sign = -1 if c == "-" else 1
            start = i + 1
        i += 1
    out.append((sign, s[start:].strip()))
    return out


def parse_element(g: PresentedGraph, text: str):
    """A diagonal element from ``c1*P(path) + c2*P(path) ...``; ``0`` is the zero element."""
    from .diagonal import DiagonalElement

    if text.strip() == "0":
        return DiagonalElement(g, {})
    terms = {}
    for sign, body in _split_terms(text):
        if not body:
            raise LiteralError(f"empty term in {text!r}")
        coeff_txt, star, proj = body.rpartition("*")
        if not star:
            proj, coeff_txt = body, "1"
        proj = proj.strip()
        if not (proj.startswith("P(") and proj.endswith(")")):
            raise LiteralError(f"expected P(path) in term {body!r}")
        p = parse_path(g, proj[2:-1])
        if not p.is_finite:
            raise LiteralError("projections are indexed by finite paths")
        c = parse_scalar(coeff_txt) * sign
        terms[p] = terms.get(p, Gaussian(0)) + c
    return DiagonalElement(g, terms)


def format_element(a) -> str:
    from .paths import sorted_paths

    if not a.terms:
        return "0"
    parts = []
    for p in sorted_paths(a.terms):
        c = a.terms[p]
        neg = not c.im and c.re < 0
        mag = -c if neg else c
        coeff = str(mag)
        if mag.im and not coeff.startswith("("):
            coeff = f"({coeff})"
        body = f"P({format_path(p)})" if mag == 1 else f"{coeff}*P({format_path(p)})"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


__all__ = [
    "LiteralError",
    "format_path",
    "parse_path",
    "parse_vertex",
    "parse_edge",
    "parse_relative",
    "format_cylinder",
    "parse_cylinder",
    "parse_scalar",
    "parse_element",
    "format_element",
]
