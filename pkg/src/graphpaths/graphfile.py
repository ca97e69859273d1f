"""Reading and writing presented graphs.

The text format has four sections, each introduced by a header line; blank
lines and ``#`` comments are ignored::

    vertices: v u w b
    edges:
      nu1 u v            # id source range
      g b u
    families:
      e v prefix=[] cycle=[w]
    tails:
      nu w                                   # no entries
      s v entries: prefix=[{a:w}, {}] cycle=[{d:w, d2:u}]
      r v entries: support={3:{a:w}}         # finite support

Vertices may also be listed one per line under ``vertices:``.  A slot
``{label:source, ...}`` lists the entry edges at one tail vertex.

DOT output embeds the text form in a leading comment block, so
``parse_graph(to_dot(g)) == g``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graph import Family, GraphError, PresentedGraph, Tail, validate
from .sequences import EventuallyPeriodic, FiniteSupport

SECTIONS = ("vertices", "edges", "families", "tails")


class GraphSyntaxError(GraphError):
    def __init__(self, message: str, line: int = 0, source: str = "<graph>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


@dataclass
class _Line:
    number: int
    text: str


def _strip_comment(text: str) -> str:
    return text.split("#", 1)[0].rstrip() if not text.lstrip().startswith("//") else ""


def _embedded(text: str):
    """The presentation block inside DOT output, or ``None``."""
    if "digraph" not in text:
        return None
    lines = []
    inside = False
    for raw in text.splitlines():
        s = raw.strip()
        if s == "// begin presentation":
            inside = True
        elif s == "// end presentation":
            return "\n".join(lines)
        elif inside and s.startswith("//"):
            lines.append(s[3:] if s.startswith("// ") else s[2:])
    return None


def _items(body: str, what: str, line: _Line, source: str) -> list:
    """Split a bracketed list on top-level commas."""
    body = body.strip()
    if not body:
        return []
    out, depth, start = [], 0, 0
    for i, c in enumerate(body):
        if c in "[{":
            depth += 1
        elif c in "]}":
            depth -= 1
        elif c == "," and depth == 0:
            out.append(body[start:i].strip())
            start = i + 1
    out.append(body[start:].strip())
    if any(not s for s in out):
        raise GraphSyntaxError(f"empty item in {what}", line.number, source)
    return out


def _bracket(text: str, key: str, open_: str, close: str, line: _Line, source: str):
    m = re.search(rf"\b{key}\s*=\s*\{open_}", text)
    if not m:
        return None
    i = m.end() - 1
    depth = 0
    for j in range(i, len(text)):
        if text[j] == open_:
            depth += 1
        elif text[j] == close:
            depth -= 1
            if depth == 0:
                return text[i + 1 : j]
    raise GraphSyntaxError(f"unbalanced {open_}{close} after {key}=", line.number, source)


def _slot(text: str, line: _Line, source: str) -> tuple:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise GraphSyntaxError(f"slot must look like {{label:source, ...}}, got {text!r}", line.number, source)
    out = []
    for item in _items(text[1:-1], "slot", line, source):
        label, colon, src = item.partition(":")
        if not colon or not label.strip() or not src.strip():
            raise GraphSyntaxError(f"bad entry {item!r}; expected label:source", line.number, source)
        out.append((label.strip(), src.strip()))
    return tuple(out)


def parse_graph(text: str, source: str = "<graph>", check: bool = True) -> PresentedGraph:
    """Parse the text format (or DOT output of :func:`to_dot`) and validate."""
    inner = _embedded(text)
    if inner is not None:
        text = inner
    section = None
    vertices, edges, families, tails = [], [], [], []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        line = _Line(number, body)
        head, colon, rest = body.strip().partition(":")
        if colon and head.strip() in SECTIONS and not raw[:1].isspace():
            section = head.strip()
            body = rest
            if not body.strip():
                continue
        elif colon and not raw[:1].isspace() and head.strip().isidentifier():
            raise GraphSyntaxError(f"unknown section {head.strip()!r}", number, source)
        elif section is None:
            raise GraphSyntaxError(f"expected a section header, got {body.strip()!r}", number, source)
        words = body.split()
        if section == "vertices":
            vertices.extend(words)
        elif section == "edges":
            if len(words) != 3:
                raise GraphSyntaxError("edge lines are 'id source range'", number, source)
            edges.append(tuple(words))
        elif section == "families":
            families.append(_family(body, line, source))
        else:
            tails.append(_tail(body, line, source))
    g = PresentedGraph(tuple(vertices), tuple(edges), tuple(families), tuple(tails))
    report = validate(g) if check else None
    if report is not None and not report.ok:
        raise GraphSyntaxError(f"invalid graph: {report}", 0, source)
    return g


def _family(body: str, line: _Line, source: str) -> Family:
    words = body.split()
    if len(words) < 2:
        raise GraphSyntaxError("family lines are 'id range prefix=[...] cycle=[...]'", line.number, source)
    prefix = _bracket(body, "prefix", "[", "]", line, source)
    cycle = _bracket(body, "cycle", "[", "]", line, source)
    if cycle is None:
        raise GraphSyntaxError(f"family {words[0]} needs cycle=[...]", line.number, source)
    pre = tuple(_items(prefix or "", "prefix", line, source))
    cyc = tuple(_items(cycle, "cycle", line, source))
    return Family(words[0], words[1], EventuallyPeriodic(pre, cyc))


def _tail(body: str, line: _Line, source: str) -> Tail:
    head, sep, spec = body.partition("entries:")
    words = head.split()
    if len(words) != 2:
        raise GraphSyntaxError("tail lines are 'id attach [entries: ...]'", line.number, source)
    tid, attach = words
    if not sep:
        return Tail(tid, attach, EventuallyPeriodic())
    support = _bracket(spec, "support", "{", "}", line, source)
    if support is not None:
        pairs = []
        for item in _items(support, "support", line, source):
            idx, colon, slot = item.partition(":")
            if not colon or not idx.strip().isdigit():
                raise GraphSyntaxError(f"bad support item {item!r}", line.number, source)
            pairs.append((int(idx), _slot(slot, line, source)))
        return Tail(tid, attach, FiniteSupport(tuple(pairs)))
    prefix = _bracket(spec, "prefix", "[", "]", line, source) or ""
    cycle = _bracket(spec, "cycle", "[", "]", line, source) or ""
    pre = tuple(_slot(s, line, source) for s in _items(prefix, "prefix", line, source))
    cyc = tuple(_slot(s, line, source) for s in _items(cycle, "cycle", line, source))
    return Tail(tid, attach, EventuallyPeriodic(pre, cyc))


def _fmt_slot(slot) -> str:
    return "{" + ", ".join(f"{lab}:{src}" for lab, src in slot) + "}"


def format_graph(g: PresentedGraph) -> str:
    lines = ["vertices: " + " ".join(g.vertices)]
    if g.edges:
        lines.append("edges:")
        lines += [f"  {e} {s} {r}" for e, s, r in g.edges]
    if g.families:
        lines.append("families:")
        for f in g.families:
            pre = ", ".join(f.sources.prefix)
            cyc = ", ".join(f.sources.cycle)
            lines.append(f"  {f.id} {f.range} prefix=[{pre}] cycle=[{cyc}]")
    if g.tails:
        lines.append("tails:")
        for t in g.tails:
            if isinstance(t.entries, FiniteSupport):
                sup = ", ".join(f"{j}:{_fmt_slot(s)}" for j, s in t.entries.support)
                lines.append(f"  {t.id} {t.attach} entries: support={{{sup}}}")
            elif not t.entries.prefix and not t.entries.cycle:
                lines.append(f"  {t.id} {t.attach}")
            else:
                pre = ", ".join(map(_fmt_slot, t.entries.prefix))
                cyc = ", ".join(map(_fmt_slot, t.entries.cycle))
                lines.append(f"  {t.id} {t.attach} entries: prefix=[{pre}] cycle=[{cyc}]")
    return "\n".join(lines) + "\n"


def read_graph(path, check: bool = True) -> PresentedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), source=str(path), check=check)


def write_graph(g: PresentedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))


def _q(name) -> str:
    return '"' + str(name).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: PresentedGraph, levels: int = 3) -> str:
    """Graphviz rendering: core exactly, ``levels`` tail vertices, families as one edge.

    Arrows point from source to range.
    """
    out = ["// begin presentation"]
    out += [f"// {line}" if line else "//" for line in format_graph(g).splitlines()]
    out += ["// end presentation", "digraph G {", "  rankdir=RL;"]
    for v in g.vertices:
        out.append(f"  {_q(v)};")
    for e, s, r in g.edges:
        out.append(f"  {_q(s)} -> {_q(r)} [label={_q(e)}];")
    for f in g.families:
        pattern = f"prefix=[{', '.join(f.sources.prefix)}] cycle=[{', '.join(f.sources.cycle)}]"
        for s in sorted(f.sources.values()):
            out.append(f'  {_q(s)} -> {_q(f.range)} [label={_q(f.id + "[*] " + pattern)}, style=bold, penwidth=3];')
    for t in g.tails:
        prev = t.attach
        for j in range(1, levels + 1):
            node = f"{t.id}#{j}"
            out.append(f"  {_q(node)} [shape=point];")
            out.append(f"  {_q(node)} -> {_q(prev)} [label={_q(f'{t.id}[{j}]')}];")
            for label, src in t.slot(j):
                out.append(f"  {_q(src)} -> {_q(node)} [label={_q(label)}, style=dashed];")
            prev = node
        dots = f"{t.id}#more"
        out.append(f'  {_q(dots)} [label="...", shape=plaintext];')
        out.append(f"  {_q(dots)} -> {_q(prev)} [style=dotted];")
    out.append("}")
    return "\n".join(out) + "\n"
