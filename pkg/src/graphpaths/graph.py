"""Finitely presented directed graphs.

A presented graph has a finite core (vertices and edges), finitely many
infinite edge families, each making its range vertex an infinite receiver,
and finitely many tails: infinite paths ``mu_1 mu_2 ...`` hanging off a core
vertex, whose vertices may receive finitely many entry edges from the core.

Paths compose at the source end: ``s(mu_i) = r(mu_(i+1))``.  A tail's first
edge ``mu_1`` therefore has range ``attach`` and source ``t_1``, and
``mu_(i+1)`` runs from ``t_(i+1)`` to ``t_i``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Union

from .sequences import EventuallyPeriodic, FiniteSupport

INFINITE = math.inf

RESERVED = set(".[]#/@~(){}\\,*+-:;=\"' \t\n")
_ID_RE = re.compile(r"^[^\s.\[\]#/@~(){}\\,*+\-:;=\"']+$")


def is_valid_id(name) -> bool:
    return isinstance(name, str) and bool(_ID_RE.match(name))


@dataclass(frozen=True, order=True)
class TailVertex:
    tail: str
    index: int

    def __str__(self):
        return f"{self.tail}#{self.index}"


@dataclass(frozen=True, order=True)
class FamilyEdge:
    family: str
    index: int

    def __str__(self):
        return f"{self.family}[{self.index}]"


@dataclass(frozen=True, order=True)
class TailEdge:
    tail: str
    index: int

    def __str__(self):
        return f"{self.tail}[{self.index}]"


@dataclass(frozen=True, order=True)
class EntryEdge:
    """An edge entering a tail at ``t_index``, identified by its slot label."""

    tail: str
    index: int
    label: str

    def __str__(self):
        return f"{self.tail}#{self.index}/{self.label}"


Vertex = Union[str, TailVertex]
Edge = Union[str, FamilyEdge, TailEdge, EntryEdge]

_KIND_ORDER = {str: 0, FamilyEdge: 1, TailEdge: 2, EntryEdge: 3, TailVertex: 4}


def sort_key(item) -> tuple:
    """Total order on vertices and edges of every kind."""
    kind = _KIND_ORDER[type(item)]
    if isinstance(item, str):
        return (kind, item)
    return (kind,) + tuple(getattr(item, f) for f in item.__dataclass_fields__)


@dataclass(frozen=True)
class Family:
    """Edges ``id[1], id[2], ...`` into ``range`` with eventually periodic sources."""

    id: str
    range: str
    sources: EventuallyPeriodic


@dataclass(frozen=True)
class Tail:
    """An appended infinite path at ``attach``.

    ``entries[j]`` is a tuple of ``(label, source)`` pairs: the edges with
    range ``t_j`` other than ``mu_(j+1)``.
    """

    id: str
    attach: str
    entries: Union[EventuallyPeriodic, FiniteSupport] = field(default_factory=EventuallyPeriodic)

    def slot(self, j: int) -> tuple:
        return tuple(self.entries[j])

    def has_entries(self) -> bool:
        canon = self.entries.canonical()
        return bool(canon.prefix or canon.cycle)

    def has_infinitely_many_entries(self) -> bool:
        if isinstance(self.entries, FiniteSupport):
            return False
        return any(slot for slot in self.entries.canonical().cycle)


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Issue:
    kind: str
    id: object
    message: str

    def __str__(self):
        return f"{self.kind}: {self.id}: {self.message}"


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(i) for i in self.issues)


@dataclass(frozen=True)
class PresentedGraph:
    vertices: tuple = ()
    edges: tuple = ()  # ((id, source, range), ...)
    families: tuple = ()
    tails: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(tuple(e) for e in self.edges)))
        object.__setattr__(self, "families", tuple(sorted(self.families, key=lambda f: f.id)))
        object.__setattr__(self, "tails", tuple(sorted(self.tails, key=lambda t: t.id)))

    # lookups

    @cached_property
    def _edge_table(self) -> dict:
        return {e: (s, r) for e, s, r in self.edges}

    @cached_property
    def _family_table(self) -> dict:
        return {f.id: f for f in self.families}

    @cached_property
    def _tail_table(self) -> dict:
        return {t.id: t for t in self.tails}

    @cached_property
    def _core_in(self) -> dict:
        table = {v: [] for v in self.vertices}
        for e, _, r in self.edges:
            table.setdefault(r, []).append(e)
        return table

    @cached_property
    def _core_out(self) -> dict:
        table = {v: [] for v in self.vertices}
        for e, s, _ in self.edges:
            table.setdefault(s, []).append(e)
        return table

    @cached_property
    def _families_at(self) -> dict:
        table = {}
        for f in self.families:
            table.setdefault(f.range, []).append(f)
        return table

    @cached_property
    def _tails_at(self) -> dict:
        table = {}
        for t in self.tails:
            table.setdefault(t.attach, []).append(t)
        return table

    def family(self, fid: str) -> Family:
        try:
            return self._family_table[fid]
        except KeyError:
            raise GraphError(f"unknown family {fid!r}") from None

    def tail(self, tid: str) -> Tail:
        try:
            return self._tail_table[tid]
        except KeyError:
            raise GraphError(f"unknown tail {tid!r}") from None

    def has_tail(self, tid) -> bool:
        return tid in self._tail_table

    def has_family(self, fid) -> bool:
        return fid in self._family_table

    @property
    def is_row_finite(self) -> bool:
        return not self.families

    def has_vertex(self, v) -> bool:
        if isinstance(v, TailVertex):
            return v.tail in self._tail_table and v.index >= 1
        return v in self._vertex_set

    @cached_property
    def _vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def is_core(self, v) -> bool:
        return isinstance(v, str) and v in self._vertex_set

    def _require_vertex(self, v):
        if isinstance(v, TailVertex):
            if v.tail not in self._tail_table or v.index < 1:
                raise GraphError(f"unknown vertex {v}")
        elif v not in self._vertex_set:
            raise GraphError(f"unknown vertex {v!r}")

    def has_edge(self, e) -> bool:
        try:
            self.endpoints(e)
        except GraphError:
            return False
        return True

    def endpoints(self, e) -> tuple:
        """``(source, range)`` of an edge."""
        if isinstance(e, str):
            try:
                return self._edge_table[e]
            except KeyError:
                raise GraphError(f"unknown edge {e!r}") from None
        if isinstance(e, FamilyEdge):
            f = self.family(e.family)
            if e.index < 1:
                raise GraphError(f"unknown edge {e}")
            return f.sources[e.index], f.range
        if isinstance(e, TailEdge):
            t = self.tail(e.tail)
            if e.index < 1:
                raise GraphError(f"unknown edge {e}")
            rng = t.attach if e.index == 1 else TailVertex(t.id, e.index - 1)
            return TailVertex(t.id, e.index), rng
        if isinstance(e, EntryEdge):
            t = self.tail(e.tail)
            if e.index >= 1:
                for label, src in t.slot(e.index):
                    if label == e.label:
                        return src, TailVertex(t.id, e.index)
            raise GraphError(f"unknown edge {e}")
        raise GraphError(f"not an edge: {e!r}")

    def source(self, e) -> Vertex:
        return self.endpoints(e)[0]

    def range(self, e) -> Vertex:
        return self.endpoints(e)[1]

    # degrees and enumeration

    def in_degree(self, v) -> Union[int, float]:
        self._require_vertex(v)
        if isinstance(v, TailVertex):
            return 1 + len(self.tail(v.tail).slot(v.index))
        if self._families_at.get(v):
            return INFINITE
        return len(self._core_in.get(v, ())) + len(self._tails_at.get(v, ()))

    def singular_vertices(self) -> set:
        return {v for v in self.vertices if self.in_degree(v) in (0, INFINITE)}

    def is_singular(self, v) -> bool:
        return self.in_degree(v) in (0, INFINITE)

    def iter_incoming(self, v) -> Iterator:
        """Canonical enumeration of ``r^{-1}(v)``.

        Core edges by id, then first edges of tails attached at ``v`` by
        tail id, then family edges interleaved round-robin across families
        (``a[1], b[1], a[2], b[2], ...``).  At ``t_j``: ``mu_(j+1)`` then the
        entries of slot ``j``.
        """
        self._require_vertex(v)
        if isinstance(v, TailVertex):
            yield TailEdge(v.tail, v.index + 1)
            for label, _ in self.tail(v.tail).slot(v.index):
                yield EntryEdge(v.tail, v.index, label)
            return
        yield from self._core_in.get(v, ())
        for t in self._tails_at.get(v, ()):
            yield TailEdge(t.id, 1)
        fams = self._families_at.get(v, ())
        if fams:
            for n in itertools.count(1):
                for f in fams:
                    yield FamilyEdge(f.id, n)

    def incoming(self, v, k: int) -> list:
        if k < 0:
            raise ValueError("k must be nonnegative")
        return list(itertools.islice(self.iter_incoming(v), k))

    def incoming_position(self, e) -> int:
        """0-based index of ``e`` within the canonical enumeration at ``r(e)``."""
        rng = self.range(e)
        if isinstance(rng, TailVertex):
            if isinstance(e, TailEdge):
                return 0
            labels = [label for label, _ in self.tail(rng.tail).slot(rng.index)]
            return 1 + labels.index(e.label)
        core = self._core_in.get(rng, [])
        tails = self._tails_at.get(rng, [])
        if isinstance(e, str):
            return core.index(e)
        if isinstance(e, TailEdge):
            return len(core) + [t.id for t in tails].index(e.tail)
        fams = [f.id for f in self._families_at.get(rng, [])]
        return len(core) + len(tails) + (e.index - 1) * len(fams) + fams.index(e.family)

    def iter_outgoing(self, v) -> Iterator:
        """All edges with source ``v``; infinite streams are interleaved."""
        self._require_vertex(v)
        if isinstance(v, TailVertex):
            yield TailEdge(v.tail, v.index)
            return
        yield from self._core_out.get(v, ())
        streams = [_family_out(f, v) for f in self.families]
        streams += [_entries_out(t, v) for t in self.tails]
        yield from _round_robin(streams)

    def outgoing(self, v, k: int) -> list:
        return list(itertools.islice(self.iter_outgoing(v), k))

    def all_vertices(self, depth: int = 0) -> list:
        """Core vertices followed by tail vertices ``t_1 .. t_depth``."""
        out = list(self.vertices)
        for t in self.tails:
            out.extend(TailVertex(t.id, j) for j in range(1, depth + 1))
        return out


def _family_out(f: Family, v) -> Iterator:
    for n in _indices_of(f.sources, lambda x: x == v):
        yield FamilyEdge(f.id, n)


def _entries_out(t: Tail, v) -> Iterator:
    for j in _indices_of(t.entries, lambda slot: any(s == v for _, s in slot)):
        for label, s in t.slot(j):
            if s == v:
                yield EntryEdge(t.id, j, label)


def _indices_of(seq, pred) -> Iterator[int]:
    """Indices ``j`` (1-based) with ``pred(seq[j])``; infinite when a cycle term matches."""
    if isinstance(seq, FiniteSupport):
        for j, v in seq.support:
            if pred(v):
                yield j
        return
    for j, v in enumerate(seq.prefix, start=1):
        if pred(v):
            yield j
    if not seq.cycle:
        return
    hits = [i for i, v in enumerate(seq.cycle) if pred(v)]
    if not hits:
        return
    base = len(seq.prefix) + 1
    for rep in itertools.count():
        for i in hits:
            yield base + rep * len(seq.cycle) + i


def _round_robin(streams: list) -> Iterator:
    live = [iter(s) for s in streams]
    while live:
        nxt = []
        for it in live:
            try:
                yield next(it)
            except StopIteration:
                continue
            nxt.append(it)
        live = nxt


def validate(g: PresentedGraph) -> ValidationReport:
    report = ValidationReport()
    add = lambda kind, ident, msg: report.issues.append(Issue(kind, ident, msg))

    seen = {}
    names = (
        [("vertex", v) for v in g.vertices]
        + [("edge", e) for e, _, _ in g.edges]
        + [("family", f.id) for f in g.families]
        + [("tail", t.id) for t in g.tails]
    )
    for kind, name in names:
        if not is_valid_id(name):
            add("invalid id", name, f"{kind} id contains reserved characters or is empty")
        if name in seen:
            add("duplicate id", name, f"used as {seen[name]} and {kind}")
        else:
            seen[name] = kind

    core = set(g.vertices)
    for e, s, r in g.edges:
        for end, v in (("source", s), ("range", r)):
            if v not in core:
                add("dangling endpoint", e, f"{end} {v!r} is not a core vertex")
    for f in g.families:
        if f.range not in core:
            add("dangling endpoint", f.id, f"range {f.range!r} is not a core vertex")
        if not isinstance(f.sources, EventuallyPeriodic) or not f.sources.cycle:
            add("bad family", f.id, "source pattern needs a nonempty cycle")
            continue
        for v in f.sources.values():
            if v not in core:
                add("dangling endpoint", f.id, f"source {v!r} is not a core vertex")
    for t in g.tails:
        if t.attach not in core:
            add("dangling endpoint", t.id, f"attach {t.attach!r} is not a core vertex")
        slots = list(t.entries.values()) if isinstance(t.entries, FiniteSupport) else (
            list(t.entries.prefix) + list(t.entries.cycle)
        )
        for slot in slots:
            labels = [label for label, _ in slot]
            if len(set(labels)) != len(labels):
                add("duplicate id", t.id, f"repeated entry label in slot {labels}")
            for label, src in slot:
                if not is_valid_id(label):
                    add("invalid id", label, f"entry label of tail {t.id!r}")
                if src not in core:
                    add("non-core entry", t.id, f"entry {label!r} has non-core source {src!r}")
        if t.has_entries() and not t.has_infinitely_many_entries():
            add("C5", t.id, "schedule has finitely many but not zero entries")
    return report


def require_valid(g: PresentedGraph) -> PresentedGraph:
    report = validate(g)
    if not report.ok:
        raise GraphError(str(report))
    return g


def make_graph(
    vertices: Iterable[str],
    edges: Iterable[tuple] = (),
    families: Iterable[tuple] = (),
    tails: Iterable[tuple] = (),
) -> PresentedGraph:
    """Convenience constructor from plain tuples.

    ``families``: ``(id, range, prefix, cycle)``.
    ``tails``: ``(id, attach)`` or ``(id, attach, prefix_slots, cycle_slots)``
    where a slot is a list of ``(label, source)`` pairs.
    """
    fams = [Family(i, r, EventuallyPeriodic(tuple(p), tuple(c))) for i, r, p, c in families]
    tls = []
    for spec in tails:
        if len(spec) == 2:
            tls.append(Tail(spec[0], spec[1], EventuallyPeriodic()))
        else:
            tid, attach, pre, cyc = spec
            conv = lambda slots: tuple(tuple((lab, src) for lab, src in slot) for slot in slots)
            tls.append(Tail(tid, attach, EventuallyPeriodic(conv(pre), conv(cyc))))
    return PresentedGraph(tuple(vertices), tuple(edges), tuple(fams), tuple(tls))
