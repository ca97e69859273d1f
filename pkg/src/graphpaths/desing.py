"""Collapsible paths, collapsing, and desingularisation.

:func:`desingularise` appends a tail at every singular vertex of a tail-free
graph and spreads the incoming edges of infinite receivers along it.
:func:`collapse` undoes that: it deletes the tail's vertices and replaces
every detour ``mu_1 ... mu_k e`` by a single edge into the attach vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .graph import (
    INFINITE,
    EntryEdge,
    Family,
    FamilyEdge,
    GraphError,
    PresentedGraph,
    Tail,
    TailEdge,
    TailVertex,
    require_valid,
)
from .pathmaps import CollapseMap, _Schedule
from .paths import Periodic, Walk, check_walk
from .sequences import EventuallyPeriodic, FiniteSupport, constant, lcm

CONDITIONS = ("C1", "C2", "C3", "C4", "C5")


class CollapseError(GraphError):
    pass


@dataclass(frozen=True)
class Condition:
    passed: bool
    witness: object = None
    note: str = ""

    def __str__(self):
        mark = "pass" if self.passed else "FAIL"
        extra = f" (witness: {self.witness})" if self.witness is not None else ""
        return f"{mark}{extra}{' - ' + self.note if self.note else ''}"


@dataclass
class Verdict:
    target: object
    conditions: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions.values())

    def failed(self) -> list:
        return [name for name, c in self.conditions.items() if not c.passed]

    def __str__(self):
        return "\n".join(f"{name}: {self.conditions[name]}" for name in CONDITIONS)


def _tail_verdict(g: PresentedGraph, tid: str) -> Verdict:
    t = g.tail(tid)
    out = Verdict(tid)
    out.conditions["C1"] = Condition(True, note="tail vertices emit only their tail edge")
    fams = [f.id for f in g.families if f.range == t.attach]
    if fams:
        out.conditions["C2"] = Condition(False, FamilyEdge(fams[0], 1), f"{t.attach} is an infinite receiver")
    else:
        out.conditions["C2"] = Condition(True, note="tail slots are finite")
    intruders = [e for e, _, r in g.edges if r == t.attach]
    intruders += [FamilyEdge(f, 1) for f in fams]
    intruders += [TailEdge(o.id, 1) for o in g.tails if o.attach == t.attach and o.id != tid]
    out.conditions["C3"] = Condition(not intruders, intruders[0] if intruders else None)
    out.conditions["C4"] = Condition(True, note="tail edges are pairwise distinct")
    out.conditions["C5"] = _c5_for_schedule(t)
    return out


def _c5_for_schedule(t: Tail) -> Condition:
    if not t.has_entries():
        return Condition(True, note="no entries")
    if t.has_infinitely_many_entries():
        return Condition(True, note="infinitely many entries")
    canon = t.entries.canonical()
    j = max(i for i, slot in enumerate(canon.prefix, start=1) if slot)
    label = canon.prefix[j - 1][0][0]
    return Condition(False, EntryEdge(t.id, j, label), "finitely many entries")


def _walk_verdict(g: PresentedGraph, x: Walk) -> Verdict:
    check_walk(g, x)
    out = Verdict(x)
    if isinstance(x, Periodic):
        head = list(x.prefix.edges) + list(x.cycle)
        repeating = False
    else:
        head = list(x.prefix.edges)
        repeating = True  # the tail part

    # vertex -> edges of x with that source / range (finite part)
    by_source, by_range = {}, {}
    for e in head:
        s, r = g.endpoints(e)
        by_source.setdefault(s, set()).add(e)
        by_range.setdefault(r, set()).add(e)
    if repeating:
        t = g.tail(x.tail)
        by_range.setdefault(t.attach, set()).add(TailEdge(t.id, 1))

    exit_witness = None
    for v, own in by_source.items():
        if len(own) > 1:
            exit_witness = sorted(own, key=str)[0]
            break
        for e in g.outgoing(v, len(own) + 1):
            if e not in own:
                exit_witness = e
                break
        if exit_witness is not None:
            break
    out.conditions["C1"] = Condition(exit_witness is None, exit_witness)

    big = [v for v in by_range if g.in_degree(v) == INFINITE]
    out.conditions["C2"] = Condition(not big, big[0] if big else None)

    first = x.edge(1)
    into = g.incoming(x.vertex, 2)
    extra = [e for e in into if e != first]
    out.conditions["C3"] = Condition(not extra, extra[0] if extra else None)

    if isinstance(x, Periodic):
        p = len(x.prefix)
        witness = (x.cycle[0], p + 1, p + len(x.cycle) + 1)
        out.conditions["C4"] = Condition(False, witness, "edge repeats at the given positions")
    else:
        dup = [e for e in head if head.count(e) > 1]
        out.conditions["C4"] = Condition(not dup, dup[0] if dup else None)

    entries, infinite = [], False
    for v, own in by_range.items():
        deg = g.in_degree(v)
        if deg == INFINITE:
            infinite = True
            continue
        if len(own) > 1:
            entries.extend(own)
        entries.extend(e for e in g.iter_incoming(v) if e not in own)
    if repeating:
        t = g.tail(x.tail)
        infinite |= t.has_infinitely_many_entries()
        if t.has_entries() and not t.has_infinitely_many_entries():
            entries.append(_c5_for_schedule(t).witness)
    ok = infinite or not entries
    out.conditions["C5"] = Condition(
        ok, None if ok else entries[0], "infinitely many entries" if infinite else f"{len(entries)} entries"
    )
    return out


def check_collapsible(g: PresentedGraph, target: Union[str, Walk]) -> Verdict:
    """Per-condition verdict for a tail id or an infinite path of ``g``."""
    if isinstance(target, str):
        return _tail_verdict(g, target)
    if target.is_finite:
        raise ValueError("collapsible paths are infinite")
    return _walk_verdict(g, target)


@dataclass(frozen=True)
class CollapseResult:
    collapsed: PresentedGraph
    map: CollapseMap


def collapse(g: PresentedGraph, tails: Iterable[str]) -> CollapseResult:
    """Collapse the given tails of ``g`` simultaneously."""
    ids = tuple(sorted(set(tails)))
    for tid in ids:
        if not g.has_tail(tid):
            raise CollapseError(f"unknown tail {tid!r}")
        verdict = check_collapsible(g, tid)
        if not verdict.ok:
            name = verdict.failed()[0]
            raise CollapseError(f"tail {tid!r} is not collapsible: {name} fails ({verdict.conditions[name]})")
    attaches = [g.tail(t).attach for t in ids]
    if len(set(attaches)) != len(attaches):
        raise CollapseError("collapsed tails must be disjoint")

    families = list(g.families)
    for tid in ids:
        sched = _Schedule.of(g.tail(tid).entries)
        if not sched.empty:
            families.append(Family(tid, g.tail(tid).attach, sched.sources()))
    kept = tuple(t for t in g.tails if t.id not in ids)
    e = PresentedGraph(g.vertices, g.edges, tuple(families), kept)
    return CollapseResult(e, CollapseMap(g, e, ids))


# desingularisation


def _fresh(name: str, taken: set) -> str:
    if name not in taken:
        return name
    for i in itertools.count(2):
        cand = f"{name}{i}"
        if cand not in taken:
            return cand


def _incoming_stream(e: PresentedGraph, v: str):
    """``(items, preperiod, period)`` for the canonical incoming edges of ``v``.

    ``items(n)`` is the n-th incoming edge as ``(label, source)``.
    """
    core = [(eid, s) for eid, s, r in e.edges if r == v]
    fams = [f for f in e.families if f.range == v]
    k = len(fams)
    pre = len(core) + k * max(f.sources.preperiod for f in fams)
    period = k * lcm(*(f.sources.period for f in fams))

    def item(n: int):
        if n <= len(core):
            return core[n - 1]
        t = n - len(core) - 1
        f = fams[t % k]
        return f.id, f.sources[t // k + 1]

    return item, pre, period


def _slots(item, pre: int, period: int, counts: EventuallyPeriodic) -> EventuallyPeriodic:
    """Group a periodic stream into slots of sizes ``counts[1], counts[2], ...``."""
    total = sum(counts.cycle)
    if not counts.cycle or total == 0:
        raise ValueError("schedule policy must place edges infinitely often")
    offsets = [0]

    def offset(j):  # items consumed before slot j
        while len(offsets) < j:
            offsets.append(offsets[-1] + counts[len(offsets)])
        return offsets[j - 1]

    j0 = counts.preperiod + 1
    while offset(j0) < pre:
        j0 += counts.period
    reps = period // gcd(total, period)
    span = reps * counts.period

    def slot(j):
        start = offset(j)
        raw = [item(start + i + 1) for i in range(counts[j])]
        seen, out = {}, []
        for label, src in raw:
            seen[label] = seen.get(label, 0) + 1
            out.append((label if seen[label] == 1 else f"{label}_{seen[label]}", src))
        return tuple(out)

    prefix = tuple(slot(j) for j in range(1, j0))
    cycle = tuple(slot(j) for j in range(j0, j0 + span))
    return EventuallyPeriodic(prefix, cycle).canonical()


def desingularise(e: PresentedGraph, policy: Optional[EventuallyPeriodic] = None) -> tuple:
    """Drinen-Tomforde desingularisation ``(F, M)`` of a tail-free graph.

    ``policy`` gives the number of redistributed edges placed at each tail
    position (default: one per position).  Every edge into an infinite
    receiver, core edges included, is moved onto the tail.
    """
    if e.tails:
        raise GraphError("desingularise takes a graph without tails")
    require_valid(e)
    counts = policy if policy is not None else constant(1)
    taken = set(e.vertices) | {x for x, _, _ in e.edges} | {f.id for f in e.families}
    moved = set()
    tails = []
    for v in sorted(e.singular_vertices()):
        tid = _fresh(f"{v}_tail", taken)
        taken.add(tid)
        if e.in_degree(v) == 0:
            tails.append(Tail(tid, v, EventuallyPeriodic()))
            continue
        item, pre, period = _incoming_stream(e, v)
        tails.append(Tail(tid, v, _slots(item, pre, period, counts)))
        moved |= {x for x, _, r in e.edges if r == v}
    edges = tuple(x for x in e.edges if x[0] not in moved)
    f = PresentedGraph(e.vertices, edges, (), tuple(tails))
    return f, tuple(sorted(t.id for t in tails))


# isomorphism


@dataclass
class Isomorphism:
    g1: PresentedGraph
    g2: PresentedGraph
    vertex_map: dict
    tail_map: dict

    def map_vertex(self, v):
        if isinstance(v, TailVertex):
            return TailVertex(self.tail_map[v.tail], v.index)
        return self.vertex_map[v]

    def map_edge(self, edge):
        """Image of an edge; the k-th ``u -> v`` edge goes to the k-th ``u' -> v'`` edge."""
        if isinstance(edge, TailEdge):
            return TailEdge(self.tail_map[edge.tail], edge.index)
        s, r = self.g1.endpoints(edge)
        if isinstance(edge, EntryEdge):
            slot1 = self.g1.tail(edge.tail).slot(edge.index)
            rank = [lab for lab, src in slot1 if src == s].index(edge.label)
            t2 = self.tail_map[edge.tail]
            labs = [lab for lab, src in self.g2.tail(t2).slot(edge.index) if src == self.vertex_map[s]]
            return EntryEdge(t2, edge.index, labs[rank])
        pos = self.g1.incoming_position(edge)
        rank = sum(1 for x in itertools.islice(self.g1.iter_incoming(r), pos) if self.g1.source(x) == s)
        s2, r2 = self.vertex_map[s], self.vertex_map[r]
        seen = 0
        for x in self.g2.iter_incoming(r2):
            if self.g2.source(x) == s2:
                if seen == rank:
                    return x
                seen += 1
        raise AssertionError("isomorphism mismatch")  # infinite streams never reach here

    def __str__(self):
        parts = [f"{a} -> {b}" for a, b in sorted(self.vertex_map.items())]
        parts += [f"tail {a} -> {b}" for a, b in sorted(self.tail_map.items())]
        return ", ".join(parts)


def multiplicity(g: PresentedGraph, u: str, v: str):
    """Number of core or family edges from ``u`` to ``v`` (possibly infinite)."""
    n = sum(1 for _, s, r in g.edges if s == u and r == v)
    for f in g.families:
        if f.range != v:
            continue
        if u in f.sources.recurring():
            return INFINITE
        n += f.sources.prefix.count(u)
    return n


def _schedule_signature(t: Tail, vmap) -> EventuallyPeriodic:
    seq = t.entries.as_eventually_periodic() if isinstance(t.entries, FiniteSupport) else t.entries
    return seq.map(lambda slot: tuple(sorted(vmap[src] for _, src in slot))).canonical()


class IsoBoundError(ValueError):
    pass


def iso_check(g1: PresentedGraph, g2: PresentedGraph, max_core: int = 8) -> Optional[Isomorphism]:
    """Bounded brute-force isomorphism search.

    Tail vertices are matched tail-by-tail and index-by-index, so only
    isomorphisms sending core to core are found.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.tails) != len(g2.tails):
        return None
    if len(g1.vertices) > max_core:
        raise IsoBoundError(f"core has {len(g1.vertices)} vertices; bound is {max_core}")
    vs1, vs2 = list(g1.vertices), list(g2.vertices)
    m1 = {(u, v): multiplicity(g1, u, v) for u in vs1 for v in vs1}
    m2 = {(u, v): multiplicity(g2, u, v) for u in vs2 for v in vs2}

    def invariant(g, m, vs, v):
        ins = sorted((m[(u, v)] for u in vs), key=str)
        outs = sorted((m[(v, u)] for u in vs), key=str)
        return (tuple(ins), tuple(outs), m[(v, v)], sum(1 for t in g.tails if t.attach == v))

    inv1 = {v: invariant(g1, m1, vs1, v) for v in vs1}
    inv2 = {v: invariant(g2, m2, vs2, v) for v in vs2}
    if sorted(map(str, inv1.values())) != sorted(map(str, inv2.values())):
        return None

    order = sorted(vs1, key=lambda v: sum(1 for w in vs2 if inv2[w] == inv1[v]))

    def extend(assign: dict, used: set):
        if len(assign) == len(order):
            tails = _match_tails(g1, g2, assign)
            if tails is not None:
                yield Isomorphism(g1, g2, dict(assign), tails)
            return
        v = order[len(assign)]
        # prefer the same name first so identity maps are found quickly
        cands = sorted((w for w in vs2 if w not in used and inv2[w] == inv1[v]), key=lambda w: w != v)
        for w in cands:
            if m1[(v, v)] != m2[(w, w)]:
                continue
            if all(m1[(v, a)] == m2[(w, b)] and m1[(a, v)] == m2[(b, w)] for a, b in assign.items()):
                assign[v] = w
                used.add(w)
                yield from extend(assign, used)
                del assign[v]
                used.discard(w)

    return next(extend({}, set()), None)


def _match_tails(g1: PresentedGraph, g2: PresentedGraph, vmap: dict) -> Optional[dict]:
    ident = {v: v for v in g2.vertices}
    pool = {}
    for t in g2.tails:
        pool.setdefault((t.attach, _schedule_signature(t, ident)), []).append(t.id)
    out = {}
    for t in g1.tails:
        key = (vmap[t.attach], _schedule_signature(t, vmap))
        if not pool.get(key):
            return None
        out[t.id] = pool[key].pop(0)
    return out


def is_desingularisation(f: PresentedGraph, tails: Sequence[str], e: PresentedGraph) -> bool:
    """Row-finite, no sources, collapsible tails, and collapsing gives ``e``."""
    if not f.is_row_finite or f.singular_vertices():
        return False
    try:
        result = collapse(f, tails)
    except CollapseError:
        return False
    return iso_check(result.collapsed, e) is not None


def collapse_then_iso(f: PresentedGraph, tails: Sequence[str], e: PresentedGraph):
    return iso_check(collapse(f, tails).collapsed, e)


__all__ = [
    "CONDITIONS",
    "Condition",
    "Verdict",
    "CollapseError",
    "CollapseResult",
    "check_collapsible",
    "collapse",
    "desingularise",
    "Isomorphism",
    "iso_check",
    "multiplicity",
    "is_desingularisation",
]
