"""Path correspondences between a graph and its collapse.

Given ``F`` and a set ``M`` of its tails, the collapse ``E = F_M`` replaces
each tail ``mu`` by a family of edges into ``attach(mu)``, one for every
path ``mu_1 ... mu_k e`` that runs ``k`` steps down the tail and leaves it by
an entry edge ``e``.  The collapsed family keeps the tail's id, and its
members are numbered in schedule order (slot 1 first, labels in slot order).

:class:`CollapseMap` carries that correspondence and implements
``phi`` (finite paths between vertices of ``E``), ``phi_inf`` (infinite paths
of ``F`` at vertices of ``E`` onto boundary paths of ``E``), their inverses,
and witnesses for continuity in both directions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Union

from .cylinders import Cylinder, member
from .graph import EntryEdge, FamilyEdge, GraphError, PresentedGraph, TailEdge, TailVertex
from .paths import (
    Absorbed,
    Path,
    PathError,
    Periodic,
    Walk,
    boundary_paths,
    compose,
    infinite_paths,
    source,
)
from .sequences import EventuallyPeriodic


class FactorizationError(PathError):
    pass


class WitnessError(AssertionError):
    """A witness failed its own membership check."""


@dataclass(frozen=True)
class Plain:
    edge: object


@dataclass(frozen=True)
class Piece:
    """``mu_1 ... mu_depth e`` with ``e`` the entry ``label`` at ``t_depth``."""

    tail: str
    depth: int
    label: str


Segment = Union[Plain, Piece]


@dataclass(frozen=True)
class Factorization:
    prefix: tuple
    cycle: tuple = ()
    absorbed: Optional[str] = None  # collapsed tail swallowing the rest
    carried: Optional[str] = None  # uncollapsed tail running on forever

    @property
    def is_finite(self) -> bool:
        return not self.cycle and self.absorbed is None and self.carried is None

    def segments(self) -> Iterator[Segment]:
        """All segments in order; infinite unless absorbed or finite."""
        yield from self.prefix
        if self.cycle:
            while True:
                yield from self.cycle
        if self.carried is not None:
            for i in itertools.count(1):
                yield Plain(TailEdge(self.carried, i))


@dataclass(frozen=True)
class _Schedule:
    """A tail's entries flattened into a family enumeration."""

    prefix_slots: int
    cycle_slots: int
    flat_prefix: tuple  # ((depth, label, source), ...)
    flat_cycle: tuple  # ((relative depth, label, source), ...)

    @classmethod
    def of(cls, entries) -> "_Schedule":
        canon = entries.canonical() if not isinstance(entries, EventuallyPeriodic) else entries
        fp = tuple((j, lab, src) for j, slot in enumerate(canon.prefix, start=1) for lab, src in slot)
        fc = tuple((j, lab, src) for j, slot in enumerate(canon.cycle, start=1) for lab, src in slot)
        return cls(len(canon.prefix), len(canon.cycle), fp, fc)

    @property
    def empty(self) -> bool:
        return not self.flat_prefix and not self.flat_cycle

    def sources(self) -> EventuallyPeriodic:
        return EventuallyPeriodic(tuple(s for *_, s in self.flat_prefix), tuple(s for *_, s in self.flat_cycle))

    def entry(self, n: int) -> tuple:
        """``(depth, label)`` of the ``n``-th family member."""
        if n < 1:
            raise IndexError(n)
        if n <= len(self.flat_prefix):
            j, lab, _ = self.flat_prefix[n - 1]
            return j, lab
        if not self.flat_cycle:
            raise IndexError(n)
        rep, r = divmod(n - len(self.flat_prefix) - 1, len(self.flat_cycle))
        j, lab, _ = self.flat_cycle[r]
        return self.prefix_slots + rep * self.cycle_slots + j, lab

    def index(self, depth: int, label: str) -> int:
        if depth <= self.prefix_slots:
            for n, (j, lab, _) in enumerate(self.flat_prefix, start=1):
                if (j, lab) == (depth, label):
                    return n
        elif self.cycle_slots:
            rep, jj = divmod(depth - self.prefix_slots - 1, self.cycle_slots)
            for n, (j, lab, _) in enumerate(self.flat_cycle, start=1):
                if (j, lab) == (jj + 1, label):
                    return len(self.flat_prefix) + rep * len(self.flat_cycle) + n
        raise KeyError((depth, label))

    def entries_above(self, depth: int) -> list:
        """Family indices of entries at ``t_1 .. t_(depth-1)``."""
        out = []
        n = 1
        while True:
            try:
                j, _ = self.entry(n)
            except IndexError:
                break
            if j >= depth:
                break
            out.append(n)
            n += 1
        return out


@dataclass(frozen=True)
class CollapseMap:
    f: PresentedGraph
    e: PresentedGraph
    tails: tuple  # ids of the collapsed tails

    @cached_property
    def _schedules(self) -> dict:
        return {t: _Schedule.of(self.f.tail(t).entries) for t in self.tails}

    def schedule(self, tid: str) -> _Schedule:
        return self._schedules[tid]

    def attach(self, tid: str) -> str:
        return self.f.tail(tid).attach

    @cached_property
    def _attach_to_tail(self) -> dict:
        return {self.attach(t): t for t in self.tails}

    def in_e0(self, v) -> bool:
        return not (isinstance(v, TailVertex) and v.tail in self.tails)

    # segments

    def segment_edges(self, seg: Segment) -> tuple:
        if isinstance(seg, Plain):
            return (seg.edge,)
        steps = tuple(TailEdge(seg.tail, i) for i in range(1, seg.depth + 1))
        return steps + (EntryEdge(seg.tail, seg.depth, seg.label),)

    def segment_image(self, seg: Segment):
        """``phi'`` of a segment: an edge of ``E``."""
        if isinstance(seg, Plain):
            return seg.edge
        return FamilyEdge(seg.tail, self.schedule(seg.tail).index(seg.depth, seg.label))

    def edge_preimage(self, edge) -> Segment:
        if isinstance(edge, FamilyEdge) and edge.family in self.tails:
            depth, label = self.schedule(edge.family).entry(edge.index)
            return Piece(edge.family, depth, label)
        if not self.e.has_edge(edge):
            raise GraphError(f"unknown edge {edge} in the collapsed graph")
        return Plain(edge)

    def _split(self, edges: tuple) -> list:
        segs = []
        i = 0
        while i < len(edges):
            e = edges[i]
            if isinstance(e, EntryEdge) and e.tail in self.tails:
                raise FactorizationError(f"edge {i + 1} ({e}) starts inside tail {e.tail}")
            if isinstance(e, TailEdge) and e.tail in self.tails:
                if e.index != 1:
                    raise FactorizationError(f"edge {i + 1} ({e}) starts inside tail {e.tail}")
                k = 1
                while i + k < len(edges) and edges[i + k] == TailEdge(e.tail, k + 1):
                    k += 1
                if i + k == len(edges):
                    raise FactorizationError(f"path ends inside tail {e.tail}")
                nxt = edges[i + k]
                if not (isinstance(nxt, EntryEdge) and nxt.tail == e.tail and nxt.index == k):
                    raise FactorizationError(f"edge {i + k + 1} ({nxt}) does not leave tail {e.tail}")
                segs.append(Piece(e.tail, k, nxt.label))
                i += k + 1
            else:
                segs.append(Plain(e))
                i += 1
        return segs

    def factorize(self, lam: Walk) -> Factorization:
        """Unique segmentation into unchanged edges and collapsible pieces."""
        if not self.in_e0(lam.vertex):
            raise FactorizationError(f"range {lam.vertex} is not a vertex of the collapsed graph")
        if lam.is_finite:
            return Factorization(tuple(self._split(lam.edges)))
        if isinstance(lam, Absorbed):
            segs = tuple(self._split(lam.prefix.edges))
            if lam.tail in self.tails:
                return Factorization(segs, absorbed=lam.tail)
            return Factorization(segs, carried=lam.tail)
        # rotate so the cycle starts and ends at a vertex of E
        start = source(self.f, lam.prefix)
        cyc = lam.cycle
        for k in range(len(cyc)):
            if self.in_e0(self.f.range(cyc[k])):
                head = lam.prefix.edges + cyc[:k]
                body = cyc[k:] + cyc[:k]
                return Factorization(tuple(self._split(head)), tuple(self._split(body)))
        raise FactorizationError(f"cycle at {start} never meets a vertex of the collapsed graph")

    # phi and friends

    def phi(self, beta: Path) -> Path:
        fac = self.factorize(beta)
        if not self.in_e0(source(self.f, beta)):
            raise FactorizationError("source is not a vertex of the collapsed graph")
        return Path(beta.vertex, tuple(self.segment_image(s) for s in fac.prefix))

    @cached_property
    def _memo(self) -> dict:
        return {}

    def phi_inf(self, lam: Walk) -> Walk:
        key = ("inf", lam)
        if key not in self._memo:
            self._memo[key] = self._phi_inf(lam)
        return self._memo[key]

    def _phi_inf(self, lam: Walk) -> Walk:
        if lam.is_finite:
            raise FactorizationError("phi_inf takes an infinite path")
        fac = self.factorize(lam)
        head = Path(lam.vertex, tuple(self.segment_image(s) for s in fac.prefix))
        if fac.absorbed is not None:
            return head
        if fac.carried is not None:
            return Absorbed(head, fac.carried)
        return Periodic(head, tuple(self.segment_image(s) for s in fac.cycle))

    def phi_inv(self, mu: Path) -> Path:
        key = ("inv", mu)
        if key not in self._memo:
            self._memo[key] = self._phi_inv(mu)
        return self._memo[key]

    def _phi_inv(self, mu: Path) -> Path:
        if not self.e.has_vertex(mu.vertex):
            raise GraphError(f"unknown vertex {mu.vertex}")
        edges = []
        for e in mu.edges:
            edges.extend(self.segment_edges(self.edge_preimage(e)))
        return Path(mu.vertex, tuple(edges))

    def phi_inf_inv(self, x: Walk) -> Walk:
        if x.is_finite:
            end = source(self.e, x)
            tid = self._attach_to_tail.get(end)
            if tid is None:
                raise FactorizationError(f"{end} is not the attach vertex of a collapsed tail")
            return Absorbed(self.phi_inv(x), tid)
        head = self.phi_inv(x.prefix)
        if isinstance(x, Absorbed):
            return Absorbed(head, x.tail)
        return Periodic(head, self.phi_inv(Path(source(self.e, x.prefix), x.cycle)).edges)

    # continuity witnesses

    def open_image_witness(self, z: Cylinder, lam: Walk, verify: bool = True, depth: int = 3) -> Path:
        """``gamma`` with ``lam`` in ``Z(gamma)`` and ``phi_inf(Z(gamma))`` inside ``z``."""
        if not member(self.phi_inf(lam), z):
            raise ValueError(f"phi_inf({lam}) is not in the cylinder")
        fac = self.factorize(lam)
        a = len(z.stem)
        if fac.absorbed is not None and len(fac.prefix) == a:
            tid = fac.absorbed
            n = max((len(self.phi_inv(Path(self.e.range(e), (e,))).edges) for e in z.forbidden), default=0)
            base = self.phi_inv(z.stem)
            gamma = base + tuple(TailEdge(tid, i) for i in range(1, n + 1))
        else:
            segs = list(itertools.islice(fac.segments(), a + 1))
            gamma = Path(lam.vertex, tuple(e for s in segs for e in self.segment_edges(s)))
        if verify:
            self._verify_image(z, gamma, depth)
        return gamma

    def _verify_image(self, z: Cylinder, gamma: Path, depth: int) -> None:
        at = source(self.f, gamma)
        ys = [compose(self.f, gamma, rest) for rest in infinite_paths(self.f, at, depth, cycle_depth=depth).paths]
        if isinstance(at, TailVertex):
            k = at.index
            ys.append(Absorbed(gamma.take(len(gamma) - k), at.tail))
        for y in ys:
            if not member(self.phi_inf(y), z):
                raise WitnessError(f"{y} lies in Z({gamma}) but its image leaves the cylinder")

    def open_preimage_witness(self, gamma: Path, x: Walk, verify: bool = True, depth: int = 3) -> Cylinder:
        """Basic ``Z(alpha minus G)`` around ``x`` whose preimage lies in ``Z(gamma)``."""
        lam = self.phi_inf_inv(x)
        if not gamma.is_prefix_of(lam):
            raise ValueError(f"phi_inf_inv({x}) = {lam} is not in Z({gamma})")
        if not x.is_finite:
            segments = self.factorize(lam).segments()
            covered, segs = 0, []
            while covered < len(gamma):
                seg = next(segments)
                segs.append(seg)
                covered += len(self.segment_edges(seg))
            alpha = Path(x.vertex, tuple(self.segment_image(s) for s in segs))
            out = Cylinder(alpha)
        else:
            omega = self.phi_inv(x)
            tid = lam.tail
            if len(gamma) <= len(omega):
                out = Cylinder(x)
            else:
                j = len(gamma) - len(omega)
                sched = self.schedule(tid)
                out = Cylinder(x, frozenset(FamilyEdge(tid, n) for n in sched.entries_above(j)))
        if verify:
            self._verify_preimage(gamma, out, depth)
        return out

    def _verify_preimage(self, gamma: Path, z: Cylinder, depth: int, limit: int = 6) -> None:
        at = source(self.e, z.stem)
        for rest in boundary_paths(self.e, at, depth, limit=limit, cycle_depth=depth).paths:
            y = compose(self.e, z.stem, rest)
            if not member(y, z):
                continue
            if not gamma.is_prefix_of(self.phi_inf_inv(y)):
                raise WitnessError(f"{y} lies in the witness but its preimage leaves Z({gamma})")
