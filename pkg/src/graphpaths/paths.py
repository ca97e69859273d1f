"""Finite paths, finitely described infinite paths, and path enumeration.

A :class:`Path` stores its range vertex and its edges, ordered from the range
end.  Infinite paths are either :class:`Periodic` (``prefix cycle cycle ...``)
or :class:`Absorbed` (``prefix mu_1 mu_2 ...`` running down a tail).  Both are
kept in a canonical form so that ``==`` is equality of paths.

Boundary paths are not a separate type: a boundary path is a finite
:class:`Path` whose source is singular, or any infinite path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Union

from .graph import INFINITE, PresentedGraph, TailEdge, sort_key
from .sequences import _primitive_period

DEFAULT_LIMIT = 16


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class Path:
    vertex: object  # r(path); the basepoint when the path has length 0
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    is_finite = True

    def __len__(self):
        return len(self.edges)

    def edge(self, i: int):
        return self.edges[i - 1]

    def take(self, n: int) -> "Path":
        return Path(self.vertex, self.edges[:n])

    def drop(self, n: int) -> tuple:
        return self.edges[n:]

    def is_prefix_of(self, other) -> bool:
        if other.vertex != self.vertex:
            return False
        if other.is_finite and len(other) < len(self):
            return False
        return other.take(len(self)).edges == self.edges

    def __add__(self, edges) -> "Path":
        return Path(self.vertex, self.edges + tuple(edges))

    def __str__(self):
        from .literals import format_path

        return format_path(self)


@dataclass(frozen=True)
class Periodic:
    """``prefix`` followed by ``cycle`` forever.  Stored canonically."""

    prefix: Path
    cycle: tuple

    is_finite = False

    def __post_init__(self):
        cycle = _primitive_period(tuple(self.cycle))
        if not cycle:
            raise PathError("periodic path needs a nonempty cycle")
        edges = list(self.prefix.edges)
        cycle = list(cycle)
        while edges and edges[-1] == cycle[-1]:
            edges.pop()
            cycle = [cycle[-1]] + cycle[:-1]
        object.__setattr__(self, "prefix", Path(self.prefix.vertex, tuple(edges)))
        object.__setattr__(self, "cycle", tuple(cycle))

    @property
    def vertex(self):
        return self.prefix.vertex

    def edge(self, i: int):
        if i < 1:
            raise IndexError(i)
        p = len(self.prefix)
        if i <= p:
            return self.prefix.edges[i - 1]
        return self.cycle[(i - p - 1) % len(self.cycle)]

    def take(self, n: int) -> Path:
        return Path(self.vertex, tuple(self.edge(i) for i in range(1, n + 1)))

    def description_length(self) -> int:
        return len(self.prefix) + len(self.cycle)

    def __str__(self):
        from .literals import format_path

        return format_path(self)


@dataclass(frozen=True)
class Absorbed:
    """``prefix`` followed by the whole of tail ``tail``."""

    prefix: Path
    tail: str

    is_finite = False

    @property
    def vertex(self):
        return self.prefix.vertex

    def edge(self, i: int):
        if i < 1:
            raise IndexError(i)
        p = len(self.prefix)
        if i <= p:
            return self.prefix.edges[i - 1]
        return TailEdge(self.tail, i - p)

    def take(self, n: int) -> Path:
        return Path(self.vertex, tuple(self.edge(i) for i in range(1, n + 1)))

    def description_length(self) -> int:
        return len(self.prefix) + 1

    def __str__(self):
        from .literals import format_path

        return format_path(self)


InfPath = Union[Periodic, Absorbed]
Walk = Union[Path, Periodic, Absorbed]


class PathList(NamedTuple):
    paths: list
    truncated: bool


# graph-aware helpers


def source(g: PresentedGraph, p: Path):
    if not p.edges:
        return p.vertex
    return g.source(p.edges[-1])


def vertex_path(v) -> Path:
    return Path(v, ())


def path_from_edges(g: PresentedGraph, edges: Iterable) -> Path:
    edges = tuple(edges)
    if not edges:
        raise PathError("use vertex_path for length-0 paths")
    p = Path(g.range(edges[0]), edges)
    check_path(g, p)
    return p


def check_path(g: PresentedGraph, p: Path) -> None:
    if not g.has_vertex(p.vertex):
        raise PathError(f"unknown vertex {p.vertex}")
    at = p.vertex
    for i, e in enumerate(p.edges, start=1):
        s, r = g.endpoints(e)
        if r != at:
            raise PathError(f"edge {i} ({e}) has range {r}, expected {at}")
        at = s


def check_walk(g: PresentedGraph, x: Walk) -> None:
    if x.is_finite:
        check_path(g, x)
        return
    check_path(g, x.prefix)
    end = source(g, x.prefix)
    if isinstance(x, Periodic):
        cyc = Path(end, x.cycle)
        check_path(g, cyc)
        if source(g, cyc) != end:
            raise PathError("cycle does not close up")
    else:
        t = g.tail(x.tail)
        if end != t.attach:
            raise PathError(f"prefix ends at {end}, tail {x.tail} attaches at {t.attach}")


def compose(g: PresentedGraph, mu: Path, nu: Walk) -> Walk:
    """``mu nu``; ``nu`` may be infinite."""
    if source(g, mu) != nu.vertex:
        raise PathError(f"cannot compose: s(mu) = {source(g, mu)} but r(nu) = {nu.vertex}")
    if nu.is_finite:
        return Path(mu.vertex, mu.edges + nu.edges)
    if isinstance(nu, Periodic):
        return Periodic(Path(mu.vertex, mu.edges + nu.prefix.edges), nu.cycle)
    return Absorbed(Path(mu.vertex, mu.edges + nu.prefix.edges), nu.tail)


def is_boundary(g: PresentedGraph, x: Walk) -> bool:
    if not x.is_finite:
        return True
    return _singular(g, source(g, x))


def shift(g: PresentedGraph, x: Walk, n: int) -> Walk:
    """The walk left after removing the first ``n`` edges of ``x``."""
    if x.is_finite:
        if n > len(x):
            raise PathError("shift past the end of a finite path")
        return Path(source(g, x.take(n)), x.edges[n:])
    head = x.take(n)
    at = source(g, head)
    if isinstance(x, Periodic):
        p = len(x.prefix)
        if n <= p:
            return Periodic(Path(at, x.prefix.edges[n:]), x.cycle)
        k = (n - p) % len(x.cycle)
        return Periodic(Path(at, ()), x.cycle[k:] + x.cycle[:k])
    p = len(x.prefix)
    if n <= p:
        return Absorbed(Path(at, x.prefix.edges[n:]), x.tail)
    raise PathError("shifting into a tail leaves a path that is not representable as a walk")


def agreement(x: Walk, y: Walk, cap: int) -> int:
    """Length of the common initial segment of ``x`` and ``y``, at most ``cap``."""
    if x.vertex != y.vertex:
        return -1
    n = 0
    while n < cap:
        xe = x.edge(n + 1) if (not x.is_finite or n < len(x)) else None
        ye = y.edge(n + 1) if (not y.is_finite or n < len(y)) else None
        if xe is None or ye is None or xe != ye:
            break
        n += 1
    return n


# enumeration


class _Cap:
    """Branching caps: ``limit`` everywhere, ``fan`` (default ``limit`` or 16) at infinite receivers."""

    def __init__(self, limit, fan=None):
        self.limit = limit
        self.fan = fan
        self.truncated = False

    def incoming(self, g: PresentedGraph, v) -> list:
        deg = g.in_degree(v)
        if deg == INFINITE:
            cap = self.fan if self.fan is not None else (self.limit if self.limit is not None else DEFAULT_LIMIT)
        else:
            cap = self.limit
        if cap is None or deg <= cap:
            return list(g.iter_incoming(v))
        self.truncated = True
        return g.incoming(v, cap)


def _walk_tree(g: PresentedGraph, v, depth: int, cap: _Cap):
    """Preorder over all paths of length <= depth with range ``v``."""
    stack = [(Path(v, ()), v)]
    while stack:
        p, at = stack.pop()
        yield p, at
        if len(p) == depth:
            continue
        kids = []
        for e in cap.incoming(g, at):
            kids.append((Path(p.vertex, p.edges + (e,)), g.source(e)))
        stack.extend(reversed(kids))


def paths_with_range(g: PresentedGraph, v, n: int, limit: Optional[int] = None) -> PathList:
    """``vE^n`` in canonical order, truncated to ``limit`` paths (and branches)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    g._require_vertex(v)
    cap = _Cap(limit)
    out = []
    for p, _ in _walk_tree(g, v, n, cap):
        if len(p) == n:
            if limit is not None and len(out) >= limit:
                cap.truncated = True
                break
            out.append(p)
    return PathList(out, cap.truncated)


def paths_upto(
    g: PresentedGraph, v, depth: int, limit: Optional[int] = None, fan: Optional[int] = None
) -> PathList:
    """All paths with range ``v`` of length at most ``depth``."""
    g._require_vertex(v)
    cap = _Cap(limit, fan)
    out = []
    for p, _ in _walk_tree(g, v, depth, cap):
        if limit is not None and len(out) >= limit:
            cap.truncated = True
            break
        out.append(p)
    return PathList(out, cap.truncated)


def e_leq_n(g: PresentedGraph, v, n: int) -> Optional[list]:
    """``vE^{<=n}``, or ``None`` when the set is infinite."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    g._require_vertex(v)
    out = []
    stack = [(Path(v, ()), v)]
    while stack:
        p, at = stack.pop()
        if len(p) == n:
            out.append(p)
            continue
        deg = g.in_degree(at)
        if deg == 0:
            out.append(p)
        elif deg == INFINITE:
            return None
        else:
            kids = [(p + (e,), g.source(e)) for e in g.iter_incoming(at)]
            stack.extend(reversed(kids))
    return out


def cycles_at(
    g: PresentedGraph, v, max_len: int, limit: Optional[int] = None, fan: Optional[int] = None
) -> PathList:
    """Primitive closed paths at ``v`` of length <= ``max_len``."""
    cap = _Cap(limit, fan)
    out = []
    for p, at in _walk_tree(g, v, max_len, cap):
        if p.edges and at == v and _primitive_period(p.edges) == p.edges:
            if limit is not None and len(out) >= limit:
                cap.truncated = True
                break
            out.append(p)
    return PathList(out, cap.truncated)


def infinite_paths(
    g: PresentedGraph,
    v,
    depth: int,
    cycle_depth: Optional[int] = None,
    limit: Optional[int] = None,
    fan: Optional[int] = None,
) -> PathList:
    """Representable infinite paths at ``v``.

    Periodic paths with canonical prefix length <= ``depth`` and primitive
    cycle length <= ``cycle_depth`` (default ``depth``), and absorbed paths
    whose prefix has length <= ``depth``.
    """
    cycle_depth = depth if cycle_depth is None else cycle_depth
    cap = _Cap(limit, fan)
    cycles = {}
    periodic, absorbed = [], []
    for p, at in _walk_tree(g, v, depth, cap):
        if limit is not None and len(periodic) + len(absorbed) > limit:
            break
        if at not in cycles:
            found = cycles_at(g, at, cycle_depth, limit, fan)
            cap.truncated |= found.truncated
            cycles[at] = found.paths
        for c in cycles[at]:
            if p.edges and p.edges[-1] == c.edges[-1]:
                continue  # not canonical; the shorter prefix covers it
            periodic.append(Periodic(p, c.edges))
            if limit is not None and len(periodic) > limit:
                break
        if isinstance(at, str):
            for t in g.tails:
                if t.attach == at:
                    absorbed.append(Absorbed(p, t.id))
    out = periodic + absorbed
    if limit is not None and len(out) > limit:
        out, cap.truncated = out[:limit], True
    return PathList(out, cap.truncated)


def boundary_paths(
    g: PresentedGraph,
    v,
    depth: int,
    limit: Optional[int] = None,
    cycle_depth: Optional[int] = None,
    fan: Optional[int] = None,
) -> PathList:
    """Representatives of ``v(boundary E)`` up to ``depth``.

    Finite boundary paths of length <= depth, then the infinite paths from
    :func:`infinite_paths`.
    """
    g._require_vertex(v)
    cap = _Cap(limit, fan)
    finite = []
    for p, at in _walk_tree(g, v, depth, cap):
        if limit is not None and len(finite) >= limit:
            cap.truncated = True
            break
        if _singular(g, at):
            finite.append(p)
    inf = infinite_paths(g, v, depth, cycle_depth, limit, fan)
    out = finite + inf.paths
    truncated = cap.truncated or inf.truncated
    if limit is not None and len(out) > limit:
        out, truncated = out[:limit], True
    return PathList(out, truncated)


def _singular(g, v) -> bool:
    return g.in_degree(v) in (0, INFINITE)


def common_extension(mu: Path, nu: Path) -> Optional[Path]:
    if mu.vertex != nu.vertex:
        raise PathError(f"range mismatch: {mu.vertex} vs {nu.vertex}")
    short, long_ = (mu, nu) if len(mu) <= len(nu) else (nu, mu)
    return long_ if short.is_prefix_of(long_) else None


def comparable(x: Walk, y: Walk) -> bool:
    """Whether one of ``x``, ``y`` is an initial segment of the other."""
    if x.vertex != y.vertex:
        return False
    if x.is_finite and (not y.is_finite or len(x) <= len(y)):
        return x.is_prefix_of(y)
    if y.is_finite:
        return y.is_prefix_of(x)
    return x == y


def is_exhaustive(g: PresentedGraph, v, paths: Iterable[Path]) -> bool:
    """Whether every path in ``vE*`` has a common extension with one of ``paths``."""
    fs = list(paths)
    for p in fs:
        if p.vertex != v:
            raise PathError(f"{p} does not have range {v}")

    def covered(mu: Path, at) -> bool:
        if any(f.is_prefix_of(mu) for f in fs):
            return True
        longer = [f for f in fs if mu.is_prefix_of(f)]
        if not longer:
            return False
        deg = g.in_degree(at)
        if deg == 0:
            return True
        if deg == INFINITE:
            return False  # some edge into `at` is used by no member of fs
        return all(covered(mu + (e,), g.source(e)) for e in g.iter_incoming(at))

    return covered(Path(v, ()), v)


def sorted_paths(paths: Iterable[Walk]) -> list:
    def key(x):
        kind = 0 if x.is_finite else (1 if isinstance(x, Periodic) else 2)
        body = x.edges if x.is_finite else x.prefix.edges + (getattr(x, "cycle", ()) or (x.tail,))
        return (kind, len(body), [sort_key(e) for e in body])

    return sorted(paths, key=key)


def first_edges(x: Walk, n: int) -> tuple:
    return x.take(n).edges


def walk_length(x: Walk) -> float:
    return len(x) if x.is_finite else INFINITE

