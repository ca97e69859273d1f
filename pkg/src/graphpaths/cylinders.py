"""Cylinder sets on the path space.

``Z(mu)`` is the set of finite and infinite paths that begin with ``mu``.
A basic open set ``Z(mu minus G)`` removes the extensions beginning
``mu e`` for the finitely many edges ``e`` in ``G``; the general form
removes extensions ``mu nu`` for finitely many paths ``nu``.

Z-sets are never materialised.  Everything goes through :func:`member`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import PresentedGraph
from .paths import Path, PathError, Walk, comparable, source


@dataclass(frozen=True)
class Cylinder:
    """``Z(stem minus forbidden)`` with ``forbidden`` a finite set of edges."""

    stem: Path
    forbidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "forbidden", frozenset(self.forbidden))


@dataclass(frozen=True)
class GeneralCylinder:
    """``Z(stem minus forbidden)`` with ``forbidden`` a finite set of paths at ``s(stem)``."""

    stem: Path
    forbidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "forbidden", frozenset(self.forbidden))


def check_cylinder(g: PresentedGraph, z) -> None:
    from .paths import check_path

    check_path(g, z.stem)
    at = source(g, z.stem)
    for item in z.forbidden:
        if isinstance(z, Cylinder):
            if g.range(item) != at:
                raise PathError(f"forbidden edge {item} does not have range {at}")
        else:
            check_path(g, item)
            if item.vertex != at:
                raise PathError(f"forbidden path {item} does not have range {at}")


def member(w: Walk, z) -> bool:
    if not z.stem.is_prefix_of(w):
        return False
    n = len(z.stem)
    if isinstance(z, Cylinder):
        if w.is_finite and len(w) == n:
            return True
        return w.edge(n + 1) not in z.forbidden
    for nu in z.forbidden:
        k = len(nu)
        if w.is_finite and len(w) < n + k:
            continue
        if w.take(n + k).edges[n:] == nu.edges:
            return False
    return True


def intersect(z1: Cylinder, z2: Cylinder) -> Optional[Cylinder]:
    """``z1 & z2`` as a basic set, or ``None`` when empty."""
    a, b = (z1, z2) if len(z1.stem) <= len(z2.stem) else (z2, z1)
    if not a.stem.is_prefix_of(b.stem):
        return None
    if len(a.stem) == len(b.stem):
        return Cylinder(b.stem, a.forbidden | b.forbidden)
    if b.stem.edge(len(a.stem) + 1) in a.forbidden:
        return None
    return b


def intersect_all(zs: Sequence[Cylinder]) -> Optional[Cylinder]:
    out = zs[0]
    for z in zs[1:]:
        out = intersect(out, z)
        if out is None:
            return None
    return out


def refine_to_basic(z: GeneralCylinder, lam: Walk) -> Cylinder:
    """A basic set ``Z(alpha minus F)`` with ``lam`` in it and contained in ``z``.

    For infinite ``lam`` the stem is ``lam`` cut at the longest ``stem nu``;
    for finite ``lam`` the stem is ``lam`` itself and ``F`` collects the next
    edge of every forbidden extension running past it.
    """
    if not member(lam, z):
        raise ValueError(f"{lam} is not in the cylinder")
    mu = z.stem
    if not lam.is_finite:
        n = max((len(mu) + len(nu) for nu in z.forbidden), default=len(mu))
        return Cylinder(lam.take(n))
    lam_len = len(lam)
    out = set()
    for nu in z.forbidden:
        ext = mu + nu.edges
        # extensions that leave lam before its end can never meet Z(lam)
        if len(ext) > lam_len and lam.is_prefix_of(ext):
            out.add(ext.edge(lam_len + 1))
    return Cylinder(lam, frozenset(out))


def separate(g: PresentedGraph, x: Walk, y: Walk) -> tuple:
    """Disjoint basic sets containing ``x`` and ``y`` respectively."""
    if x == y:
        raise ValueError("cannot separate a point from itself")
    if x.vertex != y.vertex:
        return Cylinder(Path(x.vertex)), Cylinder(Path(y.vertex))
    if comparable(x, y):
        # one is a finite proper initial segment of the other
        short, long_, flip = (x, y, False) if x.is_finite and (not y.is_finite or len(x) < len(y)) else (y, x, True)
        nxt = long_.edge(len(short) + 1)
        a, b = Cylinder(short, frozenset({nxt})), Cylinder(long_.take(len(short) + 1))
        return (b, a) if flip else (a, b)
    n = 1
    while x.edge(n) == y.edge(n):
        n += 1
    return Cylinder(x.take(n)), Cylinder(y.take(n))


@dataclass
class ClusterReport:
    omega: Path
    accumulated: list  # stems hit by every term in the window, shortest first
    unstable: list  # stems hit by some but not all terms of the window
    inconsistent: list  # incomparable pairs of accumulated stems
    window: int

    @property
    def ok(self) -> bool:
        return not self.inconsistent


def cluster_point(ws: Sequence[Walk], depth: int, window: Optional[int] = None) -> ClusterReport:
    """Limit point of a sequence in ``Z(v)``, read off to ``depth``.

    Cofinality is approximated by the last ``window`` terms (default: half the
    sequence).  The chain of joins of the accumulated stems determines the
    limit's initial segment ``omega``.
    """
    if not ws:
        raise ValueError("empty sequence")
    v = ws[0].vertex
    if any(w.vertex != v for w in ws):
        raise ValueError("all terms must share a range vertex")
    w_len = window if window is not None else max(1, len(ws) // 2)
    tail = list(ws[-w_len:])

    def prefixes(w):
        n = depth if not w.is_finite else min(depth, len(w))
        return [w.take(k) for k in range(n + 1)]

    candidates = {}
    for w in tail:
        for p in prefixes(w):
            candidates.setdefault(p, 0)
            candidates[p] += 1
    accumulated = sorted((p for p, c in candidates.items() if c == len(tail)), key=len)
    unstable = sorted((p for p, c in candidates.items() if 0 < c < len(tail)), key=lambda p: (len(p), str(p)))

    inconsistent = []
    y = accumulated[0] if accumulated else Path(v)
    for nu in accumulated[1:]:
        if y.is_prefix_of(nu):
            y = nu
        elif not nu.is_prefix_of(y):
            inconsistent.append((y, nu))
    return ClusterReport(y, accumulated, unstable, inconsistent, w_len)
