"""The commutative diagonal as exact combinations of cylinder indicators.

``P(mu)`` stands for the range projection of a finite path ``mu``, modelled as
the indicator function of ``Z(mu)`` restricted to boundary paths.  Products
follow from nesting of cylinders: ``P(mu) P(nu)`` is ``P`` of the longer path
when one extends the other and zero otherwise.

A finite support ``F`` is split into the disjoint regions
``q(nu, F) = Z(nu) minus the Z(nu nu')`` for ``nu nu'`` in ``F``; every
element is constant on each region, which gives exact equality tests and the
norm formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .graph import INFINITE, PresentedGraph, TailEdge
from .pathmaps import CollapseMap
from .paths import (
    Absorbed,
    Path,
    PathError,
    Periodic,
    Walk,
    boundary_paths,
    check_path,
    check_walk,
    infinite_paths,
    is_boundary,
    source,
)
from .scalars import ONE, ZERO, Gaussian


class DiagonalError(ValueError):
    pass


@dataclass(frozen=True)
class DiagonalElement:
    """``sum of c * P(mu)``; zero coefficients are dropped."""

    graph: PresentedGraph
    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for p, c in dict(self.terms).items():
            if not isinstance(p, Path):
                raise DiagonalError(f"projections are indexed by finite paths, got {p!r}")
            c = Gaussian.of(c)
            if c:
                clean[p] = clean.get(p, ZERO) + c
        object.__setattr__(self, "terms", {p: c for p, c in clean.items() if c})

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __eq__(self, other):
        """Formal equality of the stored sums; see :func:`equals` for equality as functions."""
        if not isinstance(other, DiagonalElement):
            return NotImplemented
        return self.graph == other.graph and self.terms == other.terms

    def _same(self, other: "DiagonalElement"):
        if other.graph is not self.graph and other.graph != self.graph:
            raise DiagonalError("elements live over different graphs")

    def __add__(self, other: "DiagonalElement") -> "DiagonalElement":
        self._same(other)
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, ZERO) + c
        return DiagonalElement(self.graph, out)

    def __neg__(self):
        return DiagonalElement(self.graph, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiagonalElement":
        c = Gaussian.of(c)
        return DiagonalElement(self.graph, {p: c * b for p, b in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, DiagonalElement):
            return multiply(self, other)
        return self.scale(other)

    def adjoint(self) -> "DiagonalElement":
        return DiagonalElement(self.graph, {p: c.conjugate() for p, c in self.terms.items()})

    @property
    def support(self) -> list:
        return list(self.terms)

    def __str__(self):
        from .literals import format_element

        return format_element(self)


def projection(g: PresentedGraph, mu: Path, coeff=ONE) -> DiagonalElement:
    check_path(g, mu)
    return DiagonalElement(g, {mu: coeff})


def zero(g: PresentedGraph) -> DiagonalElement:
    return DiagonalElement(g, {})


def _longer(mu: Path, nu: Path) -> Optional[Path]:
    if mu.vertex != nu.vertex:
        return None
    short, long_ = (mu, nu) if len(mu) <= len(nu) else (nu, mu)
    return long_ if short.is_prefix_of(long_) else None


def multiply(a: DiagonalElement, b: DiagonalElement) -> DiagonalElement:
    a._same(b)
    out = {}
    for p, c in a.terms.items():
        for q, d in b.terms.items():
            r = _longer(p, q)
            if r is not None:
                out[r] = out.get(r, ZERO) + c * d
    return DiagonalElement(a.graph, out)


# q-projections


def _extensions(F: Iterable[Path], mu: Path) -> list:
    return [p for p in F if p != mu and mu.is_prefix_of(p)]


def q_projection(g: PresentedGraph, F: Sequence[Path], mu: Path) -> DiagonalElement:
    """``P(mu) * prod (P(mu) - P(mu mu'))`` over proper extensions of ``mu`` in ``F``."""
    F = list(dict.fromkeys(F))
    if mu not in F:
        raise DiagonalError(f"{mu} is not in F")
    pm = projection(g, mu)
    out = pm
    for ext in _extensions(F, mu):
        out = multiply(out, pm - projection(g, ext))
    return out


def _relative(mu: Path, ext: Path) -> tuple:
    return ext.edges[len(mu) :]


def q_witness(g: PresentedGraph, F: Sequence[Path], mu: Path, search: int = 64) -> Optional[Walk]:
    """A boundary path inside the region of ``q(mu, F)``, or ``None`` when it is empty."""
    forbidden = [_relative(mu, p) for p in _extensions(F, mu)]
    rest = _escape(g, source(g, mu), forbidden, search)
    if rest is None:
        return None
    from .paths import compose

    return compose(g, mu, rest)


def q_is_nonzero(g: PresentedGraph, F: Sequence[Path], mu: Path) -> bool:
    """Whether some boundary path lies in ``Z(mu)`` but in no ``Z(mu mu')``, ``mu mu'`` in ``F``."""
    if mu not in F:
        raise DiagonalError(f"{mu} is not in F")
    forbidden = [_relative(mu, p) for p in _extensions(F, mu)]
    return _avoidable(g, source(g, mu), forbidden)


def _avoidable(g: PresentedGraph, at, forbidden: list) -> bool:
    if any(len(f) == 0 for f in forbidden):
        return False
    if g.in_degree(at) in (0, INFINITE):
        return True  # the length-0 path at a singular vertex
    for e in g.iter_incoming(at):
        sub = [f[1:] for f in forbidden if f[0] == e]
        if not sub or _avoidable(g, g.source(e), sub):
            return True
    return False


def _escape(g: PresentedGraph, at, forbidden: list, search: int) -> Optional[Walk]:
    """A representable boundary path at ``at`` avoiding every path in ``forbidden``."""
    if any(len(f) == 0 for f in forbidden):
        return None
    deg = g.in_degree(at)
    if deg in (0, INFINITE):
        return Path(at)
    for e in g.iter_incoming(at):
        sub = [f[1:] for f in forbidden if f[0] == e]
        if sub:
            rest = _escape(g, g.source(e), sub, search)
        else:
            rest = some_boundary_path(g, g.source(e), search)
        if rest is not None:
            from .paths import compose

            return compose(g, Path(at, (e,)), rest)
    return None


def some_boundary_path(g: PresentedGraph, at, search: int = 64) -> Optional[Walk]:
    """A short representable boundary path with range ``at``.

    Breadth-first over paths: the first one that reaches a singular vertex,
    an attach vertex (absorbed into the tail), or revisits a vertex
    (periodic) wins.  ``None`` if nothing turns up within ``search`` steps,
    which happens only at vertices of entry-free tails.
    """
    frontier = [(Path(at), (at,))]
    for _ in range(search + 1):
        nxt = []
        for p, seen in frontier:
            v = seen[-1]
            if g.in_degree(v) in (0, INFINITE):
                return p
            if isinstance(v, str):
                for t in g.tails:
                    if t.attach == v:
                        return Absorbed(p, t.id)
            for e in g.iter_incoming(v):
                s = g.source(e)
                if s in seen:
                    k = seen.index(s)
                    edges = p.edges + (e,)
                    return Periodic(Path(at, edges[:k]), edges[k:])
                nxt.append((p + (e,), seen + (s,)))
        frontier = nxt
        if not frontier:
            break
    return None


def q_decompose(a: DiagonalElement) -> dict:
    """Coefficients of ``a`` over the q-basis of its support."""
    F = a.support
    return {nu: sum((c for mu, c in a.terms.items() if mu.is_prefix_of(nu)), ZERO) for nu in F}


def q_reconstruct(g: PresentedGraph, coeffs: Mapping) -> DiagonalElement:
    F = list(coeffs)
    out = zero(g)
    for nu, c in coeffs.items():
        if c:
            out = out + q_projection(g, F, nu).scale(c)
    return out


def is_zero(a: DiagonalElement) -> bool:
    F = a.support
    return all(not c or not q_is_nonzero(a.graph, F, nu) for nu, c in q_decompose(a).items())


def equals(a: DiagonalElement, b: DiagonalElement) -> bool:
    """Equality as functions on the boundary path space."""
    return is_zero(a - b)


def norm_squared(a: DiagonalElement) -> Fraction:
    F = a.support
    best = Fraction(0)
    for nu, c in q_decompose(a).items():
        if c and q_is_nonzero(a.graph, F, nu):
            best = max(best, c.norm_squared())
    return best


def exact_sqrt(x: Fraction) -> Optional[Fraction]:
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def norm(a: DiagonalElement) -> Union[Fraction, float]:
    """Exact when the norm is rational, otherwise a float."""
    sq = norm_squared(a)
    root = exact_sqrt(sq)
    return root if root is not None else math.sqrt(sq)


# characters


def character_eval(x: Walk, a: DiagonalElement, check: bool = True) -> Gaussian:
    """``h(x)(a)``: the sum of coefficients over cylinders containing ``x``."""
    if check:
        check_walk(a.graph, x)
        if not is_boundary(a.graph, x):
            raise DiagonalError(f"{x} is not a boundary path")
    return sum((c for mu, c in a.terms.items() if mu.is_prefix_of(x)), ZERO)


@dataclass(frozen=True)
class Character:
    graph: PresentedGraph
    point: Walk

    def __post_init__(self):
        check_walk(self.graph, self.point)
        if not is_boundary(self.graph, self.point):
            raise DiagonalError(f"{self.point} is not a boundary path")

    def __call__(self, a: DiagonalElement) -> Gaussian:
        return character_eval(self.point, a, check=False)


def default_depth(a: DiagonalElement) -> int:
    longest = max((len(p) for p in a.terms), default=0)
    return longest + len(a.graph.vertices) + 1


def sufficient_fan(a: DiagonalElement) -> int:
    """Fan-out at infinite receivers that reaches every support edge plus one more.

    Paths leaving the support through different unused edges carry the same
    character value, so enumeration with this fan misses no value.
    """
    g = a.graph
    fan = 1
    for mu in a.terms:
        at = mu.vertex
        for e in mu.edges:
            if g.in_degree(at) == INFINITE:
                n = next(i for i, f in enumerate(g.iter_incoming(at), start=1) if f == e)
                fan = max(fan, n + 1)
            at = g.source(e)
    return fan


def character_sup_squared(
    a: DiagonalElement, depth: Optional[int] = None, limit: Optional[int] = None, fan: Optional[int] = None
) -> Fraction:
    """Largest ``|h(x)(a)|^2`` over boundary paths.

    With ``depth`` this is a brute-force maximum over every boundary
    representative to that depth.  Without it, the search walks only the
    prefixes of the support: once a path has left every support term its
    value is fixed, so one path through each such branch suffices.
    """
    g = a.graph
    fan = sufficient_fan(a) if fan is None else fan
    if depth is not None:
        best = Fraction(0)
        for v in {p.vertex for p in a.terms}:
            for x in boundary_paths(g, v, depth, limit=limit, fan=fan).paths:
                best = max(best, character_eval(x, a, check=False).norm_squared())
        return best
    inside = {p.take(k) for p in a.terms for k in range(len(p) + 1)}
    best = Fraction(0)
    stack = list({Path(p.vertex) for p in a.terms})
    while stack:
        p = stack.pop()
        at = source(g, p)
        deg = g.in_degree(at)
        if deg in (0, INFINITE):
            best = max(best, character_eval(p, a, check=False).norm_squared())
        for e in g.iter_incoming(at) if deg != INFINITE else g.incoming(at, fan):
            q = p + (e,)
            if q in inside:
                stack.append(q)
            else:  # every boundary path through q takes this value
                best = max(best, character_eval(q, a, check=False).norm_squared())
    return best


def prefix_family(x: Walk, length: int) -> list:
    """``[x(0,1), ..., x(0,n)]`` with ``n = length`` (or ``|x|`` if shorter)."""
    n = length if not x.is_finite else min(length, len(x))
    return [x.take(k) for k in range(1, n + 1)]


def character_to_path(g: PresentedGraph, family: Sequence[Path], terminates: bool = False, start=None) -> Walk:
    """Recover the boundary path whose initial segments are ``family``.

    ``family[n-1]`` must have length ``n`` and extend ``family[n-2]``.  With
    ``terminates`` the path is the last member, whose source must be
    singular.  Otherwise the shortest eventually periodic or absorbed path
    consistent with the data is returned; data covering the prefix plus two
    periods determines it.
    """
    if not family:
        if start is None:
            raise DiagonalError("empty family needs a start vertex")
        if not terminates:
            raise DiagonalError("an empty family determines only a finite path")
        last = Path(start)
    else:
        for n, p in enumerate(family, start=1):
            check_path(g, p)
            if len(p) != n:
                raise DiagonalError(f"member {n} has length {len(p)}")
            if n > 1 and not family[n - 2].is_prefix_of(p):
                raise DiagonalError(f"member {n} does not extend member {n - 1}")
        last = family[-1]
    if terminates:
        end = source(g, last)
        if not (isinstance(end, str) and g.is_singular(end)):
            raise DiagonalError(f"family stops at {last} whose source is not singular")
        return last
    return _infer_infinite(g, last)


def _infer_infinite(g: PresentedGraph, seen: Path) -> Walk:
    edges = seen.edges
    L = len(edges)
    best = None
    for p in range(L + 1):
        head = Path(seen.vertex, edges[:p])
        rest = edges[p:]
        if rest:
            first = rest[0]
            if isinstance(first, TailEdge) and first.index == 1:
                if all(e == TailEdge(first.tail, i) for i, e in enumerate(rest, start=1)):
                    cand = Absorbed(head, first.tail)
                    if source(g, head) == g.tail(first.tail).attach:
                        best = _shorter(best, cand)
        for c in range(1, (L - p) // 2 + 1):
            if all(edges[i] == edges[i - c] for i in range(p + c, L)):
                cyc = edges[p : p + c]
                try:
                    cand = Periodic(head, cyc)
                    check_walk(g, cand)
                except PathError:
                    continue
                best = _shorter(best, cand)
                break
    if best is None:
        raise DiagonalError(f"no representable infinite path begins with {seen}")
    return best


def _shorter(a, b):
    if a is None:
        return b
    key = lambda x: (x.description_length(), len(x.prefix))
    return b if key(b) < key(a) else a


def distinguishing_path(x: Walk, y: Walk, depth: int) -> Optional[Path]:
    """``mu`` with ``|mu| <= depth`` whose cylinder contains exactly one of ``x``, ``y``."""
    if x.vertex != y.vertex:
        return Path(x.vertex)
    for n in range(1, depth + 1):
        xe = x.edge(n) if not x.is_finite or n <= len(x) else None
        ye = y.edge(n) if not y.is_finite or n <= len(y) else None
        if xe != ye:
            return x.take(n) if xe is not None else y.take(n)
        if xe is None:
            return None
    return None


# the corner of C*(F) and its diagonal


def _over(m: CollapseMap, a: DiagonalElement, which: str):
    want = m.e if which == "e" else m.f
    if a.graph != want:
        raise DiagonalError(f"element does not live over the {'collapsed' if which == 'e' else 'original'} graph")


def corner_compress(m: CollapseMap, mu: Path) -> DiagonalElement:
    """``p P(mu) p``: ``P(mu)`` when ``r(mu)`` survives the collapse, else zero."""
    check_path(m.f, mu)
    if m.in_e0(mu.vertex):
        return projection(m.f, mu)
    return zero(m.f)


def pi_map(m: CollapseMap, a: DiagonalElement) -> DiagonalElement:
    _over(m, a, "e")
    out = {}
    for mu, c in a.terms.items():
        p = m.phi_inv(mu)
        out[p] = out.get(p, ZERO) + c
    return DiagonalElement(m.f, out)


def pi_inverse_reduce(m: CollapseMap, mu: Path) -> DiagonalElement:
    """The element of the collapsed diagonal that ``pi`` sends to ``p P(mu) p``."""
    check_path(m.f, mu)
    if not m.in_e0(mu.vertex):
        raise DiagonalError(f"range {mu.vertex} is not a vertex of the collapsed graph")
    end = source(m.f, mu)
    if m.in_e0(end):
        return projection(m.e, m.phi(mu))
    # drop the last tail edge and subtract the other edges into its range
    shorter = mu.take(len(mu) - 1)
    last = mu.edges[-1]
    out = pi_inverse_reduce(m, shorter)
    for f in m.f.iter_incoming(source(m.f, shorter)):
        if f != last:
            out = out - pi_inverse_reduce(m, shorter + (f,))
    return out


def corner_points(m: CollapseMap, depth: int, limit: Optional[int] = None) -> list:
    """Infinite paths of ``F`` with range a vertex of ``E``, prefix <= ``depth``."""
    out = []
    for v in m.e.vertices:
        out.extend(infinite_paths(m.f, v, depth, limit=limit).paths)
    return out


def diagram_check(m: CollapseMap, x: Walk, mu: Path) -> bool:
    """Both ways round the square: evaluate ``P(mu)`` at ``phi_inf(x)``, and ``pi(P(mu))`` at ``x``."""
    if x.is_finite or not m.in_e0(x.vertex):
        raise DiagonalError(f"{x} is not an infinite path at a vertex of the collapsed graph")
    left = character_eval(m.phi_inf(x), projection(m.e, mu))
    right = character_eval(x, pi_map(m, projection(m.e, mu)))
    return left == right


__all__ = [
    "DiagonalElement",
    "DiagonalError",
    "Character",
    "projection",
    "zero",
    "multiply",
    "q_projection",
    "q_is_nonzero",
    "q_witness",
    "q_decompose",
    "q_reconstruct",
    "is_zero",
    "equals",
    "norm",
    "norm_squared",
    "character_eval",
    "character_sup_squared",
    "sufficient_fan",
    "character_to_path",
    "prefix_family",
    "distinguishing_path",
    "default_depth",
    "some_boundary_path",
    "corner_compress",
    "corner_points",
    "pi_map",
    "pi_inverse_reduce",
    "diagram_check",
]
