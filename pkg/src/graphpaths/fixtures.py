"""Named example graphs and random generators for tests and the CLI."""

from __future__ import annotations

import random
from typing import Optional

from .graph import Family, PresentedGraph, Tail, make_graph
from .sequences import EventuallyPeriodic


def e_pt() -> PresentedGraph:
    """A single vertex and nothing else."""
    return make_graph(["v"])


def e_omega() -> PresentedGraph:
    """Vertices ``v, w`` and infinitely many edges ``e[j]`` from ``w`` to ``v``."""
    return make_graph(["v", "w"], families=[("e", "v", (), ("w",))])


def e_ex() -> PresentedGraph:
    """Four vertices; ``w`` is the only source and ``nu1 g f`` the only cycle."""
    return make_graph(
        ["v", "u", "w", "b"],
        [("nu1", "u", "v"), ("nu2", "w", "u"), ("f", "v", "b"), ("g", "b", "u")],
    )


def f_ex() -> PresentedGraph:
    """``e_ex`` with an entry-free tail ``nu`` hanging off ``w``."""
    g = e_ex()
    return PresentedGraph(g.vertices, g.edges, (), (Tail("nu", "w", EventuallyPeriodic()),))


def f_omega() -> PresentedGraph:
    """Desingularisation of ``e_omega``: ``e[j]`` moves to position ``j`` of the tail at ``v``."""
    from .desing import desingularise

    return desingularise(e_omega())[0]


NAMED = {
    "E_pt": e_pt,
    "E_omega": e_omega,
    "E_ex": e_ex,
    "F_ex": f_ex,
    "F_omega": f_omega,
}


def random_source_pattern(rng: random.Random, vertices: list, max_prefix: int = 2, max_cycle: int = 2):
    pre = tuple(rng.choice(vertices) for _ in range(rng.randint(0, max_prefix)))
    cyc = tuple(rng.choice(vertices) for _ in range(rng.randint(1, max_cycle)))
    return EventuallyPeriodic(pre, cyc)


def random_e_graph(
    rng: random.Random,
    max_vertices: int = 6,
    max_families: int = 2,
    max_edges: Optional[int] = None,
    min_vertices: int = 1,
) -> PresentedGraph:
    """A random tail-free presentation; multi-edges and loops allowed."""
    n = rng.randint(min_vertices, max_vertices)
    vs = [f"x{i}" for i in range(n)]
    m = rng.randint(0, max_edges if max_edges is not None else 2 * n)
    edges = [(f"a{i}", rng.choice(vs), rng.choice(vs)) for i in range(m)]
    k = rng.randint(0, max_families)
    fams = [Family(f"fam{i}", rng.choice(vs), random_source_pattern(rng, vs)) for i in range(k)]
    return PresentedGraph(tuple(vs), tuple(edges), tuple(fams), ())


def random_row_finite(rng: random.Random, max_vertices: int = 5, max_edges: Optional[int] = None) -> PresentedGraph:
    return random_e_graph(rng, max_vertices, 0, max_edges)


def random_collapse(rng: random.Random, max_vertices: int = 4, max_families: int = 2, max_edges: Optional[int] = None):
    """``(E, F, CollapseMap)`` from desingularising a random presentation."""
    from .desing import collapse, desingularise

    e = random_e_graph(rng, max_vertices, max_families, max_edges)
    counts = None
    if rng.random() < 0.3:
        counts = EventuallyPeriodic(tuple(rng.randint(0, 2) for _ in range(rng.randint(0, 2))), (rng.randint(1, 2),))
    f, tails = desingularise(e, counts)
    result = collapse(f, tails)
    return e, f, result.map
