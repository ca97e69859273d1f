"""Invariant suite run by ``graphpaths verify-all``.

Each check returns ``(passed, detail)``.  The suite adapts to the graph: a
tail-free graph is desingularised and the checks on path maps and the
corner run on the result; a graph with tails is collapsed along every
collapsible tail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .cylinders import Cylinder, intersect, member, separate
from .desing import check_collapsible, collapse, desingularise, iso_check
from .diagonal import (
    character_eval,
    character_to_path,
    corner_points,
    diagram_check,
    multiply,
    pi_inverse_reduce,
    pi_map,
    prefix_family,
    projection,
    q_projection,
    zero,
)
from .graph import TailVertex, validate
from .pathmaps import CollapseMap
from .paths import (
    boundary_paths,
    check_walk,
    e_leq_n,
    is_exhaustive,
    paths_upto,
    source,
)

SAMPLE = 40  # cap on paths per vertex in the quadratic checks


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _boundary(g, depth, limit=SAMPLE):
    out = []
    for v in g.vertices:
        out.extend(boundary_paths(g, v, depth, limit=limit).paths)
    return out


def check_validate(g, depth):
    r = validate(g)
    return r.ok, str(r)


def check_row_finite(g, depth):
    return g.is_row_finite == (not g.families), ""


def check_tail_degrees(g, depth):
    for t in g.tails:
        for j in range(1, depth + 1):
            if g.in_degree(TailVertex(t.id, j)) != 1 + len(t.slot(j)):
                return False, f"{t.id}#{j}"
    return True, f"{len(g.tails)} tails to depth {depth}"


def check_incoming_prefixes(g, depth):
    for v in g.all_vertices(2):
        lists = [g.incoming(v, k) for k in range(depth + 2)]
        if any(lists[k] != lists[k + 1][:k] for k in range(depth + 1)):
            return False, str(v)
    return True, ""


def check_exhaustive(g, depth):
    n_checked = 0
    for v in g.vertices:
        for n in range(depth + 1):
            paths = e_leq_n(g, v, n)
            if paths is None:
                continue
            n_checked += 1
            if not is_exhaustive(g, v, paths):
                return False, f"vE^<={n} at {v}"
    return True, f"{n_checked} sets"


def check_ck3(g, depth):
    n_checked = 0
    for v in g.vertices:
        xs = boundary_paths(g, v, depth, limit=SAMPLE).paths
        for n in range(min(depth, 3) + 1):
            paths = e_leq_n(g, v, n)
            if paths is None:
                continue
            lhs = projection(g, paths[0].take(0))
            rhs = zero(g)
            for p in paths:
                rhs = rhs + projection(g, p)
            for x in xs:
                n_checked += 1
                if character_eval(x, lhs, check=False) != character_eval(x, rhs, check=False):
                    return False, f"at {x}, n={n}"
    return True, f"{n_checked} evaluations"


def _basics(g, stem_len):
    out = []
    for v in g.vertices:
        for p in paths_upto(g, v, stem_len, limit=6).paths:
            at = source(g, p)
            into = g.incoming(at, 2)
            for k in range(len(into) + 1):
                for forb in itertools.combinations(into, k):
                    out.append(Cylinder(p, frozenset(forb)))
    return out[:SAMPLE]


def check_intersections(g, depth):
    zs = _basics(g, 2)
    ws = []
    for v in g.vertices:
        ws.extend(paths_upto(g, v, depth, limit=SAMPLE).paths)
    ws.extend(_boundary(g, depth))
    for z1, z2 in itertools.product(zs, repeat=2):
        both = intersect(z1, z2)
        for w in ws:
            want = member(w, z1) and member(w, z2)
            got = both is not None and member(w, both)
            if want != got:
                return False, f"{z1} & {z2} at {w}"
    return True, f"{len(zs) ** 2} pairs x {len(ws)} paths"


def check_hausdorff(g, depth):
    xs = _boundary(g, depth, limit=12)
    for x, y in itertools.combinations(xs, 2):
        a, b = separate(g, x, y)
        if not (member(x, a) and member(y, b)) or intersect(a, b) is not None:
            return False, f"{x} vs {y}"
    return True, f"{len(xs)} points"


def check_characters(g, depth):
    xs = _boundary(g, depth)
    for x in xs:
        if x.is_finite:
            got = character_to_path(g, prefix_family(x, len(x)), terminates=True, start=x.vertex)
        else:
            n = 3 * x.description_length() + 2
            got = character_to_path(g, prefix_family(x, n))
        if got != x:
            return False, f"{x} came back as {got}"
    return True, f"{len(xs)} boundary paths"


def check_q_projections(g, depth):
    n_checked = 0
    for v in g.vertices:
        fam = paths_upto(g, v, 2, limit=5).paths
        qs = [q_projection(g, fam, mu) for mu in fam]
        for i, qi in enumerate(qs):
            if multiply(qi, qi) != qi:
                return False, f"q({fam[i]}) not idempotent"
            for qj in qs[i + 1 :]:
                if multiply(qi, qj).terms:
                    return False, "q-projections not orthogonal"
        for nu in fam:
            total = zero(g)
            for mu, q in zip(fam, qs):
                if nu.is_prefix_of(mu):
                    total = total + q
            n_checked += 1
            if total != projection(g, nu):
                return False, f"reconstruction of P({nu})"
    return True, f"{n_checked} reconstructions"


def _collapse_map(g) -> Optional[CollapseMap]:
    if not g.tails:
        f, tails = desingularise(g)
        m = collapse(f, tails).map
        return m if iso_check(m.e, g) is not None else None
    ok = [t.id for t in g.tails if check_collapsible(g, t.id).ok]
    return collapse(g, ok).map


def check_round_trip(g, depth):
    if g.tails:
        return True, "skipped: graph has tails"
    f, tails = desingularise(g)
    if f.singular_vertices() or not f.is_row_finite:
        return False, "desingularisation is not row-finite and source-free"
    iso = iso_check(collapse(f, tails).collapsed, g)
    return iso is not None, str(iso) if iso else "no isomorphism"


def check_phi_inf(g, depth):
    m = _collapse_map(g)
    if m is None:
        return False, "round trip failed"
    xs = corner_points(m, depth, limit=SAMPLE)
    for x in xs:
        y = m.phi_inf(x)
        check_walk(m.e, y)
        if y.vertex != x.vertex or m.phi_inf_inv(y) != x:
            return False, f"at {x}"
    for x in _boundary(m.e, depth):
        if m.phi_inf(m.phi_inf_inv(x)) != x:
            return False, f"inverse at {x}"
    return True, f"{len(xs)} paths"


def check_diagram(g, depth):
    m = _collapse_map(g)
    if m is None:
        return False, "round trip failed"
    xs = corner_points(m, depth, limit=SAMPLE)
    mus = []
    for v in m.e.vertices:
        mus.extend(paths_upto(m.e, v, min(depth, 3), limit=SAMPLE).paths)
    for x, mu in itertools.product(xs, mus):
        if mu.vertex == x.vertex and not diagram_check(m, x, mu):
            return False, f"x={x}, mu={mu}"
    fs = []
    for v in m.e.vertices:
        fs.extend(paths_upto(m.f, v, min(depth, 3), limit=SAMPLE).paths)
    for mu in fs:
        red = pi_inverse_reduce(m, mu)
        image = pi_map(m, red)
        for x in xs:
            if x.vertex == mu.vertex and character_eval(x, image, check=False) != (1 if mu.is_prefix_of(x) else 0):
                return False, f"reduction of {mu} at {x}"
    return True, f"{len(xs)} x {len(mus)} pairs, {len(fs)} reductions"


CHECKS: list = [
    ("validate", check_validate),
    ("row-finite iff no families", check_row_finite),
    ("tail in-degrees", check_tail_degrees),
    ("incoming edges are prefix-stable", check_incoming_prefixes),
    ("finite vE^<=n are exhaustive", check_exhaustive),
    ("vertex projection sums (CK3)", check_ck3),
    ("intersect matches membership", check_intersections),
    ("distinct points separate", check_hausdorff),
    ("characters recover their paths", check_characters),
    ("q-projections", check_q_projections),
    ("desingularise/collapse round trip", check_round_trip),
    ("phi_inf is a bijection", check_phi_inf),
    ("diagram commutes", check_diagram),
]


def run_all(g, depth: int = 4, checks: Optional[list] = None) -> list:
    out = []
    for name, fn in checks or CHECKS:
        try:
            passed, detail = fn(g, depth)
        except Exception as exc:  # report, keep going
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, passed, detail))
        if name == "validate" and not passed:
            break
    return out


def format_table(results: list) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check'.ljust(width)}  result  detail"]
    for r in results:
        lines.append(f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL'}    {r.detail}")
    return "\n".join(lines)
