import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from strategies import collapses, e_graphs, seeds

from graphpaths import fixtures
from graphpaths.desing import collapse
from graphpaths.diagonal import (
    Character,
    DiagonalElement,
    DiagonalError,
    character_eval,
    character_sup_squared,
    character_to_path,
    corner_compress,
    corner_points,
    diagram_check,
    distinguishing_path,
    equals,
    is_zero,
    multiply,
    norm,
    norm_squared,
    pi_inverse_reduce,
    pi_map,
    prefix_family,
    projection,
    q_decompose,
    q_is_nonzero,
    q_projection,
    q_reconstruct,
    q_witness,
    sufficient_fan,
    zero,
)
from graphpaths.graph import EntryEdge, FamilyEdge, TailEdge
from graphpaths.literals import parse_element
from graphpaths.paths import Absorbed, Path, Periodic, boundary_paths, e_leq_n, is_boundary, paths_upto
from graphpaths.scalars import Gaussian

CYCLE = Periodic(Path("v"), ("nu1", "g", "f"))


def P(v, *edges):
    return Path(v, edges)


def el(g, text):
    return parse_element(g, text)


# products


def test_multiply_examples(E_ex):
    assert multiply(projection(E_ex, P("v", "nu1")), projection(E_ex, P("v", "nu1", "g"))) == projection(
        E_ex, P("v", "nu1", "g")
    )
    assert multiply(projection(E_ex, P("v", "nu1", "nu2")), projection(E_ex, P("v", "nu1", "g"))) == zero(E_ex)
    a = el(E_ex, "2*P(nu1.g) - (1+i)*P(nu1.nu2)")
    assert projection(E_ex, P("v")) * a == a


def test_multiply_needs_one_graph(E_ex, E_omega):
    with pytest.raises(DiagonalError):
        multiply(projection(E_ex, P("v")), projection(E_omega, P("v")))


def test_zero_coefficients_are_dropped(E_ex):
    a = el(E_ex, "P(nu1) - P(nu1)")
    assert a.terms == {} and a == zero(E_ex)


# q-projections


def test_q_projection_examples(E_ex):
    F = [P("v"), P("v", "nu1")]
    assert q_projection(E_ex, F, P("v")) == el(E_ex, "P(v) - P(nu1)")
    F = [P("v", "nu1"), P("v", "nu1", "nu2"), P("v", "nu1", "g")]
    assert q_projection(E_ex, F, P("v", "nu1")) == el(E_ex, "P(nu1) - P(nu1.nu2) - P(nu1.g)")
    assert q_projection(E_ex, [P("v", "nu1")], P("v", "nu1")) == projection(E_ex, P("v", "nu1"))


def test_q_projection_needs_membership(E_ex):
    with pytest.raises(DiagonalError):
        q_projection(E_ex, [P("v")], P("v", "nu1"))


def test_q_is_nonzero_examples(E_ex, E_omega):
    assert not q_is_nonzero(E_ex, [P("v"), P("v", "nu1")], P("v"))
    assert q_is_nonzero(E_omega, [P("v"), P("v", FamilyEdge("e", 1))], P("v"))
    for g in (E_ex, E_omega):
        for v in g.vertices:
            assert q_is_nonzero(g, [P(v)], P(v))


def test_q_witness_lands_in_the_region(E_ex):
    F = [P("v"), P("v", "nu1", "nu2")]
    x = q_witness(E_ex, F, P("v"))
    assert x is not None and is_boundary(E_ex, x) and not P("v", "nu1", "nu2").is_prefix_of(x)
    assert q_witness(E_ex, [P("v"), P("v", "nu1")], P("v")) is None


def test_q_decompose_examples(E_ex):
    a = el(E_ex, "P(v) + 0*P(nu1)")
    assert q_decompose(a) == {P("v"): 1}
    F_terms = DiagonalElement(E_ex, {P("v"): 1, P("v", "nu1"): 0})
    assert q_decompose(F_terms) == {P("v"): 1}
    a = el(E_ex, "P(v) - P(nu1)")
    assert q_decompose(a) == {P("v"): 1, P("v", "nu1"): 0}
    assert q_decompose(zero(E_ex)) == {}


def test_q_decompose_over_a_chosen_family(E_ex):
    # P(v) over F = {v, nu1}: nu1 lies in Z(v), so both coefficients are one
    coeffs = {P("v"): Gaussian(1), P("v", "nu1"): Gaussian(1)}
    assert q_reconstruct(E_ex, coeffs) == projection(E_ex, P("v"))


# norms


def test_norm_examples(E_ex):
    assert norm(el(E_ex, "P(v) - P(nu1.nu2)")) == 1
    assert norm(el(E_ex, "P(v) - P(nu1)")) == 0
    assert norm(el(E_ex, "(3+4i)*P(nu1)")) == 5
    assert norm(el(E_ex, "(1+i)*P(v)")) == pytest.approx(2**0.5)
    assert norm_squared(el(E_ex, "(1+i)*P(v)")) == 2


def test_norm_is_the_character_sup(E_ex):
    a = el(E_ex, "P(v) - P(nu1.nu2)")
    assert character_sup_squared(a) == character_sup_squared(a, depth=6) == norm_squared(a) == 1


def test_equality_as_functions(E_ex):
    assert equals(el(E_ex, "P(v)"), el(E_ex, "P(nu1)"))
    assert el(E_ex, "P(v)") != el(E_ex, "P(nu1)")
    assert not equals(el(E_ex, "P(v)"), el(E_ex, "P(nu1.g)"))


def test_ck3_in_the_model(E_ex, E_omega):
    for g in (E_ex, fixtures.f_ex()):
        for v in g.vertices:
            for n in range(4):
                layer = e_leq_n(g, v, n)
                total = sum((projection(g, p) for p in layer), zero(g))
                assert equals(projection(g, P(v)), total)
    assert e_leq_n(E_omega, "v", 1) is None


# characters


def test_character_eval_examples(E_ex, E_omega):
    assert character_eval(P("v", "nu1", "nu2"), projection(E_ex, P("v", "nu1"))) == 1
    assert character_eval(P("v"), projection(E_omega, P("v", FamilyEdge("e", 1)))) == 0
    assert character_eval(CYCLE, el(E_ex, "P(v) - P(nu1.nu2)")) == 1


def test_character_eval_rejects_non_boundary_paths(E_ex):
    with pytest.raises(DiagonalError):
        character_eval(P("v", "nu1"), projection(E_ex, P("v")))
    with pytest.raises(DiagonalError):
        Character(E_ex, P("v", "nu1"))
    assert Character(E_ex, CYCLE)(el(E_ex, "2*P(nu1.g)")) == 2


def test_character_to_path_examples(E_ex, E_omega):
    e2 = P("v", FamilyEdge("e", 2))
    assert character_to_path(E_omega, [e2], terminates=True) == e2
    assert character_to_path(E_ex, prefix_family(CYCLE, 8)) == CYCLE
    with pytest.raises(DiagonalError):
        character_to_path(E_ex, [P("v", "nu1")], terminates=True)


def test_character_to_path_rejects_inconsistent_families(E_ex):
    with pytest.raises(DiagonalError):
        character_to_path(E_ex, [P("v", "nu1"), P("v", "nu1")])
    with pytest.raises(DiagonalError):
        character_to_path(E_ex, [P("v", "nu1", "g")])
    with pytest.raises(DiagonalError):
        character_to_path(E_ex, [], terminates=False, start="v")


def test_character_to_path_of_a_tail(F_ex):
    x = Absorbed(P("v", "nu1", "nu2"), "nu")
    assert character_to_path(F_ex, prefix_family(x, 8)) == x


def test_distinguishing_path(E_ex):
    assert distinguishing_path(CYCLE, P("v", "nu1", "nu2"), 5) == P("v", "nu1", "g")
    assert distinguishing_path(CYCLE, CYCLE, 20) is None


# corner and pi


def test_corner_compress_examples(F_omega, F_ex):
    mu1 = P("v", TailEdge("v_tail", 1))
    assert corner_compress(collapse(F_omega, ["v_tail", "w_tail"]).map, mu1) == projection(F_omega, mu1)
    mu2 = Path(F_omega.source(TailEdge("v_tail", 1)), (TailEdge("v_tail", 2),))
    assert corner_compress(collapse(F_omega, ["v_tail", "w_tail"]).map, mu2) == zero(F_omega)
    nu = P("w", TailEdge("nu", 1))
    assert corner_compress(collapse(F_ex, ["nu"]).map, nu) == projection(F_ex, nu)


def test_pi_examples(F_omega, F_ex):
    m = collapse(F_omega, ["v_tail", "w_tail"]).map
    got = pi_map(m, projection(m.e, P("v", FamilyEdge("v_tail", 1))))
    assert got == projection(F_omega, P("v", TailEdge("v_tail", 1), EntryEdge("v_tail", 1, "e")))
    mu1 = P("v", TailEdge("v_tail", 1))
    assert pi_map(m, pi_inverse_reduce(m, mu1)) == pi_map(m, projection(m.e, P("v")))
    assert pi_inverse_reduce(m, mu1) == projection(m.e, P("v"))
    mx = collapse(F_ex, ["nu"]).map
    assert pi_inverse_reduce(mx, P("v", "nu1")) == projection(mx.e, P("v", "nu1"))


def test_pi_inverse_reduce_needs_a_surviving_range(F_omega):
    m = collapse(F_omega, ["v_tail", "w_tail"]).map
    mu2 = Path(F_omega.source(TailEdge("v_tail", 1)), (TailEdge("v_tail", 2),))
    with pytest.raises(DiagonalError):
        pi_inverse_reduce(m, mu2)


def test_diagram_examples(F_omega):
    m = collapse(F_omega, ["v_tail", "w_tail"]).map
    e1 = P("v", FamilyEdge("v_tail", 1))
    x = Absorbed(P("v", TailEdge("v_tail", 1), EntryEdge("v_tail", 1, "e")), "w_tail")
    assert diagram_check(m, x, e1)
    assert character_eval(m.phi_inf(x), projection(m.e, e1)) == 1
    y = Absorbed(P("v"), "v_tail")
    assert diagram_check(m, y, e1) and character_eval(m.phi_inf(y), projection(m.e, e1)) == 0
    assert diagram_check(m, y, P("v"))
    with pytest.raises(DiagonalError):
        diagram_check(m, P("v"), e1)


# properties


def _random_element(g, rng, size=3):
    pool = [p for v in g.vertices for p in paths_upto(g, v, 3, limit=4, fan=3).paths]
    picks = rng.sample(pool, min(size, len(pool)))
    coeff = lambda: Gaussian(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-2, 2)))
    return DiagonalElement(g, {p: coeff() for p in picks})


def _points(g, a, depth=None):
    depth = 4 if depth is None else depth
    fan = sufficient_fan(a)
    return [x for v in g.vertices for x in boundary_paths(g, v, depth, limit=30, fan=fan).paths]


@given(e_graphs, seeds)
def test_q_projections_are_orthogonal_idempotents(g, seed):
    rng = random.Random(seed)
    pool = paths_upto(g, g.vertices[0], 3, limit=6, fan=2).paths
    F = rng.sample(pool, min(4, len(pool)))
    qs = [q_projection(g, F, mu) for mu in F]
    for q in qs:
        assert equals(multiply(q, q), q)
    for a, b in itertools.combinations(qs, 2):
        assert is_zero(multiply(a, b))
    for nu in F:
        parts = [q_projection(g, F, p) for p in F if nu.is_prefix_of(p)]
        assert equals(sum(parts, zero(g)), projection(g, nu))


@given(e_graphs, seeds)
def test_faithfulness(g, seed):
    rng = random.Random(seed)
    a = _random_element(g, rng)
    a = a - DiagonalElement(g, {p: c for p, c in list(a.terms.items())[:1]})
    values_vanish = all(not character_eval(x, a, check=False) for x in _points(g, a))
    q_vanish = all(not c or not q_is_nonzero(g, a.support, nu) for nu, c in q_decompose(a).items())
    assert is_zero(a) == values_vanish == q_vanish


@given(e_graphs, seeds)
def test_reconstruction_from_q_coefficients(g, seed):
    a = _random_element(g, random.Random(seed), 4)
    assert equals(q_reconstruct(g, q_decompose(a)), a)


@given(e_graphs, seeds)
def test_norm_properties(g, seed):
    rng = random.Random(seed)
    a, b = _random_element(g, rng), _random_element(g, rng)
    assert norm_squared(a * b) <= norm_squared(a) * norm_squared(b)
    assert norm_squared(a.adjoint()) == norm_squared(a)
    assert norm_squared(a) == character_sup_squared(a)
    for x in _points(g, a, 3):
        va, vb = character_eval(x, a, check=False), character_eval(x, b, check=False)
        assert character_eval(x, a * b, check=False) == va * vb
        assert va.norm_squared() <= norm_squared(a)


@given(e_graphs)
def test_projection_difference_fact(g):
    # q0 = q(mu, F) sits under P(mu) and misses every other P(mu mu'), so multiplying
    # it by each difference P(mu) - P(mu mu') changes nothing
    for v in g.vertices:
        pool = paths_upto(g, v, 2, limit=5, fan=2).paths
        mu, exts = pool[0], pool[1:]
        q0 = q_projection(g, pool, mu)
        out = q0
        for ext in exts:
            out = multiply(out, projection(g, mu) - projection(g, ext))
        assert equals(out, q0)


@given(e_graphs)
def test_characters_are_injective(g):
    xs = [x for v in g.vertices for x in boundary_paths(g, v, 3, limit=12, fan=3).paths]
    for x, y in itertools.combinations(xs, 2):
        mu = distinguishing_path(x, y, 32)
        assert mu is not None
        a = projection(g, mu)
        assert character_eval(x, a) != character_eval(y, a)


@given(e_graphs)
def test_characters_recover_their_paths(g):
    for v in g.vertices:
        for x in boundary_paths(g, v, 3, limit=8, fan=3).paths:
            if x.is_finite:
                got = character_to_path(g, prefix_family(x, len(x)), terminates=True, start=v)
            else:
                got = character_to_path(g, prefix_family(x, 3 * x.description_length() + 2))
            assert got == x


@settings(max_examples=30)
@given(collapses, seeds)
def test_pi_corresponds_to_phi_inf(triple, seed):
    _, _, m = triple
    rng = random.Random(seed)
    xs = corner_points(m, 2, limit=8)
    a = _random_element(m.e, rng)
    image = pi_map(m, a)
    for x in xs:
        assert character_eval(x, image, check=False) == character_eval(m.phi_inf(x), a, check=False)
        for mu in a.support:
            assert diagram_check(m, x, mu)


@settings(max_examples=30)
@given(collapses)
def test_pi_inverse_reduce_agrees_with_corner_compress(triple):
    _, _, m = triple
    xs = corner_points(m, 2, limit=8)
    for v in m.e.vertices:
        for mu in paths_upto(m.f, v, 3, limit=6).paths:
            lhs = pi_map(m, pi_inverse_reduce(m, mu))
            rhs = corner_compress(m, mu)
            for x in xs:
                assert character_eval(x, lhs, check=False) == character_eval(x, rhs, check=False)
