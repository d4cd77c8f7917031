import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_k4, rule_ids, trinets
from trinet.core import (MULTI, ColorMismatch, ColoredTrinet, DegenerateExternal,
                         InvalidTrinet, MultiLinked, NotATriangle, SameEdge, Simulator,
                         SurroundingsType, SystemState, canonical_form,
                         edge_exchange, is_connected, make_cube, make_k33, parse_word,
                         rooted_iso, step, surroundings_type, triangle_expand,
                         triangle_shrink, type_code, unrooted_iso, walk)
from trinet.rules import decode, parse_rule
from trinet.worddyn import DOUBLE_HOP_RULE

DOUBLE_HOP = parse_rule(DOUBLE_HOP_RULE)


def relabel(G: ColoredTrinet, perm: list[int]) -> ColoredTrinet:
    n = G.n
    out = [0] * (3 * n)
    for v in range(n):
        for c in range(3):
            out[3 * perm[v] + c] = perm[G.nbr[3 * v + c]]
    return ColoredTrinet(out)


def test_cube_structure(cube):
    assert cube.n == 8
    edges = list(cube.edges())
    assert len(edges) == 12
    assert [sum(1 for e in edges if e[2] == c) for c in range(3)] == [4, 4, 4]
    cube.validate()
    assert all(surroundings_type(cube, v) == SurroundingsType.NONE for v in range(8))


def test_k33_structure(k33):
    assert k33.n == 6
    edges = list(k33.edges())
    assert len(edges) == 9
    assert [sum(1 for e in edges if e[2] == c) for c in range(3)] == [3, 3, 3]
    # bipartite between {0,1,2} and {3,4,5}
    assert all((u < 3) != (v < 3) for u, v, _ in edges)
    assert all(surroundings_type(k33, v) == SurroundingsType.NONE for v in range(6))


def test_walk_basics(cube):
    for v in range(8):
        assert walk(cube, v, ()) == v
        for c in range(3):
            assert walk(cube, v, (c, c)) == v


def test_cube_red_blue_cycle_has_length_four(cube):
    v = 0
    seen = [v]
    for _ in range(3):
        v = walk(cube, v, parse_word("rb"))
        seen.append(v)
    assert len(set(seen[:2])) == 2
    assert walk(cube, seen[-1], parse_word("rb")) == 0


@given(trinets, st.lists(st.integers(0, 2), max_size=6), st.lists(st.integers(0, 2), max_size=6))
def test_walk_concatenates(G, x, y):
    for v in range(G.n):
        assert walk(G, v, x + y) == walk(G, walk(G, v, x), y)


def test_expand_indices_and_internal_edges(cube):
    H = triangle_expand(cube, 0)
    assert H.n == 10
    tr, tg, tb = 0, 8, 9
    assert H.neighbor(tr, 0) == cube.neighbor(0, 0)
    assert H.neighbor(tg, 2) == cube.neighbor(0, 2)
    assert H.neighbor(tb, 1) == cube.neighbor(0, 1)
    assert H.neighbor(tg, 1) == tr
    assert H.neighbor(tb, 2) == tr
    assert H.neighbor(tb, 0) == tg
    H.validate()


def test_triangle_corner_types(cube):
    # each corner sees its two triangle partners joined by the color of its own
    # external edge
    H = triangle_expand(cube, 0)
    assert [surroundings_type(H, v).symbol for v in (0, 8, 9)] == ["r", "g", "b"]


def test_expanded_neighbor_type(cube):
    # the external neighbor of a corner still sees no interlinked pair
    H = triangle_expand(cube, 0)
    for c in range(3):
        u = cube.neighbor(0, c)
        assert surroundings_type(H, u) == SurroundingsType.NONE


def test_expand_then_shrink_round_trip(cube):
    for p in range(8):
        H = triangle_expand(cube, p)
        for corner in (p, 8, 9):
            K = triangle_shrink(H, corner)
            assert K.n == 8
            assert rooted_iso(K, p, cube, p)


@settings(max_examples=50)
@given(trinets, st.integers(0, 10 ** 6))
def test_expand_shrink_property(G, seed):
    p = random.Random(seed).randrange(G.n)
    try:
        K = triangle_shrink(triangle_expand(G, p), p)
    except (NotATriangle, DegenerateExternal):
        # p sat on a triangle already, or two externals meet
        return
    assert K.n == G.n
    assert rooted_iso(K, min(p, K.n - 1), G, p) or unrooted_iso(K, G)


def make_pinched() -> ColoredTrinet:
    # triangle 0,1,2 whose corners 0 and 1 share the external neighbor 3
    return ColoredTrinet.from_edges(8, [
        (0, 1, 0), (1, 2, 1), (2, 0, 2), (3, 0, 1), (3, 1, 2), (2, 5, 0),
        (3, 4, 0), (4, 6, 1), (4, 7, 2), (5, 6, 2), (5, 7, 1), (6, 7, 0)])


def test_shrink_errors(cube):
    with pytest.raises(NotATriangle):
        triangle_shrink(cube, 0)
    with pytest.raises(NotATriangle):
        # every vertex of K4 lies on three triangles
        triangle_shrink(make_k4(), 0)
    with pytest.raises(DegenerateExternal):
        triangle_shrink(make_pinched(), 2)


def test_shrink_reindexing(cube):
    H = triangle_expand(triangle_expand(cube, 0), 3)
    K = triangle_shrink(H, 8)
    assert K.n == 10
    K.validate()
    # the merged vertex takes the smallest triangle index; later ids shift down
    assert rooted_iso(K, 0, triangle_expand(cube, 3), 0)


def test_exchange(cube):
    a, b = 0, cube.neighbor(0, 0)
    x = cube.neighbor(0, 1)
    y = cube.neighbor(x, 0)
    H = edge_exchange(cube, (a, (0,)), (x, (0,)))
    H.validate()
    assert H.neighbor(a, 0) == x and H.neighbor(b, 0) == y
    back = edge_exchange(H, (a, (0,)), (b, (0,)))
    assert back.n == cube.n
    back.validate()
    with pytest.raises(ColorMismatch):
        edge_exchange(cube, (0, (0,)), (0, (1,)))
    with pytest.raises(SameEdge):
        edge_exchange(cube, (a, (0,)), (b, (0,)))


def test_exchange_twice_is_identity(cube):
    a = 0
    x = cube.neighbor(0, 1)
    b, y = cube.neighbor(a, 0), cube.neighbor(x, 0)
    H = cube.copy()
    H._exchange(a, b, x, y, 0)
    H._exchange(a, x, b, y, 0)
    assert H == cube


def test_exchange_can_break_planarity(cube):
    # crossing two red edges of one face turns the cube into a Moebius ladder
    import networkx as nx
    H = cube.copy()
    H._exchange(0, 1, 3, 2, 0)
    H.validate()
    assert is_connected(H)
    planar, kuratowski = nx.check_planarity(nx.Graph([(u, v) for u, v, _ in H.edges()]),
                                            counterexample=True)
    assert not planar
    # the obstruction is a K33 subdivision: six branch vertices of degree three
    degrees = sorted(d for _, d in kuratowski.degree())
    assert degrees.count(3) == 6 and set(degrees) <= {2, 3}


def test_invalid_graphs():
    with pytest.raises(InvalidTrinet):
        ColoredTrinet.from_edges(2, [(0, 1, 0), (0, 1, 0)])
    with pytest.raises(InvalidTrinet):
        ColoredTrinet([1, 1, 1, 0, 0])
    with pytest.raises(InvalidTrinet):
        ColoredTrinet([0, 0, 0]).validate()


def test_multilinked():
    K4 = make_k4()
    assert type_code(K4.nbr, 0) == MULTI
    with pytest.raises(MultiLinked):
        surroundings_type(K4, 0)


def test_iso_and_canonical_form(cube):
    forms = {canonical_form(cube, v) for v in range(8)}
    assert len(forms) == 1
    H = triangle_expand(cube, 0)
    assert canonical_form(H, 0) != canonical_form(H, 1)
    assert not rooted_iso(H, 0, H, 1)
    assert rooted_iso(H, 0, H, 0)
    assert unrooted_iso(H, triangle_expand(cube, 5))


@given(trinets, st.integers(0, 10 ** 6))
def test_canonical_form_ignores_labels(G, seed):
    rng = random.Random(seed)
    perm = list(range(G.n))
    rng.shuffle(perm)
    H = relabel(G, perm)
    for v in range(G.n):
        assert canonical_form(G, v) == canonical_form(H, perm[v])
        assert rooted_iso(G, v, H, perm[v])


@given(trinets)
def test_canonical_form_matches_rooted_iso(G):
    for v in range(G.n):
        for w in range(G.n):
            same = canonical_form(G, v) == canonical_form(G, w)
            assert same == rooted_iso(G, v, G, w)


def test_step_double_hop_growth(cube):
    state = SystemState(cube, 0, 0)
    for t in range(1, 30):
        state, rep = step(state, DOUBLE_HOP)
        assert state.graph.n == 8 + 2 * t
        assert rep.delta == 2


def test_step_no_action_keeps_state(cube):
    rule = parse_rule("r -> keep move r")
    state, rep = step(SystemState(cube, 3, 5), rule)
    assert state.graph == cube and state.writer == 3 and state.time == 6
    assert rep.action is None and rep.delta == 0


def test_step_agrees_with_simulator(cube):
    rule = decode(768)
    state = SystemState(cube.copy(), 0, 0)
    sim = Simulator(rule, cube.copy())
    for _ in range(60):
        state, _ = step(state, rule)
        sim.advance(1)
        assert state.graph == sim.graph and state.writer == sim.writer


def test_step_is_deterministic_on_canonical_forms(cube):
    rule = decode(1905)
    perm = [3, 1, 4, 0, 5, 7, 2, 6]
    a = SystemState(cube, 0)
    b = SystemState(relabel(cube, perm), perm[0])
    for _ in range(12):
        a, _ = step(a, rule)
        b, _ = step(b, rule)
        assert a.canonical() == b.canonical()


def test_writer_index_convention(cube):
    # replace moves the writer out through the triangle corner owning the first
    # color; new corners t_g, t_b take indices L, L+1 (1-based L+1, L+2)
    rule = parse_rule("0 -> replace move b")
    sim = Simulator(rule, cube.copy())
    sim.advance(1)
    assert sim.writer == cube.neighbor(0, 1)
    assert sim.graph.neighbor(9, 1) == sim.writer
    rule = parse_rule("0 -> replace move gg")
    sim = Simulator(rule, cube.copy())
    sim.advance(1)
    assert sim.writer == 8


def test_simulator_fast_and_generic_paths_agree(cube):
    for rid in (62, 768, 1905, 3211, 3540):
        rule = decode(rid)
        fast = Simulator(rule, cube.copy())
        slow = Simulator(rule, cube.copy())
        fast.advance(300)
        for _ in range(300):
            slow.advance(1, on_step=lambda *a: None)
        assert fast.graph == slow.graph and fast.writer == slow.writer
        assert bytes(fast.types) == bytes(slow.types)


@settings(max_examples=25, deadline=None)
@given(rule_ids)
def test_canonical_rules_keep_invariants(rid):
    sim = Simulator(decode(rid), make_cube())
    prev = sim.n
    for _ in range(40):
        sim.advance(5)
        assert sim.n - prev in range(0, 11, 2)
        prev = sim.n
    sim.graph.validate()
    assert is_connected(sim.graph)
    assert sim.anomalies == 0


def test_k33_runs(k33):
    sim = Simulator(DOUBLE_HOP, k33)
    sim.advance(10)
    sim.graph.validate()
    assert sim.n == 6 + 2 * 10
