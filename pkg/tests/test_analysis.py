import random
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_trinet, trinets
from test_core import relabel
from trinet.analysis import (Disconnected, Series, TooLarge, TooSmall, adjacency,
                             bfs_distances, bfs_paths, diameter, distance_matrix, gromov_delta,
                             linear_fit_deviation, scaled_hyperbolic, shell_dimension,
                             shell_sizes, trajectory, vertex_count_series, writer_index_series,
                             writer_trail)
from trinet.catalog import named_rule
from trinet.core import Simulator, make_cube, walk
from trinet.worddyn import theorem2_count


def to_nx(G) -> nx.Graph:
    g = nx.Graph()
    for v, xs in enumerate(adjacency(G)):
        g.add_node(v)
        g.add_edges_from((v, x) for x in xs)
    return g


def delta_oracle(G) -> int:
    """Brute force over every triple and every vertex of every shortest path."""
    g = to_nx(G)
    d = dict(nx.all_pairs_shortest_path_length(g))
    between = {}
    for i, j in combinations(g.nodes, 2):
        s = set()
        for path in nx.all_shortest_paths(g, i, j):
            s.update(path)
        between[i, j] = between[j, i] = s
    for i in g.nodes:
        between[i, i] = {i}
    best = 0
    for a, b, c in combinations(g.nodes, 3):
        v = min(d[x][y] + d[y][z] + d[z][x]
                for x in between[b, c] for y in between[a, c] for z in between[a, b])
        best = max(best, v)
    return best


def random_tree(seed: int, n: int) -> list[list[int]]:
    rng = random.Random(seed)
    adj = [[] for _ in range(n)]
    for v in range(1, n):
        u = rng.randrange(v)
        adj[u].append(v)
        adj[v].append(u)
    return adj


def torus(m: int) -> list[list[int]]:
    return [[((i + di) % m) * m + (j + dj) % m for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))]
            for i in range(m) for j in range(m)]


# -- distances -----------------------------------------------------------------------

def test_cube_and_k33_shells(cube, k33):
    assert shell_sizes(cube, 0) == [1, 3, 3, 1]
    assert diameter(cube) == 3
    assert shell_sizes(k33, 0) == [1, 3, 2]
    assert diameter(k33) == 2


@settings(deadline=None)
@given(trinets)
def test_distances_match_networkx(G):
    g = to_nx(G)
    D = distance_matrix(G)
    for v in range(G.n):
        want = nx.single_source_shortest_path_length(g, v)
        assert bfs_distances(G, v) == [want[u] for u in range(G.n)]
        assert list(D[v]) == bfs_distances(G, v)
    assert diameter(G) == nx.diameter(g)
    assert diameter(G, chunk=3) == diameter(G)


def test_disconnected():
    adj = [[1], [0], [3], [2]]
    with pytest.raises(Disconnected):
        distance_matrix(adj)
    with pytest.raises(Disconnected):
        diameter(adj)
    with pytest.raises(Disconnected):
        shell_sizes(adj, 0)
    assert bfs_distances(adj, 0) == [0, 1, -1, -1]


# -- hyperbolicity -------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 40))
def test_tree_delta_is_zero(seed, n):
    tree = random_tree(seed, n)
    assert gromov_delta(tree) == 0
    assert gromov_delta(tree, "single-path") == 0
    if n >= 2:
        report = scaled_hyperbolic(tree)
        assert report.ratio == 0 and report.is_scaled_hyperbolic


def test_cube_delta_against_oracle(cube):
    assert delta_oracle(cube) == 0
    assert gromov_delta(cube) == 0
    # one fixed path per pair misses the median and gives a larger value
    assert gromov_delta(cube, "single-path") == 4


@settings(max_examples=60, deadline=None)
@given(trinets)
def test_delta_matches_oracle(G):
    assert gromov_delta(G) == delta_oracle(G)


@settings(max_examples=30, deadline=None)
@given(trinets)
def test_single_path_variant(G):
    path = bfs_paths(G)
    D = distance_matrix(G)
    for i, j in combinations(range(G.n), 2):
        p = list(path(i, j))
        assert p[0] == j and p[-1] == i and len(p) == D[i, j] + 1
        assert all(b in adjacency(G)[a] for a, b in zip(p, p[1:]))
    # fewer candidate points can only make triangles fatter
    assert gromov_delta(G, "single-path") >= gromov_delta(G)


@settings(max_examples=20, deadline=None)
@given(trinets, st.integers(0, 10 ** 6))
def test_delta_ignores_labels(G, seed):
    perm = list(range(G.n))
    random.Random(seed).shuffle(perm)
    assert gromov_delta(relabel(G, perm)) == gromov_delta(G)


def test_hyperbolicity_report():
    G = random_trinet(7)
    rep = scaled_hyperbolic(G)
    assert rep.ratio == Fraction(rep.delta, rep.diameter)
    assert rep.is_scaled_hyperbolic == (rep.ratio < Fraction(3, 2))
    assert rep.variant == "geodesic-sets"
    with pytest.raises(TooLarge):
        gromov_delta(G, limit=G.n - 1)
    with pytest.raises(TooLarge):
        scaled_hyperbolic(G, limit=3)
    with pytest.raises(ValueError):
        gromov_delta(G, variant="median")


# -- shells --------------------------------------------------------------------------

def test_shell_dimension_of_grid():
    assert abs(shell_dimension(torus(60), 0) - 2) < 0.3


def test_shell_dimension_of_line_like_growth():
    sim = Simulator(named_rule("period-one"), make_cube())
    sim.advance(2000)
    assert abs(shell_dimension(sim.graph, sim.writer) - 1) < 0.3


def test_shell_dimension_too_small(cube):
    with pytest.raises(TooSmall):
        shell_dimension(cube, 0)


# -- series --------------------------------------------------------------------------

def test_growth_series():
    for name in ("double-hop", "period-one"):
        s = vertex_count_series(named_rule(name), T=300)
        assert s.values == [8 + 2 * t for t in range(301)]
        assert s.times == list(range(301))


def test_fixed_rule_series_is_constant_after_halt():
    s = vertex_count_series(named_rule("quick-halt"), T=50)
    assert len(set(s.values[3:])) == 1


def test_writer_index_series_counts_from_one():
    s = writer_index_series(named_rule("double-hop"), T=20)
    traj = trajectory(named_rule("double-hop"), T=20)
    assert s.values == [v + 1 for v in traj]
    assert s.values[0] == 1


def test_linear_fit_of_affine_series_is_zero():
    s = Series("x", [(t, 3 * t - 7) for t in range(0, 50, 3)])
    res = linear_fit_deviation(s)
    assert all(v == 0 for v in res.values)
    assert res.times == s.times
    with pytest.raises(ValueError):
        linear_fit_deviation(Series("x", [(0, 1)]))


def test_golden_residuals_match_formula():
    sim_counts = vertex_count_series(named_rule("golden"), T=400)
    formula = Series("formula", [(t, theorem2_count(t)) for t in range(401)])
    assert linear_fit_deviation(sim_counts).values == linear_fit_deviation(formula).values
    assert len(set(linear_fit_deviation(formula).values)) > 10


def test_series_rejects_unordered_times():
    with pytest.raises(ValueError):
        Series("x", [(0, 1), (0, 2)])


def test_series_csv():
    s = Series("x", [(0, Fraction(1, 2)), (1, Fraction(3)), (2, 4)])
    assert s.to_csv() == "t,value\n0,0.5\n1,3\n2,4\n"


def test_writer_trail():
    traj = [0, 1, 2, 3]
    assert writer_trail(traj, 2) == [(1, 2), (2, 3)]
    assert writer_trail(traj, 0) == []
    with pytest.raises(ValueError):
        writer_trail(traj, 4)
    halted = trajectory(named_rule("quick-halt"), T=20)
    assert all(a == b for a, b in writer_trail(halted, 10))


def test_double_hop_trail_follows_red_blue_cycle():
    rule = named_rule("double-hop")
    sim = Simulator(rule, make_cube())
    sim.advance(200)
    traj = trajectory(rule, T=200)
    cycle = {sim.writer}
    v = sim.writer
    for _ in range(sim.n):
        v = walk(sim.graph, v, (0, 1))
        cycle.add(v)
    # every vertex the writer stood on in the last stretch sits on one r/b cycle
    assert {b for _, b in writer_trail(traj, 50)} <= cycle
