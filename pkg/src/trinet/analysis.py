"""Observables of a run: growth and writer series, distances, hyperbolicity.

Graph arguments may be a ColoredTrinet or any adjacency list (a sequence
whose entry v lists the neighbours of v), so the metrics also apply to
ordinary graphs such as trees.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .core import INITIAL_GRAPHS, ColoredTrinet, Simulator

DELTA_LIMIT = 2000


class TooSmall(ValueError):
    pass


class TooLarge(ValueError):
    pass


class Disconnected(ValueError):
    pass


@dataclass
class Series:
    name: str
    points: list

    def __post_init__(self):
        ts = [t for t, _ in self.points]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("series times must be strictly increasing")

    @property
    def times(self) -> list:
        return [t for t, _ in self.points]

    @property
    def values(self) -> list:
        return [v for _, v in self.points]

    def __len__(self) -> int:
        return len(self.points)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in self.points:
            w.writerow([t, _plain(v)])
        return buf.getvalue()


def _plain(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(v)
    return v


# -- time series -----------------------------------------------------------------

def _run(rule, init, T: int, observe) -> list:
    if init is None:
        init = INITIAL_GRAPHS["cube"]()
    sim = Simulator(rule, init.copy(), track_births=False, record_types=False)
    out = [(0, observe(sim))]
    for t in range(1, T + 1):
        sim.advance(1)
        out.append((t, observe(sim)))
    return out


def vertex_count_series(rule, init: ColoredTrinet | None = None, T: int = 100) -> Series:
    return Series("vertices", _run(rule, init, T, lambda s: s.n))


def writer_index_series(rule, init: ColoredTrinet | None = None, T: int = 100) -> Series:
    """Writer index per step, counting vertices from 1."""
    return Series("writer_index", _run(rule, init, T, lambda s: s.writer + 1))


def trajectory(rule, init: ColoredTrinet | None = None, T: int = 100) -> list[int]:
    """Writer vertex ids (0-based) at times 0..T."""
    return [v for _, v in _run(rule, init, T, lambda s: s.writer)]


def linear_fit_deviation(s: Series) -> Series:
    """Residuals from the exact least-squares line through the series."""
    if len(s) < 2:
        raise ValueError("need at least two points")
    ts = [Fraction(t) for t in s.times]
    vs = [Fraction(v) for v in s.values]
    n = len(ts)
    mt = sum(ts) / n
    mv = sum(vs) / n
    var = sum((t - mt) ** 2 for t in ts)
    slope = sum((t - mt) * (v - mv) for t, v in zip(ts, vs)) / var
    icpt = mv - slope * mt
    return Series(s.name + "_residual",
                  [(t, v - (slope * t + icpt)) for t, v in zip(s.times, vs)])


def writer_trail(traj: Sequence[int], k: int) -> list[tuple[int, int]]:
    """The last ``k`` writer transitions as (from, to) arrows."""
    if k > len(traj) - 1:
        raise ValueError("trail longer than trajectory")
    if k <= 0:
        return []
    tail = traj[-(k + 1):]
    return list(zip(tail, tail[1:]))


# -- distances -------------------------------------------------------------------

def adjacency(G) -> list[list[int]]:
    """Neighbour lists; a trinet lists red, blue, green neighbours in order."""
    if isinstance(G, ColoredTrinet):
        nbr = G.nbr
        return [nbr[3 * v:3 * v + 3] for v in range(G.n)]
    return [list(x) for x in G]


def bfs_distances(G, v: int) -> list[int]:
    """Hop distance from ``v`` to every vertex; -1 where unreachable."""
    adj = adjacency(G)
    dist = [-1] * len(adj)
    dist[v] = 0
    q = deque([v])
    while q:
        u = q.popleft()
        for x in adj[u]:
            if dist[x] < 0:
                dist[x] = dist[u] + 1
                q.append(x)
    return dist


def distance_matrix(G) -> np.ndarray:
    adj = adjacency(G)
    n = len(adj)
    rows = [u for u, xs in enumerate(adj) for _ in xs]
    cols = [x for xs in adj for x in xs]
    A = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    D = shortest_path(A, method="D", unweighted=True)
    if np.isinf(D).any():
        raise Disconnected("graph is not connected")
    return D.astype(np.int64)


def diameter(G, chunk: int = 256) -> int:
    adj = adjacency(G)
    n = len(adj)
    rows = [u for u, xs in enumerate(adj) for _ in xs]
    cols = [x for xs in adj for x in xs]
    A = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    best = 0
    for lo in range(0, n, chunk):
        D = shortest_path(A, method="D", unweighted=True, indices=range(lo, min(n, lo + chunk)))
        if np.isinf(D).any():
            raise Disconnected("graph is not connected")
        best = max(best, int(D.max()))
    return best


def shell_sizes(G, v: int) -> list[int]:
    """Number of vertices at each distance 0, 1, 2, ... from ``v``."""
    dist = bfs_distances(G, v)
    if min(dist) < 0:
        raise Disconnected("graph is not connected")
    out = [0] * (max(dist) + 1)
    for d in dist:
        out[d] += 1
    return out


def shell_dimension(G, v: int, dia: int | None = None) -> float:
    """Dimension d with shell sizes growing like k^(d-1) around ``v``.

    d is one more than the least-squares slope of log shell size against
    log k over k in [2, dia // 2]; a line gives 1, a grid 2.
    """
    if dia is None:
        dia = diameter(G)
    if dia < 4:
        raise TooSmall(f"diameter {dia} is below 4")
    shells = shell_sizes(G, v)
    ks = [k for k in range(2, dia // 2 + 1) if k < len(shells) and shells[k] > 0]
    if len(ks) < 2:
        raise TooSmall("fewer than two shells in the fit range")
    x = np.log(ks)
    y = np.log([shells[k] for k in ks])
    slope, _ = np.polyfit(x, y, 1)
    return 1.0 + float(slope)


# -- Gromov hyperbolicity --------------------------------------------------------

def geodesic_sets(D: np.ndarray) -> callable:
    """Return ``between(i, j)``: all vertices on some shortest i-j path."""
    cache: dict = {}

    def between(i: int, j: int) -> np.ndarray:
        key = (i, j) if i < j else (j, i)
        s = cache.get(key)
        if s is None:
            s = np.flatnonzero(D[i] + D[j] == D[i, j])
            cache[key] = s
        return s
    return between


def bfs_paths(G) -> callable:
    """Return ``path(i, j)``: one shortest path, tie-broken by red < blue < green."""
    adj = adjacency(G)
    parents: dict = {}

    def tree(root: int) -> list[int]:
        par = parents.get(root)
        if par is None:
            par = [-1] * len(adj)
            par[root] = root
            q = deque([root])
            while q:
                u = q.popleft()
                for x in adj[u]:
                    if par[x] < 0:
                        par[x] = u
                        q.append(x)
            parents[root] = par
        return par

    def path(i: int, j: int) -> np.ndarray:
        par = tree(i)
        out = [j]
        while out[-1] != i:
            out.append(par[out[-1]])
        return np.array(out, dtype=np.int64)
    return path


def _triangle_min(D: np.ndarray, X, Y, Z) -> int:
    dxy = D[np.ix_(X, Y)]
    dyz = D[np.ix_(Y, Z)]
    dzx = D[np.ix_(Z, X)]
    total = dxy[:, :, None] + dyz[None, :, :] + dzx.T[:, None, :]
    return int(total.min())


def gromov_delta(G, variant: str = "geodesic-sets", limit: int = DELTA_LIMIT,
                 D: np.ndarray | None = None) -> int:
    """Largest triangle thinness: over triples a, b, c, the least perimeter
    d(x,y)+d(y,z)+d(z,x) with x between b and c, y between a and c, z between a and b.

    ``variant`` picks "between" as every geodesic vertex ("geodesic-sets") or
    the vertices of one BFS path ("single-path").
    """
    n = len(adjacency(G))
    if n > limit:
        raise TooLarge(f"{n} vertices exceeds the limit {limit}")
    if D is None:
        D = distance_matrix(G)
    if variant == "geodesic-sets":
        between = geodesic_sets(D)
    elif variant == "single-path":
        between = bfs_paths(G)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    best = 0
    for a, b, c in combinations(range(n), 3):
        # x = y = c, z = a is always feasible, so the value is at most this
        if 2 * min(D[a, b], D[b, c], D[a, c]) <= best:
            continue
        v = _triangle_min(D, between(b, c), between(a, c), between(a, b))
        if v > best:
            best = v
    return best


@dataclass
class HyperbolicityReport:
    delta: int
    diameter: int
    ratio: Fraction
    is_scaled_hyperbolic: bool
    variant: str


def scaled_hyperbolic(G, variant: str = "geodesic-sets",
                      limit: int = DELTA_LIMIT) -> HyperbolicityReport:
    n = len(adjacency(G))
    if n > limit:
        raise TooLarge(f"{n} vertices exceeds the limit {limit}")
    D = distance_matrix(G)
    dia = int(D.max())
    delta = gromov_delta(G, variant, limit, D)
    ratio = Fraction(delta, dia) if dia else Fraction(0)
    return HyperbolicityReport(delta, dia, ratio, ratio < Fraction(3, 2), variant)

