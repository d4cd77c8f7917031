"""Edge-3-colored cubic graphs, local rewrites and writer stepping.

A graph is stored as one flat list ``nbr`` of length ``3 * n``:
``nbr[3 * v + c]`` is the neighbor of ``v`` across its edge of color ``c``.
Colors are the integers 0, 1, 2 (red, blue, green); that order is used for
every deterministic tie-break in the package.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator, Sequence

RED, BLUE, GREEN = 0, 1, 2
COLOR_CHARS = "rbg"


class Color(IntEnum):
    RED = 0
    BLUE = 1
    GREEN = 2

    @property
    def char(self) -> str:
        return COLOR_CHARS[self]

    @classmethod
    def parse(cls, ch: str) -> "Color":
        try:
            return cls(COLOR_CHARS.index(ch))
        except ValueError:
            raise ValueError(f"not a color: {ch!r}") from None


class SurroundingsType(IntEnum):
    """Type of a vertex: NONE, or the color of its single neighbor interlink."""

    NONE = 0
    RED = 1
    BLUE = 2
    GREEN = 3

    @property
    def symbol(self) -> str:
        return "0rbg"[self]

    @classmethod
    def parse(cls, s: str) -> "SurroundingsType":
        try:
            return cls("0rbg".index(s))
        except ValueError:
            raise ValueError(f"not a surroundings type: {s!r}") from None


# Code returned by the fast type computation when two or more neighbor pairs
# are interlinked, or two neighbors coincide.
MULTI = 4


class TrinetError(Exception):
    pass


class MultiLinked(TrinetError):
    pass


class NotATriangle(TrinetError):
    pass


class DegenerateExternal(TrinetError):
    pass


class ColorMismatch(TrinetError):
    pass


class WouldSelfLoop(TrinetError):
    pass


class SameEdge(TrinetError):
    pass


class InvalidTrinet(TrinetError):
    pass


def parse_word(text: str) -> tuple[int, ...]:
    return tuple(COLOR_CHARS.index(ch) for ch in text)


def format_word(word: Iterable[int]) -> str:
    return "".join(COLOR_CHARS[c] for c in word)


class ColoredTrinet:
    """A properly edge-3-colored cubic graph on dense vertex ids ``0..n-1``."""

    __slots__ = ("nbr",)

    def __init__(self, nbr: Sequence[int]):
        self.nbr = list(nbr)
        if len(self.nbr) % 3:
            raise InvalidTrinet("neighbor table length must be a multiple of 3")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "ColoredTrinet":
        nbr = [-1] * (3 * n)
        for u, v, c in edges:
            for x, y in ((u, v), (v, u)):
                if not 0 <= x < n:
                    raise InvalidTrinet(f"vertex {x} out of range")
                if nbr[3 * x + c] != -1:
                    raise InvalidTrinet(f"vertex {x} has two {COLOR_CHARS[c]} edges")
                nbr[3 * x + c] = y
        g = cls(nbr)
        g.validate()
        return g

    @property
    def n(self) -> int:
        return len(self.nbr) // 3

    def __len__(self) -> int:
        return len(self.nbr) // 3

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ColoredTrinet) and self.nbr == other.nbr

    def __repr__(self) -> str:
        return f"ColoredTrinet(n={self.n})"

    def copy(self) -> "ColoredTrinet":
        return ColoredTrinet(self.nbr)

    def neighbor(self, v: int, c: int) -> int:
        return self.nbr[3 * v + c]

    def neighbors(self, v: int) -> tuple[int, int, int]:
        i = 3 * v
        return self.nbr[i], self.nbr[i + 1], self.nbr[i + 2]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Each edge once as ``(u, v, color)`` with ``u < v``, ordered by ``u`` then color."""
        nbr = self.nbr
        for u in range(self.n):
            for c in range(3):
                v = nbr[3 * u + c]
                if u < v:
                    yield u, v, c

    def validate(self) -> None:
        nbr = self.nbr
        n = self.n
        for v in range(n):
            for c in range(3):
                u = nbr[3 * v + c]
                if not 0 <= u < n:
                    raise InvalidTrinet(f"vertex {v} has no valid {COLOR_CHARS[c]} neighbor")
                if u == v:
                    raise InvalidTrinet(f"self-loop at {v}")
                if nbr[3 * u + c] != v:
                    raise InvalidTrinet(f"{COLOR_CHARS[c]} edge {v}-{u} is not symmetric")

    # -- in-place rewrites -------------------------------------------------

    def _expand(self, p: int) -> None:
        nbr = self.nbr
        L = len(nbr) // 3
        i = 3 * p
        ab = nbr[i + 1]
        ag = nbr[i + 2]
        tg, tb = L, L + 1
        # t_r keeps index p and its red edge
        nbr[i + 1] = tg
        nbr[i + 2] = tb
        nbr.extend((tb, p, ag, tg, ab, p))
        nbr[3 * ag + 2] = tg
        nbr[3 * ab + 1] = tb

    def _triangle_of(self, p: int) -> tuple[int, int, int]:
        nbr = self.nbr
        tri = None
        a, b, c = nbr[3 * p], nbr[3 * p + 1], nbr[3 * p + 2]
        for x, y in ((a, b), (a, c), (b, c)):
            if x != y and y in nbr[3 * x:3 * x + 3]:
                if tri is not None:
                    raise NotATriangle(f"vertex {p} lies on more than one triangle")
                tri = (p, x, y)
        if tri is None:
            raise NotATriangle(f"vertex {p} is not on a 3-cycle")
        return tri

    def _shrink(self, p: int) -> list[int]:
        """Shrink the triangle through ``p``; returns the old->new index map."""
        nbr = self.nbr
        tri = self._triangle_of(p)
        members = set(tri)
        external = []
        for v in tri:
            for c in range(3):
                u = nbr[3 * v + c]
                if u not in members:
                    external.append((c, u))
        colors = sorted(c for c, _ in external)
        ends = {u for _, u in external}
        if colors != [0, 1, 2] or len(ends) != 3:
            raise DegenerateExternal(f"triangle {sorted(tri)} has no three distinct external ends")
        keep = min(tri)
        removed = sorted(members - {keep})
        n = len(nbr) // 3
        remap = list(range(n))
        shift = 0
        for v in range(n):
            if shift < 2 and v == removed[shift]:
                shift += 1
                remap[v] = -1
            else:
                remap[v] = v - shift
        remap[removed[0]] = remap[keep]
        remap[removed[1]] = remap[keep]
        for c, u in external:
            nbr[3 * keep + c] = u
            nbr[3 * u + c] = keep
        new = [0] * (3 * (n - 2))
        for v in range(n):
            if v == removed[0] or v == removed[1]:
                continue
            j = 3 * remap[v]
            i = 3 * v
            new[j] = remap[nbr[i]]
            new[j + 1] = remap[nbr[i + 1]]
            new[j + 2] = remap[nbr[i + 2]]
        self.nbr = new
        return remap

    def _exchange(self, a: int, b: int, x: int, y: int, c: int) -> None:
        nbr = self.nbr
        if nbr[3 * a + c] != b or nbr[3 * x + c] != y:
            raise ColorMismatch("selected edges do not share the requested color")
        if {a, b} == {x, y}:
            raise SameEdge("exchange needs two distinct edges")
        if a == x or b == y:
            raise WouldSelfLoop("exchange would create a self-loop")
        nbr[3 * a + c] = x
        nbr[3 * x + c] = a
        nbr[3 * b + c] = y
        nbr[3 * y + c] = b


def walk(G: ColoredTrinet, v: int, word: Iterable[int]) -> int:
    nbr = G.nbr
    for c in word:
        v = nbr[3 * v + c]
    return v


def type_code(nbr: list[int], v: int) -> int:
    """Surroundings type of ``v`` as 0..3, or ``MULTI``.

    The red neighbor can only reach the blue neighbor by green, and so on,
    so one lookup per pair suffices.
    """
    i = 3 * v
    a = nbr[i]
    b = nbr[i + 1]
    c = nbr[i + 2]
    if a == b or a == c or b == c:
        return MULTI
    ab = nbr[3 * a + 2] == b
    ac = nbr[3 * a + 1] == c
    bc = nbr[3 * b] == c
    k = ab + ac + bc
    if k == 0:
        return 0
    if k > 1:
        return MULTI
    return 3 if ab else (2 if ac else 1)


def surroundings_type(G: ColoredTrinet, v: int) -> SurroundingsType:
    code = type_code(G.nbr, v)
    if code == MULTI:
        raise MultiLinked(f"vertex {v} has more than one interlinked neighbor pair")
    return SurroundingsType(code)


def triangle_expand(G: ColoredTrinet, p: int) -> ColoredTrinet:
    """Replace ``p`` by a triangle; t_r keeps index ``p``, t_g and t_b are appended."""
    H = G.copy()
    H._expand(p)
    return H


def triangle_shrink(G: ColoredTrinet, p: int) -> ColoredTrinet:
    H = G.copy()
    H._shrink(p)
    return H


def edge_endpoints(G: ColoredTrinet, v: int, word: Sequence[int]) -> tuple[int, int, int]:
    """Resolve an edge selector: the last color of ``word`` taken from ``v[word[:-1]]``."""
    if not word:
        raise ValueError("edge selector needs a non-empty word")
    a = walk(G, v, word[:-1])
    c = word[-1]
    return a, G.nbr[3 * a + c], c


def edge_exchange(G: ColoredTrinet, e1: tuple[int, Sequence[int]],
                  e2: tuple[int, Sequence[int]]) -> ColoredTrinet:
    """Swap endpoints of two same-colored edges: {a,b},{x,y} -> {a,x},{b,y}."""
    a, b, c1 = edge_endpoints(G, *e1)
    x, y, c2 = edge_endpoints(G, *e2)
    if c1 != c2:
        raise ColorMismatch(f"edge colors differ: {COLOR_CHARS[c1]} vs {COLOR_CHARS[c2]}")
    H = G.copy()
    H._exchange(a, b, x, y, c1)
    return H


def make_cube() -> ColoredTrinet:
    """Q3 on bit-triples ``v = x + 2y + 4z``; red/blue/green edges flip x/y/z."""
    return ColoredTrinet([v ^ (1 << c) for v in range(8) for c in range(3)])


def make_k33() -> ColoredTrinet:
    """K33 with a_i = i and b_j = 3 + j; edge (a_i, b_j) has color (i + j) mod 3."""
    nbr = [0] * 18
    for i in range(3):
        for j in range(3):
            c = (i + j) % 3
            nbr[3 * i + c] = 3 + j
            nbr[3 * (3 + j) + c] = i
    return ColoredTrinet(nbr)


INITIAL_GRAPHS = {"cube": make_cube, "k33": make_k33}


# -- isomorphism -----------------------------------------------------------

def canonical_form(G: ColoredTrinet, root: int, radius: int | None = None) -> bytes:
    """Color-ordered BFS encoding from ``root``.

    With ``radius`` the encoding covers the subgraph induced on the ball of
    that radius. Equal encodings iff a color-preserving isomorphism maps one
    root to the other (in a properly colored cubic graph the map is forced).
    """
    nbr = G.nbr
    label = {root: 0}
    order = [root]
    out = array("i")
    depth = {root: 0} if radius is not None else None
    k = 0
    while k < len(order):
        v = order[k]
        k += 1
        grow = radius is None or depth[v] < radius
        i = 3 * v
        for c in range(3):
            u = nbr[i + c]
            lu = label.get(u)
            if lu is None:
                if grow:
                    lu = len(order)
                    label[u] = lu
                    order.append(u)
                    if depth is not None:
                        depth[u] = depth[v] + 1
                else:
                    lu = -1
            out.append(lu)
    return out.tobytes()


def _forced_map(n1: list[int], r1: int, n2: list[int], r2: int, size: int) -> dict | None:
    m12 = {r1: r2}
    m21 = {r2: r1}
    stack = [r1]
    while stack:
        v = stack.pop()
        w = m12[v]
        i, j = 3 * v, 3 * w
        for c in range(3):
            a = n1[i + c]
            b = n2[j + c]
            ma = m12.get(a)
            if ma is None:
                if b in m21:
                    return None
                m12[a] = b
                m21[b] = a
                stack.append(a)
            elif ma != b:
                return None
    return m12 if len(m12) == size else None


def _forced_match(n1: list[int], r1: int, n2: list[int], r2: int, size: int) -> bool:
    return _forced_map(n1, r1, n2, r2, size) is not None


def rooted_map(G1: ColoredTrinet, w1: int, G2: ColoredTrinet, w2: int) -> list[int] | None:
    """The color-preserving isomorphism sending ``w1`` to ``w2``, as a list, if any."""
    if G1.n != G2.n:
        return None
    m = _forced_map(G1.nbr, w1, G2.nbr, w2, G1.n)
    if m is None:
        return None
    return [m[v] for v in range(G1.n)]


def rooted_iso(G1: ColoredTrinet, w1: int, G2: ColoredTrinet, w2: int) -> bool:
    if G1.n != G2.n:
        return False
    return _forced_match(G1.nbr, w1, G2.nbr, w2, G1.n)


def unrooted_iso(G1: ColoredTrinet, G2: ColoredTrinet) -> bool:
    if G1.n != G2.n:
        return False
    if G1.n == 0:
        return True
    t1 = type_code(G1.nbr, 0)
    for r2 in range(G2.n):
        if type_code(G2.nbr, r2) == t1 and _forced_match(G1.nbr, 0, G2.nbr, r2, G1.n):
            return True
    return False


def is_connected(G: ColoredTrinet) -> bool:
    if G.n == 0:
        return True
    nbr = G.nbr
    seen = bytearray(G.n)
    seen[0] = 1
    todo = [0]
    count = 1
    while todo:
        v = todo.pop()
        for u in nbr[3 * v:3 * v + 3]:
            if not seen[u]:
                seen[u] = 1
                count += 1
                todo.append(u)
    return count == G.n


# -- stepping ----------------------------------------------------------------

@dataclass
class SystemState:
    graph: ColoredTrinet
    writer: int = 0
    time: int = 0

    def copy(self) -> "SystemState":
        return SystemState(self.graph.copy(), self.writer, self.time)

    def canonical(self) -> bytes:
        return canonical_form(self.graph, self.writer)


@dataclass
class StepReport:
    action: object
    surroundings: SurroundingsType | None
    delta: int
    undefined: bool = False


def _expand_and_walk(G: ColoredTrinet, p: int, word) -> int:
    # the writer leaves p along the first color of its word, which after the
    # expansion starts from the triangle corner carrying that external edge
    L = G.n
    G._expand(p)
    if not word:
        return p
    c0 = word[0]
    v = p if c0 == 0 else (L + 1 if c0 == 1 else L)
    return walk(G, v, word)


def apply_action(G: ColoredTrinet, p: int, action) -> int:
    """Mutate ``G`` with ``action`` taken at writer ``p``; return the new writer.

    Keep, shrink and exchange move the writer on the pre-rewrite graph. An
    expansion first replaces ``p`` with its triangle; the writer then exits
    through the corner owning the first color of the move word, so a word
    ``cc`` ends on the corner t_c.
    """
    op = action.rewrite
    kind = op.kind
    if kind == "keep":
        return walk(G, p, action.move)
    if kind == "replace":
        return _expand_and_walk(G, p, action.move)
    dest = walk(G, p, action.move)
    if kind == "shrink":
        remap = G._shrink(p)
        return remap[dest]
    if kind == "exchange":
        (w1, w2) = op.selectors
        a, b, c1 = edge_endpoints(G, p, w1)
        x, y, c2 = edge_endpoints(G, p, w2)
        if c1 != c2:
            raise ColorMismatch("exchange selectors name edges of different colors")
        G._exchange(a, b, x, y, c1)
        return dest
    raise ValueError(f"unknown rewrite {kind!r}")


def step(state: SystemState, rule) -> tuple[SystemState, StepReport]:
    """One update of ``state`` under ``rule``; the input state is not modified."""
    G = state.graph
    code = type_code(G.nbr, state.writer)
    if code == MULTI:
        return (SystemState(G.copy(), state.writer, state.time + 1),
                StepReport(None, None, 0, undefined=True))
    kind = SurroundingsType(code)
    action = rule.actions[code]
    H = G.copy()
    if action is None:
        return SystemState(H, state.writer, state.time + 1), StepReport(None, kind, 0)
    writer = apply_action(H, state.writer, action)
    return (SystemState(H, writer, state.time + 1),
            StepReport(action, kind, H.n - G.n))


class Simulator:
    """Mutable fast-path evolution of one state under one rule.

    ``born[v]`` is the time step at which the current vertex ``v`` first
    existed; a vertex rebuilt by a rewrite counts as new.
    ``types`` records the observed type code (or ``MULTI``) of each update.
    """

    def __init__(self, rule, graph: ColoredTrinet, writer: int = 0, time: int = 0,
                 track_births: bool = True, record_types: bool = True):
        self.rule = rule
        self.graph = graph
        self.writer = writer
        self.time = time
        self.track_births = track_births
        self.born = [0] * graph.n if track_births else None
        self.types = bytearray() if record_types else None
        self.anomalies = 0
        self.changes = 0
        self.last_change = time
        self._fast = all(a is None or a.rewrite.kind in ("keep", "replace") for a in rule.actions)
        self._table = tuple(
            None if a is None else (a.rewrite.kind == "replace", tuple(a.move))
            for a in rule.actions
        )

    @classmethod
    def from_state(cls, rule, state: SystemState, **kw) -> "Simulator":
        return cls(rule, state.graph.copy(), state.writer, state.time, **kw)

    def state(self) -> SystemState:
        return SystemState(self.graph.copy(), self.writer, self.time)

    def clone(self) -> "Simulator":
        other = Simulator.__new__(Simulator)
        other.__dict__.update(self.__dict__)
        other.graph = self.graph.copy()
        other.born = None if self.born is None else list(self.born)
        other.types = None if self.types is None else bytearray(self.types)
        return other

    @property
    def n(self) -> int:
        return len(self.graph.nbr) // 3

    def is_halted(self) -> bool:
        """True when the next update would change neither graph nor writer."""
        nbr = self.graph.nbr
        code = type_code(nbr, self.writer)
        if code == MULTI:
            return True
        entry = self._table[code]
        if entry is None:
            return True
        expand, word = entry
        if expand or self.rule.actions[code].rewrite.kind != "keep":
            return False
        v = self.writer
        for c in word:
            v = nbr[3 * v + c]
        return v == self.writer

    def advance(self, steps: int, max_vertices: int | None = None, on_step=None) -> int:
        """Run up to ``steps`` updates; returns the number performed.

        Stops early when the vertex budget would be exceeded. ``on_step`` is
        called as ``on_step(sim, code, p)`` after every update, where ``p`` is
        the writer position before the update.
        """
        if not self._fast or on_step is not None:
            return self._advance_generic(steps, max_vertices, on_step)
        G = self.graph
        nbr = G.nbr
        table = self._table
        w = self.writer
        t = self.time
        born = self.born
        types = self.types
        cap = max_vertices if max_vertices is not None else 1 << 62
        n = len(nbr) // 3
        done = 0
        changes = self.changes
        last_change = self.last_change
        anomalies = self.anomalies
        while done < steps:
            i = 3 * w
            a = nbr[i]
            b = nbr[i + 1]
            c = nbr[i + 2]
            if a == b or a == c or b == c:
                code = MULTI
            else:
                ab = nbr[3 * a + 2] == b
                ac = nbr[3 * a + 1] == c
                bc = nbr[3 * b] == c
                k = ab + ac + bc
                if k == 0:
                    code = 0
                elif k > 1:
                    code = MULTI
                else:
                    code = 3 if ab else (2 if ac else 1)
            if code == MULTI:
                anomalies += 1
                entry = None
            else:
                entry = table[code]
            if entry is not None:
                expand, word = entry
                if expand and n + 2 > cap:
                    break
                p = w
                if expand:
                    # inline of ColoredTrinet._expand
                    ab_ = nbr[i + 1]
                    ag_ = nbr[i + 2]
                    nbr[i + 1] = n
                    nbr[i + 2] = n + 1
                    nbr.extend((n + 1, p, ag_, n, ab_, p))
                    nbr[3 * ag_ + 2] = n
                    nbr[3 * ab_ + 1] = n + 1
                    if word:
                        # leave the triangle through the corner owning the first color
                        c0 = word[0]
                        w = p if c0 == 0 else (n + 1 if c0 == 1 else n)
                        for col in word:
                            w = nbr[3 * w + col]
                    n += 2
                    if born is not None:
                        born[p] = t + 1
                        born.append(t + 1)
                        born.append(t + 1)
                    changes += 1
                    last_change = t + 1
                else:
                    for col in word:
                        w = nbr[3 * w + col]
            if types is not None:
                types.append(code)
            t += 1
            done += 1
        self.writer = w
        self.time = t
        self.changes = changes
        self.last_change = last_change
        self.anomalies = anomalies
        return done

    def _advance_generic(self, steps, max_vertices, on_step) -> int:
        G = self.graph
        done = 0
        cap = max_vertices if max_vertices is not None else 1 << 62
        while done < steps:
            p = self.writer
            code = type_code(G.nbr, p)
            if code == MULTI:
                self.anomalies += 1
                action = None
            else:
                action = self.rule.actions[code]
            if action is not None:
                kind = action.rewrite.kind
                if kind == "replace" and G.n + 2 > cap:
                    break
                before = list(G.nbr) if kind == "exchange" else None
                n0 = G.n
                self.writer = self._apply(action, p)
                if G.n != n0 or (before is not None and before != G.nbr):
                    self.changes += 1
                    self.last_change = self.time + 1
            if self.types is not None:
                self.types.append(code)
            self.time += 1
            done += 1
            if on_step is not None:
                on_step(self, code, p)
        return done

    def _apply(self, action, p: int) -> int:
        G = self.graph
        kind = action.rewrite.kind
        t1 = self.time + 1
        if kind == "replace":
            dest = _expand_and_walk(G, p, action.move)
            if self.born is not None:
                self.born[p] = t1
                self.born.extend((t1, t1))
            return dest
        if kind == "shrink":
            dest = walk(G, p, action.move)
            tri = G._triangle_of(p)
            remap = G._shrink(p)
            if self.born is not None:
                old = self.born
                born = [0] * G.n
                for v, nv in enumerate(remap):
                    if v not in tri:
                        born[nv] = old[v]
                born[remap[p]] = t1
                self.born = born
            return remap[dest]
        if kind == "exchange":
            dest = apply_action(G, p, action)
            return dest
        return walk(G, p, action.move)


def evolve(rule, init: ColoredTrinet | SystemState, steps: int) -> SystemState:
    state = init if isinstance(init, SystemState) else SystemState(init.copy(), 0, 0)
    sim = Simulator.from_state(rule, state, track_births=False, record_types=False)
    sim.advance(steps)
    return sim.state()
