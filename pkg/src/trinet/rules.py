"""Rules, the canonical 3888-rule space, and the rule DSL.

DSL (whitespace-insensitive)::

    rule   := clause (";" clause)*
    clause := type "->" action          type := "0" | "r" | "b" | "g"
    action := "none" | [rewrite] "move" word
    word   := color color?              color := "r" | "b" | "g"

``rewrite`` is ``keep`` (the default) or ``replace``. Generalized rules may
also use ``shrink`` and ``exchange(<word>,<word>)``, and longer move words
when the parser is given a larger ``max_word``.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .core import COLOR_CHARS, format_word

TYPE_SYMBOLS = "0rbg"
DEFAULT_MAX_WORD = 2


class RuleParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class RuleSyntaxError(RuleParseError):
    pass


class RuleSemanticError(RuleParseError):
    pass


class BadTable(ValueError):
    pass


@dataclass(frozen=True)
class RewriteOp:
    kind: str  # keep | replace | shrink | exchange
    selectors: tuple = ()

    def __str__(self) -> str:
        if self.kind == "exchange":
            return "exchange(%s,%s)" % tuple(format_word(w) for w in self.selectors)
        return self.kind


KEEP = RewriteOp("keep")
REPLACE = RewriteOp("replace")
SHRINK = RewriteOp("shrink")


@dataclass(frozen=True)
class Action:
    rewrite: RewriteOp
    move: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.rewrite} move {format_word(self.move)}"

    def sort_key(self):
        return ({"keep": 0, "replace": 1, "shrink": 2, "exchange": 3}[self.rewrite.kind],
                self.move, self.rewrite.selectors)


@dataclass(frozen=True)
class Rule:
    """Action per surroundings type, indexed 0 (none), 1 (r), 2 (b), 3 (g).

    ``None`` means no action.
    """

    actions: tuple

    def __post_init__(self):
        if len(self.actions) != 4:
            raise ValueError("a rule has exactly four entries")

    def __str__(self) -> str:
        return format_rule(self)

    def action(self, type_symbol: str):
        return self.actions[TYPE_SYMBOLS.index(type_symbol)]

    def is_canonical(self, max_word: int = DEFAULT_MAX_WORD) -> bool:
        a0, ar, ab, ag = self.actions
        if ag is not None or a0 is None or a0.rewrite.kind != "replace":
            return False
        for a in (a0, ar, ab):
            if a is None:
                continue
            if a.rewrite.kind not in ("keep", "replace") or len(a.move) > max_word:
                return False
        return True

    def active_actions(self):
        """Actions that change the graph or move the writer somewhere."""
        for code, a in enumerate(self.actions):
            if a is None:
                continue
            if a.rewrite.kind == "keep" and _word_is_trivial(a.move):
                continue
            yield code, a


def _word_is_trivial(word) -> bool:
    # a word that returns to its start on every properly colored cubic graph
    stack = []
    for c in word:
        if stack and stack[-1] == c:
            stack.pop()
        else:
            stack.append(c)
    return not stack


# -- DSL -----------------------------------------------------------------

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, n: int = 1) -> str:
        self.skip()
        return self.text[self.pos:self.pos + n]

    def eat(self, token: str) -> bool:
        if self.peek(len(token)) == token:
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.eat(token):
            raise RuleSyntaxError(f"expected {token!r}", self.pos)

    def keyword(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start:self.pos]

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)


def _parse_word(sc: _Scanner, max_word: int) -> tuple[int, ...]:
    sc.skip()
    start = sc.pos
    word = []
    while sc.pos < len(sc.text) and sc.text[sc.pos] in COLOR_CHARS:
        if len(word) == max_word:
            raise RuleSyntaxError(f"move word longer than {max_word}", sc.pos)
        word.append(COLOR_CHARS.index(sc.text[sc.pos]))
        sc.pos += 1
    if sc.pos < len(sc.text) and sc.text[sc.pos].isalpha():
        raise RuleSyntaxError(f"unexpected character {sc.text[sc.pos]!r} in move word", sc.pos)
    if not word:
        raise RuleSyntaxError("expected a color word", start)
    return tuple(word)


def _parse_action(sc: _Scanner, max_word: int):
    start = sc.pos
    kw = sc.keyword()
    if kw == "none":
        return None
    rewrite = KEEP
    if kw in ("keep", "replace", "shrink"):
        rewrite = RewriteOp(kw)
        sc.skip()
        start = sc.pos
        kw = sc.keyword()
    elif kw == "exchange":
        sc.expect("(")
        w1 = _parse_word(sc, 1 << 30)
        sc.expect(",")
        w2 = _parse_word(sc, 1 << 30)
        sc.expect(")")
        rewrite = RewriteOp("exchange", (w1, w2))
        sc.skip()
        start = sc.pos
        kw = sc.keyword()
    if kw != "move":
        raise RuleSyntaxError(f"expected 'move', got {kw!r}", start)
    return Action(rewrite, _parse_word(sc, max_word))


def parse_action(text: str, max_word: int = DEFAULT_MAX_WORD):
    sc = _Scanner(text)
    action = _parse_action(sc, max_word)
    if not sc.at_end():
        raise RuleSyntaxError("trailing input", sc.pos)
    return action


def parse_rule(text: str, max_word: int = DEFAULT_MAX_WORD) -> Rule:
    """Parse the DSL; omitted types default to ``none``."""
    sc = _Scanner(text)
    actions: list = [None] * 4
    seen = set()
    while True:
        sc.skip()
        pos = sc.pos
        sym = sc.peek()
        if not sym or sym not in TYPE_SYMBOLS:
            raise RuleSyntaxError("expected a surroundings type (0, r, b, g)", pos)
        sc.pos += 1
        if sym in seen:
            raise RuleSemanticError(f"duplicate clause for type {sym!r}", pos)
        seen.add(sym)
        sc.expect("->")
        actions[TYPE_SYMBOLS.index(sym)] = _parse_action(sc, max_word)
        if sc.at_end():
            break
        sc.expect(";")
        if sc.at_end():
            break
    return Rule(tuple(actions))


def format_action(action) -> str:
    return "none" if action is None else str(action)


def format_rule(rule: Rule) -> str:
    return "; ".join(f"{s} -> {format_action(a)}" for s, a in zip(TYPE_SYMBOLS, rule.actions))


# -- color conjugation ---------------------------------------------------

_SWAP_RB = (1, 0, 2)


def _swap_word(word, perm=_SWAP_RB):
    return tuple(perm[c] for c in word)


def conjugate_action(action, perm=_SWAP_RB):
    if action is None:
        return None
    op = action.rewrite
    if op.kind == "exchange":
        op = RewriteOp("exchange", tuple(_swap_word(w, perm) for w in op.selectors))
    return Action(op, _swap_word(action.move, perm))


def conjugate_rule(rule: Rule) -> Rule:
    """Swap the roles of red and blue everywhere (an involution)."""
    a0, ar, ab, ag = rule.actions
    return Rule((conjugate_action(a0), conjugate_action(ab), conjugate_action(ar),
                 conjugate_action(ag)))


def conjugate_graph(G):
    """The same graph with red and blue edge colors exchanged."""
    from .core import ColoredTrinet

    nbr = G.nbr
    out = [0] * len(nbr)
    for v in range(G.n):
        i = 3 * v
        out[i], out[i + 1], out[i + 2] = nbr[i + 1], nbr[i], nbr[i + 2]
    return ColoredTrinet(out)


# -- option table and enumeration ----------------------------------------

RADIX = (12, 18, 18)
SPACE_SIZE = RADIX[0] * RADIX[1] * RADIX[2]


@dataclass(frozen=True)
class OptionTable:
    type0: tuple
    typeR: tuple
    typeB: tuple

    def __post_init__(self):
        for name, opts, size in (("type0", self.type0, 12), ("typeR", self.typeR, 18),
                                 ("typeB", self.typeB, 18)):
            if len(opts) != size:
                raise BadTable(f"{name} needs {size} options, got {len(opts)}")
            if len(set(opts)) != len(opts):
                raise BadTable(f"{name} has duplicate options")

    def to_text(self) -> str:
        lines = []
        for header, opts in (("[type0]", self.type0), ("[typeR]", self.typeR),
                             ("[typeB]", self.typeB)):
            lines.append(header)
            lines.extend(format_action(a) for a in opts)
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    @classmethod
    def from_text(cls, text: str) -> "OptionTable":
        sections: dict[str, list] = {}
        current = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("["):
                current = line.strip("[]").strip()
                if current not in ("type0", "typeR", "typeB"):
                    raise BadTable(f"line {lineno}: unknown section {line}")
                sections.setdefault(current, [])
                continue
            if current is None:
                raise BadTable(f"line {lineno}: option outside a section")
            try:
                sections[current].append(parse_action(line))
            except RuleParseError as exc:
                raise BadTable(f"line {lineno}: {exc}") from None
        return cls(tuple(sections.get("type0", ())), tuple(sections.get("typeR", ())),
                   tuple(sections.get("typeB", ())))

    @classmethod
    def load(cls, path) -> "OptionTable":
        return cls.from_text(Path(path).read_text())


def _words(lengths):
    out = []
    for k in lengths:
        out.extend(itertools.product(range(3), repeat=k))
    return sorted(out)


def word_product_table() -> OptionTable:
    """Expand with every 1- or 2-letter word for type 0; keep/expand with every
    2-letter word for types r and b. Several entries coincide in effect."""
    type0 = tuple(Action(REPLACE, w) for w in _words((1, 2)))
    rb = tuple(sorted((Action(op, w) for op in (KEEP, REPLACE) for w in _words((2,))),
                      key=Action.sort_key))
    return OptionTable(type0, rb, rb)


def _distinct_moves(interlink: int) -> list[tuple[int, ...]]:
    # two-letter words whose destination differs from every shorter word when
    # the writer's neighbors are joined by an ``interlink``-colored edge
    out = []
    for w in _words((2,)):
        x, y = w
        if x == y:
            continue
        # v[x][y] is v[z] when the edge of color y at v[x] is the interlink
        # towards the neighbor v[z]; this happens exactly when y == interlink
        if y == interlink:
            continue
        out.append(w)
    return out


def destination_table() -> OptionTable:
    """One option per distinct writer destination within two steps.

    Type 0: expand, then move along any 1- or 2-letter word (12). Types r and
    b: no action, or keep with one of the 7 moves that reach distinct
    vertices, or expand with one of 10 moves (the 7 plus the three corners
    reached by cc), 18 in all.
    """
    type0 = tuple(Action(REPLACE, w) for w in _words((1, 2)))

    def side(interlink):
        moves = _words((1,)) + _distinct_moves(interlink)
        keep = [Action(KEEP, w) for w in moves]
        corners = [(c, c) for c in range(3)]
        rep = [Action(REPLACE, w) for w in moves + corners]
        return tuple([None] + sorted(keep, key=Action.sort_key) + sorted(rep, key=Action.sort_key))

    return OptionTable(type0, side(0), side(1))


DEFAULT_TABLE = destination_table()


def decode(rule_id: int, table: OptionTable = DEFAULT_TABLE) -> Rule:
    if not 0 <= rule_id < SPACE_SIZE:
        raise ValueError(f"rule id {rule_id} outside 0..{SPACE_SIZE - 1}")
    i0, rest = divmod(rule_id, RADIX[1] * RADIX[2])
    ir, ib = divmod(rest, RADIX[2])
    return Rule((table.type0[i0], table.typeR[ir], table.typeB[ib], None))


def encode(rule: Rule, table: OptionTable = DEFAULT_TABLE) -> int:
    a0, ar, ab, ag = rule.actions
    if ag is not None:
        raise ValueError("rule acts on green surroundings; it is not in the canonical space")
    try:
        return (table.type0.index(a0) * RADIX[1] + table.typeR.index(ar)) * RADIX[2] \
            + table.typeB.index(ab)
    except ValueError:
        raise ValueError(f"rule not in option table: {format_rule(rule)}") from None


def enumerate_space(table: OptionTable = DEFAULT_TABLE) -> Iterator[tuple[int, Rule]]:
    for rule_id in range(SPACE_SIZE):
        yield rule_id, decode(rule_id, table)


def resolve_rule(spec: str | int, table: OptionTable = DEFAULT_TABLE) -> Rule:
    """A rule id, or DSL text."""
    if isinstance(spec, int) or str(spec).strip().isdigit():
        return decode(int(spec), table)
    return parse_rule(str(spec))
