"""Named rules with notable behavior from the cube, each found by its property.

Ids refer to the default option table; generalized rules outside it have
id -1. Every entry states what a run from the axis-colored cube shows, so
the catalog doubles as a regression list.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rules import Rule, decode, parse_rule
from .worddyn import DOUBLE_HOP_RULE, GOLDEN_RULE


@dataclass(frozen=True)
class Entry:
    name: str
    rule_id: int
    text: str | None  # DSL form when it differs from the table entry
    note: str

    @property
    def rule(self) -> Rule:
        return parse_rule(self.text) if self.text else decode(self.rule_id)


CATALOG = {e.name: e for e in (
    Entry("quick-halt", 36, None,
          "halts on a green link after three updates, 12 vertices"),
    Entry("largest-static", 212, None,
          "largest static network: halts with 56 vertices after 24 updates"),
    Entry("longest-static", 3207, None,
          "longest road to a static network: 52 vertices after 33 updates, writer period 2"),
    Entry("period-one", 1957, None,
          "writer type b on every step after the first; period 1 growth, 8 + 2t vertices"),
    Entry("double-hop", 663, DOUBLE_HOP_RULE,
          "expands and hops red then blue; cyclic track, 8 + 2t vertices"),
    Entry("golden", 768, GOLDEN_RULE,
          "cyclic track whose vertex counts follow floor(n phi)"),
    Entry("bounce", 2950, None,
          "writer bounces along a red/green track that grows on every traversal"),
    Entry("breathing", -1, "0 -> replace move bb; r -> shrink move rb; b -> replace move rr",
          "generalized rule whose network cycles through 8, 10, 12, 10 vertices"),
    Entry("long-transient", 3211, None,
          "period 454 growth after a transient of a few thousand steps"),
    Entry("longer-transient", 3213, None,
          "period 1355 growth after a transient of several thousand steps"),
)}


def named_rule(name: str) -> Rule:
    try:
        return CATALOG[name].rule
    except KeyError:
        raise KeyError(f"no catalog rule named {name!r}; known: {', '.join(CATALOG)}") from None
