"""Command line entry point: ``trinet <subcommand>``.

Exit codes: 0 ok, 2 bad configuration or input, 3 budget exceeded,
4 I/O error, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis, worddyn
from .catalog import CATALOG
from .classify import (Budget, ConjugateDisagreement, classify, make_record,
                       run_sweep_to_file)
from .core import INITIAL_GRAPHS, ColoredTrinet, InvalidTrinet, Simulator
from .formats import EXPORTERS, TrinetFormatError, load_trinet, write_trinet
from .rules import (DEFAULT_TABLE, SPACE_SIZE, BadTable, OptionTable, RuleParseError,
                    decode, format_rule, parse_rule)

OK, CONFIG, BUDGET, IO, VERIFY = 0, 2, 3, 4, 5

log = logging.getLogger("trinet")


class ConfigError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class RunConfig:
    rule: object
    rule_id: int | None
    init_name: str
    init: ColoredTrinet
    writer: int
    steps: int
    max_vertices: int
    series: list = field(default_factory=list)
    out_dir: Path | None = None


def parse_range(text: str) -> tuple[int, int]:
    """``a..b`` (inclusive) or a single integer ``b`` meaning ``0..b``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo, hi = 0, int(text)
    except ValueError:
        raise ConfigError(f"bad range {text!r}; expected a..b") from None
    if lo > hi or lo < 0:
        raise ConfigError(f"empty or negative range {text!r}")
    return lo, hi


def _table(args) -> OptionTable:
    if getattr(args, "option_table", None):
        return OptionTable.load(args.option_table)
    return DEFAULT_TABLE


def _rule(args, table):
    given = [x for x in (args.rule, args.rule_id, args.rule_file, args.rule_name)
             if x is not None]
    if len(given) != 1:
        raise ConfigError("give exactly one of --rule, --rule-id, --rule-file, --rule-name")
    if args.rule_name is not None:
        if args.rule_name not in CATALOG:
            raise ConfigError(f"unknown rule name {args.rule_name!r}; known: {', '.join(CATALOG)}")
        entry = CATALOG[args.rule_name]
        canonical = table == DEFAULT_TABLE and entry.rule_id >= 0
        return entry.rule, (entry.rule_id if canonical and not entry.text else None)
    if args.rule_id is not None:
        if not 0 <= args.rule_id < SPACE_SIZE:
            raise ConfigError(f"rule id must be in 0..{SPACE_SIZE - 1}")
        return decode(args.rule_id, table), args.rule_id
    text = args.rule if args.rule is not None else Path(args.rule_file).read_text()
    return parse_rule(text), None


def _init(name: str) -> tuple[ColoredTrinet, int, str]:
    if name in INITIAL_GRAPHS:
        return INITIAL_GRAPHS[name](), 0, name
    G, w = load_trinet(name)
    return G, (w or 0), Path(name).name


def _budget(args) -> Budget:
    b = Budget()
    steps = args.budget_steps if args.budget_steps is not None else b.max_steps
    verts = args.budget_vertices if args.budget_vertices is not None else b.max_vertices
    if steps <= 0 or verts <= 0:
        raise ConfigError("budgets must be positive")
    return Budget(max_steps=steps, max_vertices=verts, max_period=b.max_period,
                  max_radius=b.max_radius)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=1))


# -- subcommands -----------------------------------------------------------------

SERIES = ("vertices", "writer")


def cmd_simulate(args) -> int:
    table = _table(args)
    rule, rule_id = _rule(args, table)
    init, writer, init_name = _init(args.init)
    if args.steps < 0:
        raise ConfigError("--steps must be non-negative")
    series = [s for s in (args.series.split(",") if args.series else []) if s]
    for s in series:
        if s not in SERIES:
            raise ConfigError(f"unknown series {s!r}; choose from {', '.join(SERIES)}")
    cfg = RunConfig(rule, rule_id, init_name, init, writer, args.steps,
                    args.budget_vertices or Budget().max_vertices, series,
                    Path(args.out) if args.out else None)
    sim = Simulator(cfg.rule, cfg.init.copy(), cfg.writer, track_births=False,
                    record_types=False)
    counts = [sim.n]
    index = [sim.writer + 1]
    for _ in range(cfg.steps):
        if sim.advance(1, max_vertices=cfg.max_vertices) < 1:
            raise BudgetExceeded(f"vertex budget {cfg.max_vertices} reached at step {sim.time}")
        counts.append(sim.n)
        index.append(sim.writer + 1)
    summary = {"rule": format_rule(cfg.rule), "rule_id": cfg.rule_id, "init": cfg.init_name,
               "steps": sim.time, "vertices": sim.n, "writer": sim.writer,
               "anomalies": sim.anomalies}
    if cfg.out_dir is not None:
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        (cfg.out_dir / "final.trinet").write_text(write_trinet(sim.graph, sim.writer))
        data = {"vertices": counts, "writer": index}
        for s in cfg.series:
            pts = list(enumerate(data[s]))
            (cfg.out_dir / f"{s}.csv").write_text(analysis.Series(s, pts).to_csv())
        (cfg.out_dir / "summary.json").write_text(json.dumps(summary, sort_keys=True) + "\n")
    _emit(summary)
    return OK


def cmd_classify(args) -> int:
    table = _table(args)
    rule, rule_id = _rule(args, table)
    init, writer, init_name = _init(args.init)
    label = classify(rule, init, _budget(args), writer)
    _emit(make_record(rule_id if rule_id is not None else -1, rule, init_name, label))
    return OK


def cmd_sweep(args) -> int:
    table = _table(args)
    ids = None
    if args.ids:
        lo, hi = parse_range(args.ids)
        if hi >= SPACE_SIZE:
            raise ConfigError(f"rule ids stop at {SPACE_SIZE - 1}")
        ids = range(lo, hi + 1)
    if args.init not in INITIAL_GRAPHS:
        raise ConfigError("sweeps start from a named initial graph (cube or k33)")
    summary = run_sweep_to_file(args.out, args.manifest, args.init, _budget(args), table,
                                workers=args.workers, conjugate_dedup=args.conjugate_dedup,
                                rule_ids=ids)
    _emit(summary)
    return OK


def cmd_analyze(args) -> int:
    G, writer = load_trinet(args.graph)
    root = args.root if args.root is not None else (writer or 0)
    if not 0 <= root < G.n:
        raise ConfigError(f"root {root} out of range")
    m = args.metric
    if m == "diameter":
        out = {"diameter": analysis.diameter(G)}
    elif m == "shells":
        out = {"shells": analysis.shell_sizes(G, root)}
    elif m == "shell-dimension":
        out = {"shell_dimension": analysis.shell_dimension(G, root)}
    elif m in ("delta", "ratio"):
        variants = ["geodesic-sets", "single-path"] if args.variant == "both" else [args.variant]
        out = {}
        for v in variants:
            rep = analysis.scaled_hyperbolic(G, v, args.limit)
            out[v] = {"delta": rep.delta, "diameter": rep.diameter,
                      "ratio": f"{rep.ratio.numerator}/{rep.ratio.denominator}",
                      "ratio_value": float(rep.ratio),
                      "scaled_hyperbolic": rep.is_scaled_hyperbolic}
    else:
        raise ConfigError(f"unknown metric {m!r}")
    _emit(out)
    return OK


def cmd_export(args) -> int:
    G, writer = load_trinet(args.graph)
    text = EXPORTERS[args.format](G, writer)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def _verify_reports(which: str, args) -> list:
    if which == "theorem1":
        lo, hi = parse_range(args.n or "2..9")
        return [worddyn.theorem1_check(hi, nmin=max(lo, 2))]
    if which == "hstate":
        lo, hi = parse_range(args.t or "2..5000")
        return [worddyn.hstate_check(hi, Tmin=max(lo, 2))]
    if which == "theorem2":
        _, hi = parse_range(args.t or "0..10000")
        return [worddyn.theorem2_check(hi), worddyn.golden_rule_check(hi)]
    if which == "golden":
        _, hi = parse_range(args.i or "0..100000")
        return [worddyn.lemma6_check(hi), worddyn.rev_concat_check(hi)]
    if which == "lemmas":
        _, hi = parse_range(args.t or "0..2000")
        return [worddyn.lemma1_check(hi), worddyn.lemma2_check(hi), worddyn.lemma3_check(12),
                worddyn.lemma4_check(1000), worddyn.lemma5_check(12),
                worddyn.lemma6_check(100_000)]
    raise ConfigError(f"unknown check {which!r}")


def cmd_verify(args) -> int:
    reports = _verify_reports(args.which, args)
    for rep in reports:
        print(json.dumps(rep.record(), sort_keys=True) if args.json else str(rep))
    return OK if all(r.passed for r in reports) else VERIFY


# -- argument parsing ------------------------------------------------------------

def _rule_args(p) -> None:
    p.add_argument("--rule", help="rule in the DSL, e.g. '0 -> replace move rb'")
    p.add_argument("--rule-id", type=int, help="canonical rule id")
    p.add_argument("--rule-file", help="file holding a DSL rule")
    p.add_argument("--rule-name", help=f"catalog rule: {', '.join(CATALOG)}")
    p.add_argument("--option-table", help="option table file overriding the default")


def _budget_args(p) -> None:
    p.add_argument("--budget-steps", type=int)
    p.add_argument("--budget-vertices", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trinet", description="colored trinet automata workbench")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evolve one rule")
    _rule_args(p)
    p.add_argument("--init", default="cube", help="cube, k33 or a trinet file")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--budget-vertices", type=int)
    p.add_argument("--series", help="comma list of series to write: vertices,writer")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="classify one rule")
    _rule_args(p)
    p.add_argument("--init", default="cube")
    _budget_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="classify the rule space into a JSONL file")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest")
    p.add_argument("--init", default="cube")
    p.add_argument("--ids", help="rule id range a..b")
    p.add_argument("--workers", type=int)
    p.add_argument("--conjugate-dedup", action="store_true")
    p.add_argument("--option-table")
    _budget_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze", help="metrics of a trinet file")
    p.add_argument("graph")
    p.add_argument("--metric", default="diameter",
                   choices=["diameter", "shells", "shell-dimension", "delta", "ratio"])
    p.add_argument("--variant", default="both", choices=["geodesic-sets", "single-path", "both"])
    p.add_argument("--root", type=int)
    p.add_argument("--limit", type=int, default=analysis.DELTA_LIMIT)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check the theorems and lemmas")
    p.add_argument("which", choices=["theorem1", "theorem2", "hstate", "lemmas", "golden"])
    p.add_argument("--n")
    p.add_argument("--t")
    p.add_argument("--i")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="convert a trinet file")
    p.add_argument("graph")
    p.add_argument("--format", default="dot", choices=sorted(EXPORTERS))
    p.add_argument("--output")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, RuleParseError, BadTable, TrinetFormatError, InvalidTrinet) as e:
        print(f"error: {e}", file=sys.stderr)
        return CONFIG
    except (BudgetExceeded, analysis.TooLarge) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return BUDGET
    except ConjugateDisagreement as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return VERIFY
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return IO
    except ValueError as e:
        # resume mismatches and similar refusals
        print(f"error: {e}", file=sys.stderr)
        return CONFIG


if __name__ == "__main__":
    sys.exit(main())
