"""Certified behavior classification and the rule-space sweep.

A run is labelled in this order: fixed (writer halted, or a static network
with a periodic writer), repetitive (a ball-isomorphism certificate that
survives a replay), elaborate (growth with one-dimensional writer movement),
otherwise unresolved. Generalized rules that shrink as well as grow may also
settle into a finite cycle of network shapes, labelled periodic.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import os
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .core import (INITIAL_GRAPHS, MULTI, ColoredTrinet, Simulator, canonical_form,
                   rooted_iso, type_code)
from .rules import (DEFAULT_TABLE, OptionTable, Rule, conjugate_graph, conjugate_rule,
                    decode, encode, format_rule, SPACE_SIZE)

log = logging.getLogger(__name__)

SCHEMA = "trinet-sweep/1"
FIXED, REPETITIVE, ELABORATE, UNRESOLVED = "fixed", "repetitive", "elaborate", "unresolved"
# a network that keeps changing through a finite cycle of shapes
PERIODIC = "periodic"

# steps simulated one at a time before switching to chunks
_FINE_STEPS = 512
_FIRST_CHECK = 256
_TRAIL_WINDOW = 10_000
# longest run searched for a full-state cycle once growth has stopped
_STATE_STEPS = 20_000


@dataclass(frozen=True)
class Budget:
    max_steps: int = 200_000
    max_vertices: int = 500_000
    max_period: int = 4_000
    max_radius: int = 200

    def __post_init__(self):
        for name in ("max_steps", "max_vertices", "max_period", "max_radius"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")


@dataclass
class ClassLabel:
    kind: str
    writer: str | None = None  # fixed: halted | periodic
    movement: str | None = None  # elaborate: cyclic | bouncing | unknown
    transient: int | None = None
    period: int | None = None
    certificate_radius: int | None = None
    final_vertices: int = 0
    steps_used: int = 0
    green_halt: bool = False
    anomalies: int = 0
    evidence: dict = field(default_factory=dict)

    def name(self) -> str:
        extra = self.writer or self.movement
        return f"{self.kind}/{extra}" if extra else self.kind


@dataclass(frozen=True)
class Certificate:
    time: int
    period: int
    radius: int
    growth: int


# -- fixed points ------------------------------------------------------------

def _halt_time(rule, init: ColoredTrinet, writer: int, upto: int) -> int:
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=False)
    while not sim.is_halted() and sim.time < upto:
        sim.advance(1)
    return sim.time


def _static_orbit(sim: Simulator) -> int | None:
    """Step until the writer revisits a vertex on an unchanged graph.

    Returns the orbit period, or None when the graph changes first. The
    simulator is advanced in place.
    """
    changes = sim.changes
    seen = {sim.writer: sim.time}
    for _ in range(sim.n + 1):
        sim.advance(1)
        if sim.changes != changes:
            return None
        first = seen.get(sim.writer)
        if first is not None:
            return sim.time - first
        seen[sim.writer] = sim.time
    return None


def _fixed_label(sim: Simulator, rule, init, writer) -> ClassLabel | None:
    if sim.is_halted():
        h = _halt_time(rule, init, writer, sim.time)
        code = type_code(sim.graph.nbr, sim.writer)
        return ClassLabel(FIXED, writer="halted", transient=h, period=1,
                          final_vertices=sim.n, steps_used=sim.time,
                          green_halt=code == 3, anomalies=sim.anomalies,
                          evidence={"halt_type": "0rbgm"[code]})
    return None


def detect_fixed(rule, init: ColoredTrinet, budget: Budget = Budget(), writer: int = 0):
    """Fixed label when the run reaches a halt or a static periodic orbit."""
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=True)
    label, _ = _search_fixed(sim, rule, init, writer, budget.max_steps, budget)
    return label


def _search_fixed(sim, rule, init, writer, until, budget):
    """Advance ``sim`` to ``until`` looking for a fixed point.

    Returns (label or None, exhausted-vertices flag).
    """
    chunk = 1
    while sim.time < until:
        label = _fixed_label(sim, rule, init, writer)
        if label is not None:
            return label, False
        if sim.time >= _FINE_STEPS:
            chunk = min(max(chunk * 2, 64), 4096)
        before = sim.changes
        step = min(chunk, until - sim.time)
        done = sim.advance(step, max_vertices=budget.max_vertices)
        if done < step:
            return None, True
        if sim.changes == before and step >= 1:
            probe = sim.clone()
            period = _static_orbit(probe)
            if period is not None:
                if probe.is_halted() or period == 0:
                    continue
                return ClassLabel(FIXED, writer="periodic", transient=sim.last_change,
                                  period=period, final_vertices=sim.n,
                                  steps_used=probe.time, anomalies=sim.anomalies,
                                  evidence={"orbit_start": probe.time - period}), False
    label = _fixed_label(sim, rule, init, writer)
    return label, False


# -- periodic states (generalized rules) --------------------------------------

def state_cycle(rule, init: ColoredTrinet, max_steps: int, writer: int = 0,
                labelled: bool = True, max_vertices: int | None = None):
    """(first time, length) of the first full-state cycle, or None."""
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=False)
    seen: dict = {}
    while sim.time <= max_steps:
        if labelled:
            key = (tuple(sim.graph.nbr), sim.writer)
        else:
            key = canonical_form(sim.graph, sim.writer)
        first = seen.get(key)
        if first is not None:
            return first, sim.time - first
        seen[key] = sim.time
        if sim.advance(1, max_vertices=max_vertices) < 1:
            break
    return None


def detect_periodic_state(rule, init: ColoredTrinet, budget: Budget = Budget(), writer: int = 0,
                          labelled: bool = True):
    """Length of the first full-state cycle, or None within the budget.

    States are compared with their vertex labels by default. With
    ``labelled=False`` they are compared up to rooted isomorphism, which can
    report a divisor of the labelled cycle when the writer moves between
    symmetric positions.
    """
    got = state_cycle(rule, init, budget.max_steps, writer, labelled, budget.max_vertices)
    return None if got is None else got[1]


# -- repetitive growth ---------------------------------------------------------

def suffix_period(seq: bytes, max_period: int, min_repeats: int = 3) -> int | None:
    """Smallest p with seq[i] == seq[i+p] over the whole of ``seq``."""
    n = len(seq)
    limit = min(max_period, n // min_repeats)
    for p in range(1, limit + 1):
        if seq[p:] == seq[:-p]:
            return p
    return None


def periodic_start(seq: bytes, p: int) -> int:
    """First index from which ``seq`` is ``p``-periodic to its end."""
    i = len(seq) - p - 1
    while i >= 0 and seq[i] == seq[i + p]:
        i -= 1
    return i + 1


def _old_distances(nbr, root: int, targets: set, limit: int) -> int | None:
    """Largest BFS distance from ``root`` to ``targets``; None past ``limit``."""
    if not targets:
        return 0
    dist = {root: 0}
    frontier = [root]
    left = set(targets)
    left.discard(root)
    far = 0
    d = 0
    while left and frontier and d < limit:
        d += 1
        nxt = []
        for v in frontier:
            i = 3 * v
            for u in (nbr[i], nbr[i + 1], nbr[i + 2]):
                if u not in dist:
                    dist[u] = d
                    nxt.append(u)
                    if u in left:
                        left.discard(u)
                        far = d
        frontier = nxt
    return None if left else far


def _wander(sim: Simulator, steps: int, limit: int):
    """Advance ``sim`` by ``steps``; return (radius, growth, snapshot) for the period.

    The radius is one more than the farthest old vertex the writer visits,
    measured in the graph at the start of the period.
    """
    start = sim.clone()
    t = sim.time
    born = sim.born
    old = set()
    for _ in range(steps):
        if sim.advance(1) < 1:
            return None
        w = sim.writer
        if born is not sim.born:
            born = sim.born
        if born[w] <= t:
            old.add(w)
    far = _old_distances(start.graph.nbr, start.writer, old, limit)
    if far is None:
        return None
    return far + 1, sim.n - start.n, start


def certify_at(base: Simulator, period: int, max_radius: int) -> Certificate | None:
    """Try the ball-isomorphism certificate from the state of ``base``.

    The r-ball at t must match the r-ball at t+p, with r one more than the
    farthest old vertex visited, and the same must hold again from t+p.
    """
    sim = base.clone()
    got = _wander(sim, period, max_radius)
    if got is None:
        return None
    r, growth, start = got
    if growth <= 0 or r > max_radius:
        return None
    ball = canonical_form(start.graph, start.writer, r)
    if canonical_form(sim.graph, sim.writer, r) != ball:
        return None
    again = _wander(sim, period, max_radius)
    if again is None or again[0] > r or again[1] != growth:
        return None
    if canonical_form(sim.graph, sim.writer, r) != ball:
        return None
    return Certificate(base.time, period, r, growth)


def recheck_certificate(rule, init: ColoredTrinet, cert: Certificate, writer: int = 0) -> bool:
    """Independent replay: balls at t, t+p and t+2p agree, growth is steady."""
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=False)
    sim.advance(cert.time)
    balls = []
    sizes = []
    for _ in range(3):
        balls.append(canonical_form(sim.graph, sim.writer, cert.radius))
        sizes.append(sim.n)
        sim.advance(cert.period)
    return (balls[0] == balls[1] == balls[2]
            and sizes[1] - sizes[0] == sizes[2] - sizes[1] == cert.growth > 0)


def _try_repetitive(rule, init, writer, types: bytes, budget: Budget):
    """Certify repetition suggested by the tail of ``types``, if possible."""
    T = len(types)
    window = types[T // 2:]
    p = suffix_period(window, budget.max_period)
    if p is None:
        return None
    t0 = periodic_start(types, p)
    # the pattern must have persisted at least as long as the lead-in
    if T - t0 < max(t0, 4 * p):
        return None
    base = Simulator(rule, init.copy(), writer, track_births=True, record_types=False)
    base.advance(t0)
    for _ in range(2 * p + 16):
        for q in range(p, budget.max_period + 1, p):
            if base.time + 2 * q > T + 2 * budget.max_period:
                break
            cert = certify_at(base, q, budget.max_radius)
            if cert is not None:
                return cert
            if q >= 8 * p:
                break
        base.advance(1)
    return None


def detect_repetitive(rule, init: ColoredTrinet, budget: Budget = Budget(), writer: int = 0):
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=True)
    check = _FIRST_CHECK
    while sim.time < budget.max_steps:
        step = min(check, budget.max_steps) - sim.time
        if sim.advance(step, max_vertices=budget.max_vertices) < step:
            break
        cert = _try_repetitive(rule, init, writer, bytes(sim.types), budget)
        if cert is not None:
            return cert
        check *= 2
    return None


# -- one-dimensional writer movement ------------------------------------------

_PAIRS = ((0, 1), (0, 2), (1, 2))
# how far along a track a single update may carry the writer
_REACH = 8
# a turn counts as a reversal once the writer has come back this far
_SWING = 8
# crossings of the third color tolerated in the second half of a run
_MAX_HOPS = 16
_ONEDIM_STEPS = 40_000


class _Track:
    """Signed writer position along the alternating cycle of two colors.

    From a vertex with phase 0 the first color points forward. Each track
    step flips the phase. Expanding the writer's vertex keeps the sides of a
    track through its red edge but swaps them on the blue/green track. A move
    may also cross one edge of the third color onto a neighbouring track.
    """

    def __init__(self, pair: tuple[int, int]):
        self.c1, self.c2 = pair
        self.hops = 0
        self.failed = 0
        self._reset()

    def _reset(self) -> None:
        self.phase = 0
        self.pos = 0
        self.heading = 0
        self.extreme = 0
        self.last_reversal = -1
        self.reversals = 0

    def _near(self, nbr, v: int, phase: int):
        c1, c2 = self.c1, self.c2
        out = [(0, v)]
        for sign, first in ((1, c1 if phase == 0 else c2), (-1, c2 if phase == 0 else c1)):
            u, c = v, first
            for d in range(1, _REACH + 1):
                u = nbr[3 * u + c]
                c = c1 + c2 - c
                out.append((sign * d, u))
        return out

    def _locate(self, nbr, p: int, w: int):
        near = self._near(nbr, p, self.phase)
        for d, u in near:
            if u == w:
                return d, d & 1, False
        c3 = 3 - self.c1 - self.c2
        for d, u in near:
            q = nbr[3 * u + c3]
            for e, x in self._near(nbr, q, self.phase ^ (d & 1)):
                if x == w:
                    return d + e, (d + e) & 1, True
        return None

    def update(self, nbr, p: int, w: int, grew: bool, t: int, late: bool) -> None:
        if grew and self.c1 == 1:
            self.phase ^= 1
        if w == p:
            return
        found = self._locate(nbr, p, w)
        if found is None:
            self.failed = t + 1
            self._reset()
            return
        d, parity, hop = found
        self.hops += hop and late
        self.phase ^= parity
        self.pos += d
        x = self.pos
        if self.heading >= 0:
            if x > self.extreme:
                self.extreme = x
            elif self.extreme - x > _SWING:
                self._turn(-1, x, t)
        if self.heading < 0:
            if x < self.extreme:
                self.extreme = x
            elif x - self.extreme > _SWING:
                self._turn(1, x, t)

    def _turn(self, heading: int, x: int, t: int) -> None:
        self.heading = heading
        self.extreme = x
        self.last_reversal = t
        self.reversals += 1


@dataclass
class Movement:
    kind: str
    colors: str
    reversals: int
    last_reversal: int
    hops: int


def detect_onedim(rule: Rule, init: ColoredTrinet | None = None, steps: int = _ONEDIM_STEPS,
                  writer: int = 0) -> Movement | None:
    """Cyclic or bouncing movement along a two-color track, else None.

    Every color pair is tracked from the start. A pair qualifies when the
    writer stays on it for the second half of the run; among those the one
    needing the fewest crossings wins, provided it needs only a handful.
    Writers that still reverse after the first quarter of the run bounce,
    the rest go around their loop. A writer that stops moving has no track.
    """
    if init is None:
        init = INITIAL_GRAPHS["cube"]()
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=False)
    nbr = sim.graph.nbr
    tracks = [_Track(pair) for pair in _PAIRS]
    half = steps // 2
    moved = 0
    for t in range(steps):
        p = sim.writer
        n = len(nbr)
        if sim.advance(1) < 1:
            break
        w = sim.writer
        grew = len(nbr) > n
        moved += t >= half and w != p
        for tr in tracks:
            tr.update(nbr, p, w, grew, t, t >= half)
    kept = [tr for tr in tracks if tr.failed < half and tr.hops <= _MAX_HOPS]
    if not kept or not moved:
        return None
    best = min(kept, key=lambda tr: tr.hops)
    kind = "bouncing" if best.last_reversal > steps // 4 else "cyclic"
    return Movement(kind, "rbg"[best.c1] + "rbg"[best.c2], best.reversals,
                    best.last_reversal, best.hops)


def trail_max_degree(rule, init: ColoredTrinet, start: int, window: int, writer: int = 0) -> int:
    """Largest degree of the graph formed by the writer's steps in a window."""
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=False)
    sim.advance(start)
    adj: dict[int, set] = {}
    prev = sim.writer
    for _ in range(window):
        sim.advance(1)
        w = sim.writer
        if w != prev:
            adj.setdefault(prev, set()).add(w)
            adj.setdefault(w, set()).add(prev)
        prev = w
    return max((len(s) for s in adj.values()), default=0)


# -- top level -----------------------------------------------------------------

def classify(rule: Rule, init: ColoredTrinet | None = None, budget: Budget = Budget(),
             writer: int = 0) -> ClassLabel:
    if init is None:
        init = INITIAL_GRAPHS["cube"]()
    sim = Simulator(rule, init.copy(), writer, track_births=False, record_types=True)
    check = _FIRST_CHECK
    out_of_vertices = False
    sizes = [sim.n]
    while True:
        until = min(check, budget.max_steps)
        label, out_of_vertices = _search_fixed(sim, rule, init, writer, until, budget)
        if label is not None:
            return label
        if out_of_vertices:
            break
        cert = _try_repetitive(rule, init, writer, bytes(sim.types), budget)
        if cert is not None:
            if not recheck_certificate(rule, init, cert, writer):
                log.warning("certificate for %s failed its replay", format_rule(rule))
                return ClassLabel(UNRESOLVED, final_vertices=sim.n, steps_used=sim.time,
                                  anomalies=sim.anomalies,
                                  evidence={"failed_certificate": asdict(cert)})
            return ClassLabel(REPETITIVE, transient=cert.time, period=cert.period,
                              certificate_radius=cert.radius, final_vertices=sim.n,
                              steps_used=sim.time, anomalies=sim.anomalies,
                              evidence={"growth_per_period": cert.growth, "replay": True})
        sizes.append(sim.n)
        if until >= budget.max_steps:
            break
        check *= 2
    common = dict(final_vertices=sim.n, steps_used=sim.time, anomalies=sim.anomalies)
    if sim.changes == 0 or sim.time - sim.last_change > sim.time // 2:
        return ClassLabel(UNRESOLVED, evidence={"reason": "no growth observed"}, **common)
    if not out_of_vertices and len(sizes) > 2 and sizes[-1] <= sizes[-2]:
        # still changing but no longer growing: look for a cycle of shapes
        got = state_cycle(rule, init, min(sim.time, _STATE_STEPS), writer)
        if got is not None:
            return ClassLabel(PERIODIC, transient=got[0], period=got[1], **common)
        return ClassLabel(UNRESOLVED, evidence={"reason": "bounded without a state cycle"},
                          **common)
    move = detect_onedim(rule, init, min(_ONEDIM_STEPS, budget.max_steps), writer)
    if move is not None:
        return ClassLabel(ELABORATE, movement=move.kind, evidence=asdict(move), **common)
    start = max(0, sim.time - _TRAIL_WINDOW)
    deg = trail_max_degree(rule, init, start, sim.time - start, writer)
    if deg <= 2:
        return ClassLabel(ELABORATE, movement="unknown",
                          evidence={"trail_max_degree": deg}, **common)
    reason = "vertex budget exhausted" if out_of_vertices else "step budget exhausted"
    return ClassLabel(UNRESOLVED, evidence={"reason": reason, "trail_max_degree": deg},
                      **common)


# -- sweep -----------------------------------------------------------------------

def make_record(rule_id: int, rule: Rule, init_name: str, label: ClassLabel) -> dict:
    return {
        "schema": SCHEMA,
        "rule_id": rule_id,
        "rule_text": format_rule(rule),
        "init": init_name,
        "label": label.name(),
        "transient": label.transient,
        "period": label.period,
        "certificate_radius": label.certificate_radius,
        "final_vertices": label.final_vertices,
        "steps_used": label.steps_used,
        "green_halt": label.green_halt,
        "anomalies": label.anomalies,
        "evidence": label.evidence,
    }


def _classify_job(args):
    rule_id, table, init_name, init, budget = args
    rule = decode(rule_id, table)
    return make_record(rule_id, rule, init_name, classify(rule, init, budget))


def worker_count(requested: int | None = None) -> int:
    env = os.environ.get("TRINET_THREADS")
    n = requested or (int(env) if env else os.cpu_count() or 1)
    if env:
        n = min(n, int(env))
    return max(1, n)


def _conjugate_symmetric(init: ColoredTrinet, writer: int = 0) -> bool:
    return rooted_iso(init, writer, conjugate_graph(init), writer)


def summarize(records) -> dict:
    labels = Counter()
    classes = Counter()
    orbit_periods = Counter()
    green = 0
    max_transient = max_period = 0
    for rec in records:
        labels[rec["label"]] += 1
        classes[rec["label"].split("/")[0]] += 1
        if rec["green_halt"]:
            green += 1
        if rec["label"] == "fixed/periodic":
            orbit_periods[rec["period"]] += 1
        if rec["label"].startswith(REPETITIVE):
            max_transient = max(max_transient, rec["transient"])
            max_period = max(max_period, rec["period"])
    return {
        "total": sum(classes.values()),
        "classes": dict(sorted(classes.items())),
        "labels": dict(sorted(labels.items())),
        "green_halt": green,
        "writer_orbit_periods": {str(k): v for k, v in sorted(orbit_periods.items())},
        "max_repetitive_transient": max_transient,
        "max_repetitive_period": max_period,
    }


def sweep(rule_ids=None, init_name: str = "cube", budget: Budget = Budget(),
          table: OptionTable = DEFAULT_TABLE, sink=None, workers: int | None = None,
          conjugate_dedup: bool = False, init: ColoredTrinet | None = None,
          check_every: int = 10):
    """Classify rules and yield records in rule-id order.

    ``sink`` receives each record as it is produced. With ``conjugate_dedup``
    only the smaller id of each red/blue conjugate pair is simulated when the
    initial graph is symmetric under the swap; every ``check_every``-th pair
    is simulated twice and compared.
    """
    if init is None:
        init = INITIAL_GRAPHS[init_name]()
    ids = list(range(SPACE_SIZE)) if rule_ids is None else list(rule_ids)
    partner = {}
    if conjugate_dedup and _conjugate_symmetric(init):
        pairs = 0
        for i in ids:
            j = encode(conjugate_rule(decode(i, table)), table)
            if j > i:
                pairs += 1
                if pairs % check_every:
                    partner[j] = i
    todo = [i for i in ids if i not in partner]
    n_workers = worker_count(workers)
    jobs = ((i, table, init_name, init, budget) for i in todo)
    if n_workers > 1 and len(todo) > 1:
        pool = multiprocessing.get_context("spawn").Pool(n_workers)
        results = pool.imap(_classify_job, jobs, chunksize=4)
    else:
        pool = None
        results = map(_classify_job, jobs)
    done: dict[int, dict] = {}
    try:
        it = iter(results)
        for i in ids:
            if i in partner:
                src = done[partner[i]]
                rec = dict(src, rule_id=i, rule_text=format_rule(decode(i, table)))
            else:
                rec = next(it)
                done[i] = rec
                j = encode(conjugate_rule(decode(i, table)), table)
                if conjugate_dedup and j in done and j != i:
                    _check_conjugates(done[j], rec)
            if sink is not None:
                sink(rec)
            yield rec
    finally:
        if pool is not None:
            pool.terminate()


class ConjugateDisagreement(RuntimeError):
    pass


def _check_conjugates(a: dict, b: dict):
    keys = ("label", "transient", "period", "final_vertices")
    if any(a[k] != b[k] for k in keys):
        raise ConjugateDisagreement(f"rules {a['rule_id']} and {b['rule_id']} disagree")


# -- record files and manifests -------------------------------------------------

def read_records(path) -> list[dict]:
    out = []
    p = Path(path)
    if not p.exists():
        return out
    with p.open() as fh:
        for line in fh:
            if not line.endswith("\n"):
                break
            out.append(json.loads(line))
    return out


def dump_record(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"


def run_sweep_to_file(out_path, manifest_path=None, init_name: str = "cube",
                      budget: Budget = Budget(), table: OptionTable = DEFAULT_TABLE,
                      workers: int | None = None, conjugate_dedup: bool = False,
                      rule_ids=None, init: ColoredTrinet | None = None) -> dict:
    """Sweep into a JSONL file, resuming after any complete records already there."""
    out_path = Path(out_path)
    manifest_path = Path(manifest_path) if manifest_path else out_path.with_suffix(".manifest.json")
    ids = list(range(SPACE_SIZE)) if rule_ids is None else list(rule_ids)
    meta = {
        "schema": SCHEMA,
        "init": init_name,
        "budget": asdict(budget),
        "option_table_sha256": table.digest(),
        "rule_ids": [ids[0], ids[-1] + 1] if ids == list(range(ids[0], ids[-1] + 1)) else ids,
    }
    existing = read_records(out_path)
    if existing and manifest_path.exists():
        old = json.loads(manifest_path.read_text())
        for key in ("schema", "init", "budget", "option_table_sha256", "rule_ids"):
            if old.get(key) != meta[key]:
                raise ValueError(f"cannot resume: manifest {key} differs")
    elif existing:
        raise ValueError("cannot resume: records present without a manifest")
    # drop any torn final line
    with out_path.open("w") as fh:
        for rec in existing:
            fh.write(dump_record(rec))
    done_ids = {rec["rule_id"] for rec in existing}
    remaining = [i for i in ids if i not in done_ids]

    def save_manifest(count):
        m = dict(meta, completed=count)
        manifest_path.write_text(json.dumps(m, indent=1, sort_keys=True) + "\n")

    save_manifest(len(existing))
    count = len(existing)
    with out_path.open("a") as fh:
        for rec in sweep(remaining, init_name, budget, table, workers=workers,
                         conjugate_dedup=conjugate_dedup, init=init):
            fh.write(dump_record(rec))
            fh.flush()
            count += 1
            if count % 50 == 0:
                save_manifest(count)
    save_manifest(count)
    summary = summarize(read_records(out_path))
    return summary
