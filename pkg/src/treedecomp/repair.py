"""Repairing non-isomorphic pseudo-copies by i-switches.

Stage i (4 <= i <= m) takes every pseudo-copy H that is (i-1)-good but
i-bad, finds an isomorphic partner F sharing only the image of t_j (j the
parent of t_i), and swaps the parts of H and F that hang off e_i. Partners
come from disjoint per-H pools and are redrawn, Moser-Tardos style, while
some vertex is overused as a partner image.
"""

from __future__ import annotations

import logging
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .copies import PseudoCopy, PseudoDecomposition, degree_table
from .errors import Infeasible, SharedVertexMismatch
from .pseudo import as_fraction, conflict_global
from .seeds import derive_seed
from .tree import LabelledTree, split

log = logging.getLogger(__name__)

INF = math.inf


def switch_i(t: LabelledTree, h1: PseudoCopy, h2: PseudoCopy, i: int) -> tuple[PseudoCopy, PseudoCopy]:
    """(h1^{i+} + h2^{i-}, h1^{i-} + h2^{i+}); both must agree at t_parent(i)."""
    sp = split(t, i)
    j = t.parent[i]
    if h1.image[j] != h2.image[j]:
        raise SharedVertexMismatch(
            f"images at t_{j} differ: {h1.image[j]} vs {h2.image[j]}"
        )
    plus_v, plus_e = sp.plus_vertices, sp.plus_edges

    def glue(plus: PseudoCopy, minus: PseudoCopy) -> PseudoCopy:
        image = tuple(plus.image[x] if x in plus_v else minus.image[x] for x in range(t.m + 1))
        edges = tuple(plus.edges[e - 1] if e in plus_e else minus.edges[e - 1] for e in range(1, t.m + 1))
        return PseudoCopy(image, edges)

    return glue(h1, h2), glue(h2, h1)


def is_i_good(h: PseudoCopy, i: int) -> bool:
    return h.goodness() >= i


@dataclass
class RepairSchedule:
    """Per-stage ratios and the knobs of the repair loop.

    ``eps(i)`` defaults to 5^(i-m) / (15m). Stage i matches with
    eps = delta = eps(i-1). ``relax`` scales the partner degree bound
    (inf disables it).
    """

    m: int
    relax: float | Fraction = 3
    retry_budget: int = 8
    resample_budget: int = 10_000
    switch_all: bool = False
    reclassify: bool = True
    overrides: Mapping[int, Fraction] = field(default_factory=dict)

    def eps(self, i: int) -> Fraction:
        if i in self.overrides:
            return as_fraction(self.overrides[i])
        return default_eps(self.m, i)


def default_eps(m: int, i: int) -> Fraction:
    return Fraction(5) ** (i - m) / (15 * m)


@dataclass
class SwitchPlan:
    stage: int
    tree_vertex: int
    pairs: list[tuple[int, int]]
    shared: dict[int, int]
    resamples: int = 0
    pool_sizes: list[int] = field(default_factory=list)
    hypotheses_ok: bool = True


def _max_matching(order: Sequence[int], cands: Mapping[int, Sequence[int]]) -> dict[int, int]:
    """Kuhn's augmenting paths; returns H -> candidate."""
    owner: dict[int, int] = {}

    def augment(h: int, seen: set[int]) -> bool:
        for f in cands[h]:
            if f in seen:
                continue
            seen.add(f)
            if f not in owner or augment(owner[f], seen):
                owner[f] = h
                return True
        return False

    for h in order:
        augment(h, set())
    return {h: f for f, h in owner.items()}


def build_matching(
    bad: Mapping[int, PseudoCopy],
    iso: Mapping[int, PseudoCopy],
    t: LabelledTree,
    tj: int,
    eps,
    delta,
    rng: random.Random,
    budget: int = 10_000,
    relax: float | Fraction = 3,
    stage: int = 0,
) -> SwitchPlan:
    """Injective partner choice f: bad -> iso at tree vertex ``tj``.

    f(H) places H's t_j image at t_j and meets H only there. Pools are
    disjoint per vertex group, of size floor((1 - delta*m)/eps) clamped to
    what is available, and seeded by a maximum matching so no H is starved.
    Choices are redrawn while d_f(v|t') > relax*eps*d_iso(v|t') anywhere.
    """
    e, d = as_fraction(eps), as_fraction(delta)
    m = t.m
    plan = SwitchPlan(stage, tj, [], {})
    if not bad:
        return plan

    by_v: dict[int, list[int]] = defaultdict(list)
    for hid in sorted(bad):
        by_v[bad[hid].image[tj]].append(hid)
    iso_at: dict[int, list[int]] = defaultdict(list)
    for fid in sorted(iso):
        iso_at[iso[fid].image[tj]].append(fid)

    iso_deg = degree_table(iso.values())
    bad_deg = degree_table(bad.values())
    k_target = math.floor((1 - d * m) / e) if e > 0 else 1
    k_target = max(1, k_target)

    pools: dict[int, list[int]] = {}
    for v in sorted(by_v):
        group = by_v[v]
        cands = {}
        for hid in group:
            hv = bad[hid].vertices()
            cands[hid] = [fid for fid in iso_at.get(v, []) if iso[fid].vertices() & hv == {v}]
        available = set().union(*cands.values())
        seed_match = _max_matching(group, cands)
        if len(seed_match) < len(group):
            starved = next(h for h in group if h not in seed_match)
            raise Infeasible(
                f"stage {stage}: no disjoint partner for copy {starved} at (v={v}, t={tj})",
                witness=(v, tj),
                stats={
                    "kind": "empty-pool",
                    "group": len(group),
                    "candidates": len(iso_at.get(v, [])),
                    "usable": len(available),
                },
            )
        k = max(1, min(k_target, len(available) // len(group)))
        for hid in group:
            pools[hid] = [seed_match[hid]]
        taken = set(seed_match.values())
        grown = True
        while grown:
            grown = False
            for hid in group:
                if len(pools[hid]) >= k:
                    continue
                for fid in cands[hid]:
                    if fid not in taken:
                        pools[hid].append(fid)
                        taken.add(fid)
                        grown = True
                        break
        d_iso = len(iso_at.get(v, []))
        if d_iso <= max(22 / e**7, Fraction(bad_deg[(v, tj)]) / e):
            plan.hypotheses_ok = False
    plan.pool_sizes = [len(pools[h]) for h in sorted(pools)]

    choice = {hid: rng.choice(pools[hid]) for hid in sorted(pools)}
    limit = INF if relax == INF else as_fraction(relax) * e

    def load() -> Counter:
        return degree_table(iso[f] for f in choice.values())

    def violated(cur: Counter) -> list[tuple[int, int]]:
        if limit == INF:
            return []
        return sorted(key for key, n in cur.items() if n > limit * iso_deg[key])

    if limit != INF:
        # copies whose whole pool sits on one (v, t') force that load
        forced: Counter = Counter()
        for hid, pool in pools.items():
            for tt in range(m + 1):
                imgs = {iso[f].image[tt] for f in pool}
                if len(imgs) == 1:
                    forced[(imgs.pop(), tt)] += 1
        stuck = sorted(key for key, n in forced.items() if n > limit * iso_deg[key])
        if stuck:
            v, tt = stuck[0]
            raise Infeasible(
                f"stage {stage}: degree bound at (v={v}, t={tt}) cannot hold for any draw",
                witness=(v, tt),
                stats={"kind": "degree-bound", "forced": forced[(v, tt)], "limit": float(limit * iso_deg[(v, tt)])},
            )

    cur = load()
    bad_events = violated(cur)
    pointer = 0
    while bad_events:
        if plan.resamples >= budget:
            v, tt = bad_events[0]
            raise Infeasible(
                f"stage {stage}: partner degree bound still violated at (v={v}, t={tt}) after {budget} redraws",
                witness=(v, tt),
                stats={"kind": "degree-bound", "violations": len(bad_events), "resamples": plan.resamples},
            )
        ev = bad_events[pointer % len(bad_events)]
        pointer += 1
        v, tt = ev
        for hid in sorted(choice):
            if iso[choice[hid]].image[tt] == v:
                choice[hid] = rng.choice(pools[hid])
                plan.resamples += 1
        cur = load()
        bad_events = violated(cur)

    for hid in sorted(choice):
        plan.pairs.append((hid, choice[hid]))
        plan.shared[hid] = bad[hid].image[tj]
    return plan


@dataclass
class RepairState:
    bad: dict[int, PseudoCopy]
    iso: dict[int, PseudoCopy]
    next_id: int

    @classmethod
    def from_decomposition(cls, p: PseudoDecomposition) -> "RepairState":
        bad, iso = {}, {}
        for n, h in enumerate(p.copies):
            (iso if h.is_isomorphic() else bad)[n] = h
        return cls(bad, iso, len(p.copies))

    def copies(self) -> list[PseudoCopy]:
        merged = {**self.bad, **self.iso}
        return [merged[k] for k in sorted(merged)]

    def clone(self) -> "RepairState":
        return RepairState(dict(self.bad), dict(self.iso), self.next_id)


@dataclass
class StageLog:
    stage: int
    bad_before: int
    switches: int
    resamples: int
    iso_after: int
    conf_iso_after: Fraction
    hypotheses_ok: bool


def repair_stage(
    t: LabelledTree,
    state: RepairState,
    i: int,
    eps,
    seed: int,
    schedule: RepairSchedule | None = None,
    delta=None,
) -> tuple[RepairState, StageLog]:
    """One stage: make every member of the non-isomorphic collection i-good."""
    schedule = schedule or RepairSchedule(t.m)
    delta = eps if delta is None else delta
    for hid, h in state.bad.items():
        if h.goodness() < i - 1:
            raise ValueError(f"copy {hid} is not {i - 1}-good before stage {i}")
    tj = t.parent[i]
    bad_now = {hid: h for hid, h in state.bad.items() if h.goodness() < i}
    domain = dict(state.bad) if schedule.switch_all else bad_now
    new = state.clone()
    rng = random.Random(seed)
    plan = build_matching(
        domain, state.iso, t, tj, eps, delta, rng,
        budget=schedule.resample_budget, relax=schedule.relax, stage=i,
    )
    for hid, fid in plan.pairs:
        h, f = state.bad[hid], state.iso[fid]
        del new.bad[hid]
        del new.iso[fid]
        for out in switch_i(t, h, f, i):
            if schedule.reclassify and out.is_isomorphic():
                new.iso[new.next_id] = out
            else:
                new.bad[new.next_id] = out
            new.next_id += 1
    stray = [hid for hid, h in new.bad.items() if h.goodness() < i]
    if stray:  # pragma: no cover - guaranteed by the matching conditions
        raise AssertionError(f"stage {i} left {len(stray)} copies {i}-bad")
    entry = StageLog(
        i, len(bad_now), len(plan.pairs), plan.resamples, len(new.iso),
        conflict_global(list(new.iso.values())), plan.hypotheses_ok,
    )
    return new, entry


@dataclass
class FailureReport:
    stage: int
    witness: tuple[int, int] | None
    reason: str
    pool_stats: dict
    seeds_tried: list[int]


@dataclass
class RepairResult:
    decomposition: PseudoDecomposition | None
    logs: list[StageLog]
    failure: FailureReport | None = None
    attempts: int = 1

    @property
    def ok(self) -> bool:
        return self.decomposition is not None


def repair_all(
    t: LabelledTree,
    p: PseudoDecomposition,
    schedule: RepairSchedule | None = None,
    seed: int = 0,
    observer: Callable[[int, RepairState, RepairState], None] | None = None,
) -> RepairResult:
    """Run stages 4..m; reseed the partner draws on failure.

    ``observer(i, before, after)`` is called after every completed stage.
    Returns a RepairResult whose decomposition is None on failure.
    """
    schedule = schedule or RepairSchedule(t.m)
    for n, h in enumerate(p.copies):
        if h.goodness() < min(3, t.m):
            raise ValueError(f"copy {n} is only {h.goodness()}-good; expected 3-good input")
    seeds_tried: list[int] = []
    last: Infeasible | None = None
    last_stage = 0
    for attempt in range(max(1, schedule.retry_budget)):
        attempt_seed = derive_seed(seed, "repair", attempt)
        seeds_tried.append(attempt_seed)
        state = RepairState.from_decomposition(p)
        logs: list[StageLog] = []
        drew = False
        try:
            for i in range(4, t.m + 1):
                eps = schedule.eps(i - 1)
                before = state
                state, entry = repair_stage(t, state, i, eps, derive_seed(attempt_seed, i), schedule)
                logs.append(entry)
                drew = drew or entry.switches > 0
                if observer is not None:
                    observer(i, before, state)
        except Infeasible as exc:
            last, last_stage = exc, i
            log.debug("repair attempt %d failed: %s", attempt, exc)
            if not drew and last.stats.get("kind") == "empty-pool":
                # nothing random happened before the failure; a reseed replays it
                break
            continue
        if state.bad and any(not h.is_isomorphic() for h in state.bad.values()):  # pragma: no cover
            raise AssertionError("repair finished with non-isomorphic copies")
        return RepairResult(PseudoDecomposition(tuple(state.copies())), logs, None, attempt + 1)
    assert last is not None
    failure = FailureReport(last_stage, last.witness, str(last), dict(last.stats), seeds_tried)
    return RepairResult(None, logs, failure, len(seeds_tried))
