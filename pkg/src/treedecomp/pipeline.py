"""Colouring -> pseudo-decomposition -> repair -> verification."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .colouring import verify_equitable
from .copies import PseudoDecomposition
from .errors import DegreeTooSmall, NotEquitable
from .graph import Graph
from .pseudo import LemmaReport, dense_pseudo_decomposition
from .repair import FailureReport, RepairSchedule, StageLog, repair_all
from .seeds import derive_seed
from .tree import LabelledTree
from .verify import Violation, verify_decomposition

log = logging.getLogger(__name__)

DECOMPOSED = "DECOMPOSED"
FAILED = "FAILED"
INFEASIBLE_INPUT = "INFEASIBLE_INPUT"


@dataclass
class PipelineConfig:
    seed: int = 0
    blade_size: int | None = None  # None: whole colour classes as blades
    fallback: bool = True
    eps: Fraction | None = None  # dense-check ratios; None means 10^(-2m)
    delta: Fraction | None = None
    dense_retries: int = 64
    attempts: int = 4
    relax: float | Fraction = 3
    repair_retries: int = 8
    resample_budget: int = 10_000
    switch_all: bool = False
    reclassify: bool = True

    def schedule(self, m: int) -> RepairSchedule:
        return RepairSchedule(
            m,
            relax=self.relax,
            retry_budget=self.repair_retries,
            resample_budget=self.resample_budget,
            switch_all=self.switch_all,
            reclassify=self.reclassify,
        )


@dataclass
class AttemptLog:
    attempt: int
    dense_draws: int
    bad_copies: int
    lemma: LemmaReport
    stages: list[StageLog]
    failure: FailureReport | None


@dataclass
class PipelineResult:
    outcome: str
    decomposition: PseudoDecomposition | None = None
    reason: str = ""
    attempts: list[AttemptLog] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    @property
    def failure(self) -> FailureReport | None:
        return self.attempts[-1].failure if self.attempts else None


def decompose(g: Graph, t: LabelledTree, col: Sequence[int], cfg: PipelineConfig | None = None) -> PipelineResult:
    """Turn a T-equitable colouring of g into a verified T-decomposition.

    Each attempt draws a pseudo-decomposition (best of ``dense_retries``
    star drawings) and runs the staged repair. The outcome is DECOMPOSED only
    after verify_decomposition accepts the result.
    """
    cfg = cfg or PipelineConfig()
    if g.size % t.m:
        return PipelineResult(INFEASIBLE_INPUT, reason=f"|E(G)| = {g.size} is not divisible by m = {t.m}")
    bad = verify_equitable(g, t, col)
    if bad:
        return PipelineResult(INFEASIBLE_INPUT, reason=f"colouring is not T-equitable ({len(bad)} violations)")
    eps = cfg.eps if cfg.eps is not None else Fraction(1, 10 ** (2 * t.m))
    delta = cfg.delta if cfg.delta is not None else eps
    schedule = cfg.schedule(t.m)
    result = PipelineResult(FAILED)
    for attempt in range(max(1, cfg.attempts)):
        sub = derive_seed(cfg.seed, "attempt", attempt)
        try:
            p, lemma, draws = dense_pseudo_decomposition(
                g, t, col, eps, delta, sub, cfg.dense_retries, cfg.blade_size, cfg.fallback
            )
        except DegreeTooSmall as exc:
            return PipelineResult(INFEASIBLE_INPUT, reason=f"blade construction: {exc}")
        except NotEquitable as exc:  # pragma: no cover - checked above
            return PipelineResult(INFEASIBLE_INPUT, reason=str(exc))
        rep = repair_all(t, p, schedule, derive_seed(sub, "repair"))
        result.attempts.append(AttemptLog(attempt, draws, lemma.n_bad, lemma, rep.logs, rep.failure))
        if rep.ok:
            assert rep.decomposition is not None
            violations = verify_decomposition(g, t, rep.decomposition.copies, col)
            if violations:  # pragma: no cover - would be a library bug
                result.violations = violations
                result.reason = "verifier rejected the repaired decomposition"
                return result
            result.outcome = DECOMPOSED
            result.decomposition = rep.decomposition
            return result
        log.info("attempt %d failed: %s", attempt, rep.failure.reason if rep.failure else "?")
    f = result.failure
    result.reason = f.reason if f else "repair failed"
    return result
