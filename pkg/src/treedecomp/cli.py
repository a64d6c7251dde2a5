"""Command-line entry point: gen, colour, decompose, verify, oracle, stats.

Exit codes: 0 success, 1 negative or failed result, 2 unusable input,
3 I/O error. Reports are ``key=value`` lines on stdout (or --report).
Set TREE_DECOMP_LOG=DEBUG|INFO|WARNING for progress logging on stderr.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import formats
from .colouring import find_equitable, synth_instance, verify_equitable
from .copies import degree_table
from .errors import BudgetExhausted, EmbeddingFailed, InputError, TreeDecompError
from .graph import CLASS_NAMES, edge_connectivity
from .pipeline import DECOMPOSED, FAILED, INFEASIBLE_INPUT, PipelineConfig, decompose
from .pseudo import choose_c, conflict_table, goodness_histogram
from .verify import brute_force_decompose, verify_decomposition

log = logging.getLogger("treedecomp")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    tree: str | None = None
    colouring: str | None = None
    decomposition: str | None = None
    seed: int = 0
    mode: str = "fallback"
    blade_size: int | None = None
    switch: str = "bad-only"
    reclassify: bool = True
    relax: float | Fraction = 3
    budget: int | None = None
    attempts: int = 4
    dense_retries: int = 64
    out: str | None = None
    report: str | None = None
    json: str | None = None
    timings: bool = False
    copies: int = 1
    pools: tuple[int, int] = (1, 1)


@dataclass
class Report:
    records: list[tuple[str, object]] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def add(self, key: str, value: object) -> None:
        self.records.append((key, value))


def _relax(text: str) -> float | Fraction:
    if text.lower() in ("inf", "none", "off"):
        return math.inf
    value = Fraction(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("relax factor must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treedecomp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph=True, tree=True):
        if graph:
            p.add_argument("--graph", required=True)
        if tree:
            p.add_argument("--tree", required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
        p.add_argument("--report", help="write the report here instead of stdout")
        p.add_argument("--json", help="also write the report as one JSON document")
        p.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")

    p = sub.add_parser("gen", help="planted instance: graph, colouring and ground-truth decomposition")
    common(p, graph=False)
    p.add_argument("--copies", type=int, required=True)
    p.add_argument("--pools", type=int, nargs=2, metavar=("A", "B"), required=True)

    p = sub.add_parser("colour", help="search for a T-equitable colouring")
    common(p)
    p.add_argument("--budget", type=int, default=2_000_000)

    p = sub.add_parser("decompose", help="colour (if needed), pseudo-decompose, repair and verify")
    common(p)
    p.add_argument("--colouring")
    p.add_argument("--mode", choices=("fallback", "paper"), default="fallback")
    p.add_argument("--blade-size", type=int, help="blade size c in paper mode (default ceil((10m)^9 / (eps*delta)^3))")
    p.add_argument("--switch", choices=("bad-only", "all"), default="bad-only")
    p.add_argument("--no-reclassify", dest="reclassify", action="store_false")
    p.add_argument("--relax", type=_relax, default=Fraction(3), help="partner degree-bound factor, or inf")
    p.add_argument("--budget", type=int, default=10_000, help="resampling budget per repair stage")
    p.add_argument("--attempts", type=int, default=4)
    p.add_argument("--dense-retries", type=int, default=64, help="star drawings per attempt; the best one is kept")

    p = sub.add_parser("verify", help="check a decomposition file")
    common(p)
    p.add_argument("--decomposition", required=True)
    p.add_argument("--colouring")

    p = sub.add_parser("oracle", help="exact brute-force T-decomposition search")
    common(p)
    p.add_argument("--budget", type=int, default=2_000_000)

    p = sub.add_parser("stats", help="conflict table, goodness histogram, edge connectivity")
    common(p)
    p.add_argument("--decomposition", required=True)
    return ap


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(ns.command)
    for name in vars(cfg):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if ns.command == "gen":
        cfg.pools = tuple(ns.pools)
    return cfg


def _setup_logging() -> None:
    level = os.environ.get("TREE_DECOMP_LOG", "WARNING").upper()
    if level.isdigit():
        lvl = int(level)
    else:
        lvl = getattr(logging, level, logging.WARNING)
    logging.basicConfig(level=lvl, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _load(cfg: RunConfig):
    g = formats.parse_graph(formats.read_text(cfg.graph), cfg.graph) if cfg.graph else None
    t = formats.parse_tree(formats.read_text(cfg.tree), cfg.tree) if cfg.tree else None
    return g, t


def _instance(report: Report, g, t) -> None:
    report.add("instance.vertices", g.n)
    report.add("instance.edges", g.size)
    report.add("instance.class_sizes", f"{g.side.count(0)}/{g.side.count(1)}")
    report.add("instance.edge_connectivity", edge_connectivity(g) if g.n >= 2 else 0)
    report.add("tree.m", t.m)
    report.add("tree.root", f"{t.names[0]} {CLASS_NAMES[t.side[0]]}")
    report.add("tree.labels", " ".join(t.names))


def cmd_gen(cfg: RunConfig, report: Report) -> None:
    t = formats.parse_tree(formats.read_text(cfg.tree), cfg.tree)
    if cfg.copies < 1 or min(cfg.pools) < 1:
        raise InputError("copies and pools must be positive")
    try:
        inst = synth_instance(t, cfg.copies, cfg.pools[0], cfg.pools[1], cfg.seed)
    except EmbeddingFailed as exc:
        report.add("outcome", "EMBEDDING_FAILED")
        report.add("reason", exc)
        report.exit_code = EXIT_INPUT
        return
    prefix = cfg.out or "instance"
    formats.write_text(prefix + ".graph", formats.format_graph(inst.graph))
    formats.write_text(prefix + ".col", formats.format_colouring(inst.graph, inst.colouring))
    formats.write_text(prefix + ".decomp", formats.format_decomposition(inst.graph, inst.planted))
    _instance(report, inst.graph, t)
    report.add("equitable", not verify_equitable(inst.graph, t, inst.colouring))
    report.add("files", f"{prefix}.graph {prefix}.col {prefix}.decomp")
    report.add("outcome", "WRITTEN")


def cmd_colour(cfg: RunConfig, report: Report) -> None:
    g, t = _load(cfg)
    _instance(report, g, t)
    try:
        col = find_equitable(g, t, cfg.budget or 2_000_000)
    except BudgetExhausted as exc:
        report.add("outcome", "BUDGET")
        report.add("reason", exc)
        report.exit_code = EXIT_FAIL
        return
    if col is None:
        report.add("outcome", "UNSAT")
        report.exit_code = EXIT_FAIL
        return
    if cfg.out:
        formats.write_text(cfg.out, formats.format_colouring(g, col))
    report.add("outcome", "SAT")


def cmd_decompose(cfg: RunConfig, report: Report) -> None:
    g, t = _load(cfg)
    _instance(report, g, t)
    report.add("seed", cfg.seed)
    report.add("mode", cfg.mode)
    report.add("switch", cfg.switch)
    report.add("reclassify", cfg.reclassify)
    report.add("relax", cfg.relax)
    if g.size % t.m:
        report.add("outcome", INFEASIBLE_INPUT)
        report.add("reason", f"|E(G)| = {g.size} is not divisible by m = {t.m}")
        report.exit_code = EXIT_INPUT
        return
    if cfg.colouring:
        col = formats.parse_colouring(formats.read_text(cfg.colouring), g, t.m, cfg.colouring)
        report.add("colouring.source", "file")
    else:
        report.add("colouring.source", "search")
        try:
            col = find_equitable(g, t)
        except BudgetExhausted as exc:
            report.add("outcome", FAILED)
            report.add("reason", f"colouring search: {exc}")
            report.exit_code = EXIT_FAIL
            return
        if col is None:
            report.add("outcome", INFEASIBLE_INPUT)
            report.add("reason", "no T-equitable colouring exists")
            report.exit_code = EXIT_INPUT
            return
    pcfg = PipelineConfig(
        seed=cfg.seed,
        attempts=cfg.attempts,
        dense_retries=cfg.dense_retries,
        relax=cfg.relax,
        resample_budget=cfg.budget or 10_000,
        switch_all=cfg.switch == "all",
        reclassify=cfg.reclassify,
    )
    if cfg.mode == "paper":
        pcfg.fallback = False
        pcfg.blade_size = cfg.blade_size or choose_c(t.m, Fraction(1, 10 ** (2 * t.m)), Fraction(1, 10 ** (2 * t.m)))
        report.add("blade_size", pcfg.blade_size)
    res = decompose(g, t, col, pcfg)
    for a in res.attempts:
        pre = f"attempt.{a.attempt}"
        report.add(f"{pre}.dense_draws", a.dense_draws)
        report.add(f"{pre}.bad_copies", a.bad_copies)
        report.add(f"{pre}.lemma_degree_ok", a.lemma.degree_ok)
        report.add(f"{pre}.lemma_conf_iso", a.lemma.conf_iso)
        for s in a.stages:
            sp = f"{pre}.stage.{s.stage}"
            report.add(f"{sp}.bad_before", s.bad_before)
            report.add(f"{sp}.switches", s.switches)
            report.add(f"{sp}.resamples", s.resamples)
            report.add(f"{sp}.iso_after", s.iso_after)
            report.add(f"{sp}.conf_iso", s.conf_iso_after)
            report.add(f"{sp}.hypotheses_ok", s.hypotheses_ok)
        if a.failure:
            f = a.failure
            report.add(f"{pre}.failure.stage", f.stage)
            report.add(f"{pre}.failure.witness", _witness(g, t, f.witness))
            report.add(f"{pre}.failure.reason", f.reason)
            report.add(f"{pre}.failure.pool_stats", " ".join(f"{k}:{v}" for k, v in f.pool_stats.items()))
            report.add(f"{pre}.failure.seeds_tried", len(f.seeds_tried))
    report.add("outcome", res.outcome)
    if res.outcome == DECOMPOSED:
        assert res.decomposition is not None
        report.add("copies", len(res.decomposition))
        report.add("verify", "ok")
        if cfg.out:
            formats.write_text(cfg.out, formats.format_decomposition(g, res.decomposition.copies))
        return
    report.add("reason", res.reason)
    report.exit_code = EXIT_INPUT if res.outcome == INFEASIBLE_INPUT else EXIT_FAIL


def _witness(g, t, w) -> str:
    if w is None:
        return "-"
    v, tv = w
    return f"{g.names[v]}|t{tv}"


def cmd_verify(cfg: RunConfig, report: Report) -> None:
    g, t = _load(cfg)
    copies = formats.parse_decomposition(formats.read_text(cfg.decomposition), g, t, cfg.decomposition)
    col = formats.parse_colouring(formats.read_text(cfg.colouring), g, t.m, cfg.colouring) if cfg.colouring else None
    violations = verify_decomposition(g, t, copies, col)
    report.add("copies", len(copies))
    report.add("violations", len(violations))
    for n, v in enumerate(violations):
        for key, value in v.record().items():
            report.add(f"violation.{n}.{key}", value)
    report.add("outcome", "ok" if not violations else "invalid")
    if violations:
        report.exit_code = EXIT_FAIL


def cmd_oracle(cfg: RunConfig, report: Report) -> None:
    g, t = _load(cfg)
    _instance(report, g, t)
    try:
        found = brute_force_decompose(g, t, node_budget=cfg.budget or 2_000_000)
    except BudgetExhausted as exc:
        report.add("outcome", "BUDGET")
        report.add("reason", exc)
        report.exit_code = EXIT_FAIL
        return
    if found is None:
        report.add("outcome", "NONE")
        report.exit_code = EXIT_FAIL
        return
    report.add("outcome", "exists")
    report.add("copies", len(found))
    if cfg.out:
        formats.write_text(cfg.out, formats.format_decomposition(g, found))


def cmd_stats(cfg: RunConfig, report: Report) -> None:
    g, t = _load(cfg)
    copies = formats.parse_decomposition(formats.read_text(cfg.decomposition), g, t, cfg.decomposition)
    _instance(report, g, t)
    report.add("copies", len(copies))
    hist = goodness_histogram(copies)
    report.add("goodness", " ".join(f"{k}:{hist[k]}" for k in sorted(hist)))
    deg = degree_table(copies)
    for (v, tv), c in sorted(conflict_table(copies).items()):
        report.add(f"conf.{g.names[v]}|t{tv}", f"{c} d={deg[(v, tv)]}")


COMMANDS = {
    "gen": cmd_gen,
    "colour": cmd_colour,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "stats": cmd_stats,
}


def run(cfg: RunConfig) -> Report:
    report = Report()
    report.add("command", cfg.command)
    start = time.perf_counter()
    try:
        COMMANDS[cfg.command](cfg, report)
    except OSError as exc:
        report.add("outcome", "IO_ERROR")
        report.add("reason", f"{exc.strerror or exc}: {exc.filename}")
        report.exit_code = EXIT_IO
    except InputError as exc:
        report.add("outcome", INFEASIBLE_INPUT)
        report.add("reason", f"{type(exc).__name__}: {exc}")
        report.exit_code = EXIT_INPUT
    except TreeDecompError as exc:
        report.add("outcome", FAILED)
        report.add("reason", f"{type(exc).__name__}: {exc}")
        report.exit_code = EXIT_FAIL
    if cfg.timings:
        report.add("timing.seconds", f"{time.perf_counter() - start:.3f}")
    return report


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    cfg = parse_config(argv)
    report = run(cfg)
    text = formats.format_records(report.records)
    try:
        if cfg.report:
            formats.write_text(cfg.report, text)
        else:
            sys.stdout.write(text)
        if cfg.json:
            formats.write_text(cfg.json, formats.records_json(report.records))
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
