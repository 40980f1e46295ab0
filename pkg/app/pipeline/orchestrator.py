"""Orchestrator: runs the conformance pipeline phase by phase."""
import asyncio
import enum
import logging
import os
import time
from contextlib import contextmanager
from pathlib import Path

from pydantic import BaseModel, Field, field_validator

from app.align.binary_search import align_group
from app.align.cost import reduced_cost
from app.align.search import SearchStats, align_optimal
from app.align.synchronization import Alignment, render, standard_cost
from app.config import (
    DEFAULT_EXPANSION_CAP,
    DEFAULT_STATE_CAP,
    DEFAULT_THREADS,
    FITNESS_DIGITS,
    HYBRID_MIN_REDUCTION,
)
from app.errors import ConcurrentModelUnsupported, ImproperAlignment, PipelineError
from app.extend.extension import extend_alignment
from app.extend.verify import verify_proper
from app.log.dafsa import build_dafsa
from app.log.grouping import distinct_reduced_traces
from app.log.parsers import EventLog, Trace, load_log
from app.model.fsm import Dafsa, ReachabilityGraph
from app.model.petri import WorkflowNet, detect_concurrency
from app.model.pnml import load_pnml
from app.model.reachability import build_reachability_graph, shortest_path_length
from app.pipeline.report import ConformanceReport, OutputFormat, SearchSummary, TraceResult, summarize
from app.tandem.reduction import ReducedTrace, reduce_log
from app.tandem.statistics import log_statistics

logger = logging.getLogger(__name__)


class Approach(str, enum.Enum):
    automata = "automata"
    tandem = "tandem"
    hybrid = "hybrid"


class RunConfig(BaseModel):
    model_path: Path
    log_path: Path
    approach: Approach = Approach.hybrid
    output: OutputFormat = OutputFormat.json
    emit_alignments: bool = False
    verify: bool = False
    timing: bool = True
    threads: int = Field(DEFAULT_THREADS, ge=1)
    state_cap: int = Field(DEFAULT_STATE_CAP, gt=0)
    expansion_cap: int = Field(DEFAULT_EXPANSION_CAP, gt=0)

    @field_validator("model_path", "log_path")
    @classmethod
    def _readable(cls, v: Path) -> Path:
        if not v.is_file() or not os.access(v, os.R_OK):
            raise ValueError(f"{v} is not a readable file")
        return v


@contextmanager
def _phase(name: str, timings: dict[str, float]):
    """Time a pipeline phase and tag any failure with its name."""
    started = time.perf_counter()
    try:
        yield
    except PipelineError:
        raise
    except Exception as exc:
        logger.error("Phase %s failed: %s", name, exc)
        raise PipelineError(name, exc) from exc
    finally:
        timings[name] = timings.get(name, 0.0) + (time.perf_counter() - started) * 1000


def select_approach(
    cfg: RunConfig,
    net: WorkflowNet,
    log: EventLog,
    reductions: dict[int, ReducedTrace] | None = None,
) -> Approach:
    """Resolve hybrid to tandem when traces lose at least two labels on average."""
    concurrency = detect_concurrency(net)
    if concurrency.concurrent:
        raise ConcurrentModelUnsupported(concurrency.witness)
    if cfg.approach is not Approach.hybrid:
        return cfg.approach
    if reductions is None:
        _, reductions = reduce_log(log)
    if not reductions:
        return Approach.automata
    mean = sum(r.k_red for r in reductions.values()) / len(reductions)
    chosen = Approach.tandem if mean >= HYBRID_MIN_REDUCTION else Approach.automata
    logger.info("Hybrid: mean reduction %.2f -> %s", mean, chosen.value)
    return chosen


def fitness(cost: int, length: int, shortest: int) -> float:
    denominator = length + shortest
    if denominator == 0:
        return 1.0
    return round(max(0.0, 1.0 - cost / denominator), FITNESS_DIGITS)


####################################################################
# Worker pool
####################################################################

async def _pooled(jobs: list, threads: int) -> list:
    """Run blocking jobs in worker threads, at most `threads` at a time, keeping job order."""
    semaphore = asyncio.Semaphore(threads)

    async def _limited(job):
        async with semaphore:
            return await asyncio.to_thread(job)

    return await asyncio.gather(*[_limited(job) for job in jobs])


def _group_job(ids: list[int], reductions, D: Dafsa, RG: ReachabilityGraph, cap: int):
    def job():
        stats = SearchStats()
        return align_group(ids, reductions, D, RG, expansion_cap=cap, stats=stats), stats
    return job


def _optimal_job(trace: Trace, D: Dafsa, RG: ReachabilityGraph, cap: int):
    def job():
        stats = SearchStats()
        return align_optimal(trace, D, RG, expansion_cap=cap, stats=stats), stats
    return job


####################################################################
# Pipeline
####################################################################

async def run(cfg: RunConfig) -> ConformanceReport:
    """Run the pipeline; every blocking phase executes in a worker thread."""
    timings: dict[str, float] = {}
    started = time.perf_counter()
    should_verify = cfg.verify or __debug__

    with _phase("model", timings):
        net = await asyncio.to_thread(load_pnml, cfg.model_path)
    with _phase("log", timings):
        log = await asyncio.to_thread(load_log, cfg.log_path)

    reductions: dict[int, ReducedTrace] | None = None
    if cfg.approach is not Approach.automata:
        with _phase("reduction", timings):
            _, reductions = await asyncio.to_thread(reduce_log, log)
    with _phase("selection", timings):
        approach = await asyncio.to_thread(select_approach, cfg, net, log, reductions)
    with _phase("reachability", timings):
        rg = await asyncio.to_thread(build_reachability_graph, net, cfg.state_cap)
        shortest = shortest_path_length(rg)

    stats = SearchStats()
    results: list[TraceResult] = []
    if len(log):
        if approach is Approach.tandem:
            results = await _run_tandem(cfg, log, reductions, rg, shortest, stats, timings, should_verify)
        else:
            results = await _run_automata(cfg, log, rg, shortest, stats, timings, should_verify)

    with _phase("report", timings):
        statistics = await asyncio.to_thread(log_statistics, log, reductions)
        aggregates = summarize(results)
    if reductions is not None:
        distinct_reduced = len({r.rt for r in reductions.values()})
    else:
        distinct_reduced = len(log.variants)
    timings["total"] = (time.perf_counter() - started) * 1000

    report = ConformanceReport(
        approach_requested=cfg.approach.value,
        approach_used=approach.value,
        distinct_traces=len(log.variants),
        distinct_reduced_traces=distinct_reduced,
        shortest_model_path=shortest,
        search=SearchSummary(calls=stats.calls, expansions=stats.expansions),
        statistics=statistics,
        timings_ms={k: round(v, 3) for k, v in timings.items()} if cfg.timing else None,
        results=results,
        **aggregates,
    )
    logger.info(
        "Run finished: %s, %d traces, total cost %d, %d searches",
        approach.value, report.traces, report.total_cost, stats.calls,
    )
    return report


async def _run_tandem(cfg, log, reductions, rg, shortest, stats, timings, should_verify) -> list[TraceResult]:
    groups = distinct_reduced_traces(log, reductions)
    with _phase("dafsa", timings):
        dafsa = await asyncio.to_thread(build_dafsa, groups.keys())

    with _phase("alignment", timings):
        jobs = [_group_job(ids, reductions, dafsa, rg, cfg.expansion_cap) for ids in groups.values()]
        table: dict[int, Alignment] = {}
        for group_table, group_stats in await _pooled(jobs, cfg.threads):
            table.update(group_table)
            stats.merge(group_stats)
    logger.info("Aligned %d groups with %d searches", len(groups), stats.calls)

    return await asyncio.to_thread(
        _extend_results, cfg, log, reductions, table, dafsa, rg, shortest, timings, should_verify,
    )


def _extend_results(cfg, log, reductions, table, dafsa, rg, shortest, timings, should_verify) -> list[TraceResult]:
    results: list[TraceResult] = []
    for trace, ids in log.variants.items():
        reduced = reductions[ids[0]]
        with _phase("extension", timings):
            extended = extend_alignment(table[ids[0]], reduced)
        verified = None
        if should_verify:
            with _phase("verification", timings):
                verified = _verify(extended, trace, dafsa, rg, ids[0])
        cost = standard_cost(extended)
        results.append(TraceResult(
            trace_ids=ids,
            original_length=len(trace),
            reduced_length=len(reduced.rt),
            k_red=reduced.k_red,
            cost=cost,
            fitness=fitness(cost, len(trace), shortest),
            reduced_cost=reduced_cost(table[ids[0]], reduced.p, reduced.tr_c),
            verified=verified,
            alignment=render(extended) if cfg.emit_alignments else None,
        ))
    return results


async def _run_automata(cfg, log, rg, shortest, stats, timings, should_verify) -> list[TraceResult]:
    with _phase("dafsa", timings):
        dafsa = await asyncio.to_thread(build_dafsa, log.variants.keys())

    with _phase("alignment", timings):
        jobs = [_optimal_job(trace, dafsa, rg, cfg.expansion_cap) for trace in log.variants]
        outcomes = await _pooled(jobs, cfg.threads)
    for _, job_stats in outcomes:
        stats.merge(job_stats)

    return await asyncio.to_thread(
        _check_results, cfg, log, outcomes, dafsa, rg, shortest, timings, should_verify,
    )


def _check_results(cfg, log, outcomes, dafsa, rg, shortest, timings, should_verify) -> list[TraceResult]:
    results: list[TraceResult] = []
    for (trace, ids), (alignment, _) in zip(log.variants.items(), outcomes):
        verified = None
        if should_verify:
            with _phase("verification", timings):
                verified = _verify(alignment, trace, dafsa, rg, ids[0])
        cost = standard_cost(alignment)
        results.append(TraceResult(
            trace_ids=ids,
            original_length=len(trace),
            reduced_length=len(trace),
            k_red=0,
            cost=cost,
            fitness=fitness(cost, len(trace), shortest),
            verified=verified,
            alignment=render(alignment) if cfg.emit_alignments else None,
        ))
    return results


def _verify(alignment: Alignment, trace: Trace, dafsa: Dafsa, rg: ReachabilityGraph, tid: int) -> bool:
    outcome = verify_proper(alignment, trace, dafsa, rg)
    if not outcome:
        raise ImproperAlignment(f"trace {tid}: clause {outcome.clause} fails at index {outcome.index}: {outcome.message}")
    return True
