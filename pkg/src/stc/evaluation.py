"""Metrics and the full experiment protocol.

Micro-F1 pools confusion counts over every (document, class) pair; macro-F1
averages per-class F1 over all configured classes. Reading size is the mean
fraction of sentences read per test document. The experiment driver sweeps
training fractions and runs, trains both the reading agent and the baseline
on each split (over small regularization grids), and aggregates per-cell
results into deterministic report files.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import corpus as corpus_mod
from .baseline import predict_baseline, train_baseline
from .corpus import CategorySet, Document, RawDocument, Split, TaskMode
from .learn import RolloutConfig, policy_iteration
from .mdp import EpisodeLog, run_episode
from .policy import ClassifierConfig, Greedy, policy_callable

__all__ = [
    "Prediction",
    "micro_f1",
    "macro_f1",
    "reading_size",
    "reading_histogram",
    "evaluate_policy",
    "ExperimentPlan",
    "CellResult",
    "AggregateRow",
    "ExperimentReport",
    "run_experiment",
    "write_report_files",
]


@dataclass(frozen=True)
class Prediction:
    doc_id: str
    y: tuple[int, ...]
    y_hat: tuple[int, ...]


def _pooled_counts(preds: list[Prediction]) -> tuple[int, int, int]:
    tp = fp = fn = 0
    for pred in preds:
        for gold, guess in zip(pred.y, pred.y_hat):
            if guess == 1 and gold == 1:
                tp += 1
            elif guess == 1:
                fp += 1
            elif gold == 1:
                fn += 1
    return tp, fp, fn


def _f1_from_counts(tp: int, fp: int, fn: int) -> float:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def micro_f1(preds: list[Prediction]) -> float:
    if not preds:
        raise ValueError("no predictions")
    return _f1_from_counts(*_pooled_counts(preds))


def macro_f1(preds: list[Prediction], n_categories: int) -> float:
    """Unweighted mean of per-class F1 over all configured classes."""
    if not preds:
        raise ValueError("no predictions")
    total = 0.0
    for k in range(n_categories):
        tp = fp = fn = 0
        for pred in preds:
            gold, guess = pred.y[k], pred.y_hat[k]
            if guess == 1 and gold == 1:
                tp += 1
            elif guess == 1:
                fp += 1
            elif gold == 1:
                fn += 1
        total += _f1_from_counts(tp, fp, fn)
    return total / n_categories


def reading_size(logs: list[EpisodeLog]) -> float:
    if not logs:
        raise ValueError("no episode logs")
    return float(np.mean([log.sentences_read / log.n_sentences for log in logs]))


def reading_histogram(logs: list[EpisodeLog], n_bins: int) -> list[tuple[float, float, int]]:
    """Histogram of per-document read fractions over right-closed bins of (0, 1]."""
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    counts = [0] * n_bins
    for log in logs:
        ratio = log.sentences_read / log.n_sentences
        bin_index = min(n_bins - 1, max(0, math.ceil(ratio * n_bins) - 1))
        counts[bin_index] += 1
    return [(k / n_bins, (k + 1) / n_bins, counts[k]) for k in range(n_bins)]


def evaluate_policy(
    q_policy: Greedy, docs: list[Document], mode: TaskMode
) -> tuple[list[Prediction], list[EpisodeLog]]:
    """Run greedy episodes over a document set, collecting predictions and logs."""
    step = policy_callable(q_policy, mode)
    preds: list[Prediction] = []
    logs: list[EpisodeLog] = []
    for doc in docs:
        log = run_episode(doc, step, mode)
        preds.append(Prediction(doc.id, tuple(int(v) for v in doc.y), log.final_assigned))
        logs.append(log)
    return preds, logs


# ---------------------------------------------------------------------------
# Experiment protocol


@dataclass(frozen=True)
class ExperimentPlan:
    mode: TaskMode
    fractions: tuple[float, ...] = (0.01, 0.05, 0.1, 0.3, 0.5, 0.9)
    n_runs: int = 5
    seed: int = 0
    rollout: RolloutConfig = RolloutConfig()
    stc_lambda_grid: tuple[float, ...] = (1e-3,)
    baseline: ClassifierConfig = ClassifierConfig()
    baseline_lambda_grid: tuple[float, ...] = (1e-5, 1e-4, 1e-3)
    histogram_fraction: float | None = 0.3
    histogram_bins: int = 10
    workers: int = 1

    def __post_init__(self):
        if not self.fractions or not all(0.0 < f < 1.0 for f in self.fractions):
            raise ValueError("fractions must lie strictly between 0 and 1")
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class CellResult:
    method: str  # "stc" | "baseline"
    fraction: float
    run: int
    lam: float
    micro_f1: float | None = None
    macro_f1: float | None = None
    reading_size: float | None = None
    error: str | None = None


@dataclass
class AggregateRow:
    method: str
    fraction: float
    lam: float  # grid choice with the best mean micro-F1
    n_runs: int
    micro_f1_mean: float
    micro_f1_std: float
    macro_f1_mean: float
    macro_f1_std: float
    reading_size_mean: float | None
    reading_size_std: float | None


@dataclass
class ExperimentReport:
    plan: ExperimentPlan
    cells: list[CellResult]
    aggregates: list[AggregateRow]
    histogram: list[tuple[float, float, int]] | None
    complete: bool


def _derived_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def _prepare_split(
    raw_docs: list[RawDocument],
    categories: CategorySet,
    split: Split,
    mode: TaskMode,
) -> tuple[list[Document], list[Document]]:
    by_id = {d.id: d for d in raw_docs}
    train_raw = [by_id[i] for i in split.train_ids]
    test_raw = [by_id[i] for i in split.test_ids]
    vocab = corpus_mod.build_vocabulary(train_raw)
    train_docs = corpus_mod.vectorize_corpus(train_raw, vocab, categories, mode)
    test_docs = corpus_mod.vectorize_corpus(test_raw, vocab, categories, mode)
    return train_docs, test_docs


def _run_split_job(args) -> tuple[list[CellResult], dict[float, list[float]]]:
    """All method/lambda cells for one (fraction, run) split.

    Returns the cells plus, when the split's fraction is the histogram
    fraction, the per-lambda read-fraction lists of the reading agent.
    """
    raw_docs, categories, split, plan, fraction_index = args
    cells: list[CellResult] = []
    ratios_by_lambda: dict[float, list[float]] = {}
    fraction, run = split.train_fraction, split.run_index
    try:
        train_docs, test_docs = _prepare_split(raw_docs, categories, split, plan.mode)
    except Exception as exc:  # noqa: BLE001 - cell errors are recorded, not raised
        message = f"split preparation failed: {exc}"
        for lam in plan.baseline_lambda_grid:
            cells.append(CellResult("baseline", fraction, run, lam, error=message))
        for lam in plan.stc_lambda_grid:
            cells.append(CellResult("stc", fraction, run, lam, error=message))
        return cells, ratios_by_lambda

    n_categories = len(categories)
    for lam_index, lam in enumerate(plan.baseline_lambda_grid):
        cell = CellResult("baseline", fraction, run, lam)
        try:
            cfg = replace(
                plan.baseline,
                lam=lam,
                seed=_derived_seed(plan.seed, 1, fraction_index, run, lam_index),
            )
            model = train_baseline(train_docs, cfg, plan.mode)
            preds = [
                Prediction(d.id, tuple(int(v) for v in d.y), tuple(int(v) for v in predict_baseline(model, d)))
                for d in test_docs
            ]
            cell.micro_f1 = micro_f1(preds)
            cell.macro_f1 = macro_f1(preds, n_categories)
        except Exception as exc:  # noqa: BLE001
            cell.error = str(exc)
        cells.append(cell)

    for lam_index, lam in enumerate(plan.stc_lambda_grid):
        cell = CellResult("stc", fraction, run, lam)
        try:
            classifier = replace(plan.rollout.classifier, lam=lam)
            rollout_cfg = replace(
                plan.rollout,
                classifier=classifier,
                seed=_derived_seed(plan.seed, 2, fraction_index, run, lam_index),
            )
            result = policy_iteration(train_docs, plan.mode, rollout_cfg)
            preds, logs = evaluate_policy(Greedy(result.q), test_docs, plan.mode)
            cell.micro_f1 = micro_f1(preds)
            cell.macro_f1 = macro_f1(preds, n_categories)
            cell.reading_size = reading_size(logs)
            if plan.histogram_fraction is not None and fraction == plan.histogram_fraction:
                ratios_by_lambda[lam] = [log.sentences_read / log.n_sentences for log in logs]
        except Exception as exc:  # noqa: BLE001
            cell.error = str(exc)
        cells.append(cell)
    return cells, ratios_by_lambda


def _aggregate(plan: ExperimentPlan, cells: list[CellResult]) -> list[AggregateRow]:
    rows: list[AggregateRow] = []
    for method, grid in (("baseline", plan.baseline_lambda_grid), ("stc", plan.stc_lambda_grid)):
        for fraction in plan.fractions:
            candidates = []
            for lam in grid:
                group = [
                    c
                    for c in cells
                    if c.method == method and c.fraction == fraction and c.lam == lam and c.error is None
                ]
                if not group:
                    continue
                candidates.append((float(np.mean([c.micro_f1 for c in group])), lam, group))
            if not candidates:
                continue
            # Best mean micro-F1 wins; ties go to the smaller lambda.
            candidates.sort(key=lambda item: (-item[0], item[1]))
            _, lam, group = candidates[0]
            micro = [c.micro_f1 for c in group]
            macro = [c.macro_f1 for c in group]
            reading = [c.reading_size for c in group if c.reading_size is not None]
            rows.append(
                AggregateRow(
                    method=method,
                    fraction=fraction,
                    lam=lam,
                    n_runs=len(group),
                    micro_f1_mean=float(np.mean(micro)),
                    micro_f1_std=float(np.std(micro)),
                    macro_f1_mean=float(np.mean(macro)),
                    macro_f1_std=float(np.std(macro)),
                    reading_size_mean=float(np.mean(reading)) if reading else None,
                    reading_size_std=float(np.std(reading)) if reading else None,
                )
            )
    return rows


def run_experiment(raw_docs: list[RawDocument], plan: ExperimentPlan) -> ExperimentReport:
    """Execute the full fraction x run x method grid.

    Jobs are one (fraction, run) split each; results are merged in job
    order, so the report is identical for any worker count. Failed cells
    carry their error message and mark the report incomplete.
    """
    categories = CategorySet.from_documents(raw_docs)
    jobs = []
    for fraction_index, fraction in enumerate(plan.fractions):
        splits = corpus_mod.make_splits(raw_docs, fraction, plan.n_runs, plan.seed)
        for split in splits:
            jobs.append((raw_docs, categories, split, plan, fraction_index))

    if plan.workers > 1:
        import multiprocessing

        with multiprocessing.get_context("fork").Pool(plan.workers) as pool:
            outcomes = pool.map(_run_split_job, jobs)
    else:
        outcomes = [_run_split_job(job) for job in jobs]

    cells: list[CellResult] = []
    histogram_ratios: dict[float, list[float]] = {}
    for job_cells, ratios_by_lambda in outcomes:
        cells.extend(job_cells)
        for lam, ratios in ratios_by_lambda.items():
            histogram_ratios.setdefault(lam, []).extend(ratios)

    aggregates = _aggregate(plan, cells)

    histogram = None
    if plan.histogram_fraction is not None and histogram_ratios:
        chosen = [
            row.lam
            for row in aggregates
            if row.method == "stc" and row.fraction == plan.histogram_fraction
        ]
        lam = chosen[0] if chosen else sorted(histogram_ratios)[0]
        ratios = histogram_ratios.get(lam, [])
        if ratios:
            counts = [0] * plan.histogram_bins
            for ratio in ratios:
                k = min(plan.histogram_bins - 1, max(0, math.ceil(ratio * plan.histogram_bins) - 1))
                counts[k] += 1
            histogram = [
                (k / plan.histogram_bins, (k + 1) / plan.histogram_bins, counts[k])
                for k in range(plan.histogram_bins)
            ]

    complete = all(c.error is None for c in cells)
    return ExperimentReport(plan=plan, cells=cells, aggregates=aggregates, histogram=histogram, complete=complete)


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report_files(report: ExperimentReport, out_dir) -> dict[str, str]:
    """Emit cells.csv, aggregate.csv, report.json and (when present)
    reading_histogram.csv. Output is byte-deterministic for a fixed plan."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}

    cells_path = out / "cells.csv"
    with open(cells_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "fraction", "run", "lambda", "micro_f1", "macro_f1", "reading_size", "error"])
        for c in report.cells:
            writer.writerow(
                [
                    c.method,
                    _format_value(c.fraction),
                    c.run,
                    _format_value(c.lam),
                    _format_value(c.micro_f1),
                    _format_value(c.macro_f1),
                    _format_value(c.reading_size),
                    c.error or "",
                ]
            )
    written["cells"] = str(cells_path)

    aggregate_path = out / "aggregate.csv"
    with open(aggregate_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "method",
                "fraction",
                "lambda",
                "n_runs",
                "micro_f1_mean",
                "micro_f1_std",
                "macro_f1_mean",
                "macro_f1_std",
                "reading_size_mean",
                "reading_size_std",
            ]
        )
        for row in report.aggregates:
            writer.writerow(
                [
                    row.method,
                    _format_value(row.fraction),
                    row.n_runs,
                    _format_value(row.lam),
                    _format_value(row.micro_f1_mean),
                    _format_value(row.micro_f1_std),
                    _format_value(row.macro_f1_mean),
                    _format_value(row.macro_f1_std),
                    _format_value(row.reading_size_mean),
                    _format_value(row.reading_size_std),
                ]
            )
    written["aggregate"] = str(aggregate_path)

    report_path = out / "report.json"
    payload = {
        "plan": {
            "mode": report.plan.mode,
            "fractions": list(report.plan.fractions),
            "n_runs": report.plan.n_runs,
            "seed": report.plan.seed,
            "stc_lambda_grid": list(report.plan.stc_lambda_grid),
            "baseline_lambda_grid": list(report.plan.baseline_lambda_grid),
            "rollout": {
                "n_states": report.plan.rollout.n_states,
                "rollouts_per_state": report.plan.rollout.rollouts_per_state,
                "iterations": report.plan.rollout.iterations,
            },
            "histogram_fraction": report.plan.histogram_fraction,
            "histogram_bins": report.plan.histogram_bins,
        },
        "complete": report.complete,
        "cells": [asdict(c) for c in report.cells],
        "aggregates": [asdict(a) for a in report.aggregates],
        "histogram": report.histogram,
    }
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")
    written["report"] = str(report_path)

    if report.histogram is not None:
        histogram_path = out / "reading_histogram.csv"
        with open(histogram_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin_lo", "bin_hi", "count"])
            for lo, hi, count in report.histogram:
                writer.writerow([_format_value(lo), _format_value(hi), count])
        written["histogram"] = str(histogram_path)
    return written
