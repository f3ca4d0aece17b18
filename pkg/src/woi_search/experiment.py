"""Repeated seeded runs, summary statistics and CSV/JSON artifacts."""

from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentSpec
from .orchestrator import RunConfig, RunReport, run

logger = logging.getLogger(__name__)

THREADS_ENV = "WOI_SEARCH_THREADS"

SUMMARY_HEADER = ["metric", "mean", "median", "q1", "q3", "min", "max", "count"]
TRAJECTORY_HEADER = ["generation", "median_distance", "q1", "q3"]
BOXPLOT_HEADER = ["evaluations", "min", "q1", "median", "q3", "max"]
COMPARISON_HEADER = ["concept", "simultaneous_avg_gens", "sequential_avg_gens"]
CONCEPT_GENERATIONS_HEADER = ["concept", "mean", "median", "q1", "q3", "min", "max"]


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    median: float
    q1: float
    q3: float
    min: float
    max: float
    count: int

    @classmethod
    def from_values(cls, values) -> "SummaryStats":
        v = np.asarray(list(values), dtype=float)
        if v.size == 0:
            raise ValueError("cannot summarize an empty sample")
        q1, median, q3 = np.percentile(v, [25, 50, 75])
        return cls(float(v.mean()), float(median), float(q1), float(q3),
                   float(v.min()), float(v.max()), int(v.size))

    def row(self, metric: str) -> list:
        return [metric, self.mean, self.median, self.q1, self.q3, self.min, self.max, self.count]


@dataclass
class ExperimentResult:
    reports: list[RunReport]
    summary: dict[str, SummaryStats]
    files: list[str] = field(default_factory=list)
    incomplete_runs: int = 0


class ExperimentIOError(RuntimeError):
    """Artifact writing failed; ``manifest`` lists what was written before the failure."""

    def __init__(self, message: str, manifest: list[str]):
        super().__init__(message)
        self.manifest = manifest


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return 1


def run_many(configs: list[RunConfig], workers: int | None = None) -> list[RunReport]:
    """Run independent configs, in parallel processes when more than one worker is allowed."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(configs) <= 1:
        return [run(cfg) for cfg in configs]
    with ProcessPoolExecutor(max_workers=min(workers, len(configs))) as pool:
        return list(pool.map(run, configs))


def summarize(reports: list[RunReport]) -> dict[str, SummaryStats]:
    """Per-run metrics aggregated over repetitions."""
    metrics: dict[str, list[float]] = {
        "total_generations": [r.totals["generations"] for r in reports],
        "total_evaluations": [r.totals["evaluations"] for r in reports],
        "satisficing_found": [len(r.satisficing) for r in reports],
        "target_reached": [float(r.stop_reason == "target_reached") for r in reports],
    }
    for cid in reports[0].per_concept:
        metrics[f"generations[{cid}]"] = [r.per_concept[cid]["generations"] for r in reports]
        metrics[f"evaluations[{cid}]"] = [r.per_concept[cid]["evaluations"] for r in reports]
    return {name: SummaryStats.from_values(vals) for name, vals in metrics.items()}


def median_trajectories(reports: list[RunReport]) -> dict[str, list[list[float]]]:
    """Median and quartiles of each concept's distance per generation.

    Runs that stopped earlier hold their last recorded distance.
    """
    out = {}
    for cid in reports[0].per_concept:
        series = []
        for r in reports:
            traj = r.per_concept[cid]["trajectory"]
            series.append({int(g): d for g, _, d in traj})
        horizon = max(max(s) for s in series)
        filled = np.empty((len(series), horizon + 1))
        for i, s in enumerate(series):
            last = s[0]
            for g in range(horizon + 1):
                last = s.get(g, last)
                filled[i, g] = last
        q1, med, q3 = np.percentile(filled, [25, 50, 75], axis=0)
        out[cid] = [[g, med[g], q1[g], q3[g]] for g in range(horizon + 1)]
    return out


def distance_boxplot(reports: list[RunReport], checkpoints: int = 20) -> list[list[float]]:
    """Five-number summary of the best concept distance at evaluation checkpoints."""
    top = max(r.progress[-1][0] for r in reports)
    first = min(r.progress[0][0] for r in reports)
    grid = np.unique(np.linspace(first, top, checkpoints).round().astype(int))
    rows = []
    for e in grid:
        values = []
        for r in reports:
            prog = np.asarray(r.progress, dtype=float)
            upto = prog[prog[:, 0] <= e]
            values.append(upto[-1, 1] if len(upto) else prog[0, 1])
        v = np.asarray(values)
        q1, med, q3 = np.percentile(v, [25, 50, 75])
        rows.append([int(e), float(v.min()), float(q1), float(med), float(q3), float(v.max())])
    return rows


def concept_generation_rows(reports: list[RunReport]) -> list[list]:
    rows = []
    for cid in reports[0].per_concept:
        s = SummaryStats.from_values(r.per_concept[cid]["generations"] for r in reports)
        rows.append([cid, s.mean, s.median, s.q1, s.q3, s.min, s.max])
    return rows


def _write_csv(path: Path, header: list[str], rows, manifest: list[str]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    manifest.append(str(path))


def _safe_name(cid: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in cid)


def write_artifacts(result: ExperimentResult, out_dir, outputs) -> list[str]:
    out = Path(out_dir)
    manifest: list[str] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        if "report" in outputs:
            for i, report in enumerate(result.reports):
                path = out / f"run_{i:03d}.json"
                path.write_text(report.to_json())
                manifest.append(str(path))
        if "summary" in outputs:
            _write_csv(out / "summary.csv", SUMMARY_HEADER,
                       [s.row(name) for name, s in result.summary.items()], manifest)
            _write_csv(out / "concept_generations.csv", CONCEPT_GENERATIONS_HEADER,
                       concept_generation_rows(result.reports), manifest)
        if "trajectories" in outputs:
            for cid, rows in median_trajectories(result.reports).items():
                _write_csv(out / f"trajectory_{_safe_name(cid)}.csv", TRAJECTORY_HEADER, rows, manifest)
        if "boxplot" in outputs:
            _write_csv(out / "boxplot.csv", BOXPLOT_HEADER, distance_boxplot(result.reports), manifest)
        path = out / "manifest.json"
        path.write_text(json.dumps({"files": manifest, "complete": True}, indent=2))
    except OSError as exc:
        try:
            (out / "manifest.json").write_text(json.dumps({"files": manifest, "complete": False}))
        except OSError:
            pass
        raise ExperimentIOError(f"failed writing artifacts to {out}: {exc}", manifest) from exc
    return manifest


def run_experiment(spec: ExperimentSpec, out_dir=None, mode: str | None = None,
                   workers: int | None = None) -> ExperimentResult:
    """Run every repetition of ``spec`` and optionally persist the artifacts."""
    reports = run_many(spec.run_configs(mode), workers)
    summary = summarize(reports)
    incomplete = sum(r.stop_reason != "target_reached" for r in reports)
    if incomplete:
        logger.warning("%d of %d runs stopped on budget before reaching the target",
                       incomplete, len(reports))
    result = ExperimentResult(reports, summary, incomplete_runs=incomplete)
    if out_dir is not None:
        result.files = write_artifacts(result, out_dir, spec.outputs)
    return result


@dataclass
class Comparison:
    rows: list[list]
    simultaneous_total: float
    sequential_total: float
    simultaneous: list[RunReport] = field(repr=False, default_factory=list)
    sequential: list[RunReport] = field(repr=False, default_factory=list)

    @property
    def ratio(self) -> float:
        # both modes stopping at initialization cost the same
        if self.sequential_total == 0:
            return 1.0 if self.simultaneous_total == 0 else float("inf")
        return self.simultaneous_total / self.sequential_total

    def as_dict(self) -> dict:
        data = asdict(self)
        data.pop("simultaneous")
        data.pop("sequential")
        data["ratio"] = self.ratio
        return data


def compare_modes(spec: ExperimentSpec, out_dir=None, workers: int | None = None) -> Comparison:
    """Average generations per concept in both modes over matched seeds."""
    sim = run_many(spec.run_configs("simultaneous"), workers)
    seq = run_many(spec.run_configs("sequential"), workers)
    rows = []
    for cid in sim[0].per_concept:
        rows.append([
            cid,
            float(np.mean([r.per_concept[cid]["generations"] for r in sim])),
            float(np.mean([r.per_concept[cid]["generations"] for r in seq])),
        ])
    sim_total = float(np.mean([r.totals["generations"] for r in sim]))
    seq_total = float(np.mean([r.totals["generations"] for r in seq]))
    rows.append(["TOTAL", sim_total, seq_total])
    comparison = Comparison(rows, sim_total, seq_total, sim, seq)
    if out_dir is not None:
        out = Path(out_dir)
        manifest: list[str] = []
        try:
            out.mkdir(parents=True, exist_ok=True)
            _write_csv(out / "comparison.csv", COMPARISON_HEADER, rows, manifest)
        except OSError as exc:
            raise ExperimentIOError(f"failed writing comparison to {out}: {exc}", manifest) from exc
    return comparison
