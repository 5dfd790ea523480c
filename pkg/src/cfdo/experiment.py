"""Multi-run, multi-algorithm comparisons and their reports.

Run ``k`` of every algorithm uses seed ``base_seed + k``, so any single run
can be replayed in isolation.  Runs are independent jobs and may execute in
a process pool; results are collected in job order, so reports do not depend
on the worker count.
"""

import csv
import dataclasses
import datetime
import io
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Tuple

import numpy as np

from . import __version__
from .chaos import MapKind
from .exceptions import ConfigError, DegenerateSampleError, UnknownObjectiveError
from .objectives import get_objective, load_transform, registry_names
from .optimizer import CLAMP, REDRAW, FdoConfig, optimize
from .problems import (
    assignment_objective,
    load_assignment,
    pressure_vessel_objective,
    table14_instance,
)
from .stats import SampleSet, aggregate, ranksum

__all__ = [
    "AlgorithmSpec",
    "ExperimentConfig",
    "ReportRow",
    "ExperimentReport",
    "CSV_HEADER",
    "INSUFFICIENT_RUNS",
    "parse_algorithms",
    "build_objective",
    "run_experiment",
    "read_config_file",
]

CSV_HEADER = ("label", "mean", "std", "p_value", "significant", "runs", "pop", "iters", "seed")
INSUFFICIENT_RUNS = "insufficient runs"
PROBLEMS = ("pressure_vessel", "task_assignment")


@dataclasses.dataclass(frozen=True)
class AlgorithmSpec:
    """``map_name=None`` is the Levy/uniform baseline."""

    map_name: Optional[str] = None

    @property
    def label(self):
        return self.config().label

    def config(self, **kwargs):
        if self.map_name is None:
            return FdoConfig.fdo(**kwargs)
        return FdoConfig.cfdo(self.map_name, **kwargs)

    @classmethod
    def parse(cls, token):
        """Accept ``fdo``, ``cfdo`` (Singer), ``cfdo:<map>`` or ``CFDO<k>``."""
        text = token.strip().lower()
        if text == "fdo":
            return cls(None)
        if text == "cfdo":
            return cls(MapKind.SINGER.value)
        match = re.fullmatch(r"cfdo(?::(.+)|(\d+))", text)
        if not match:
            raise ConfigError(f"unknown algorithm {token!r}; use fdo, cfdo, cfdo:<map> or CFDO<k>", "--algos")
        name = match.group(1) or match.group(2)
        try:
            return cls(MapKind.from_name(name).value)
        except ValueError as exc:
            raise ConfigError(str(exc), "--algos") from None


def parse_algorithms(text):
    specs = tuple(AlgorithmSpec.parse(tok) for tok in text.split(",") if tok.strip())
    if not specs:
        raise ConfigError("at least one algorithm is required", "--algos")
    return specs


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Settings of a comparison.  The first algorithm is the baseline."""

    algorithms: Tuple[AlgorithmSpec, ...] = (AlgorithmSpec(None), AlgorithmSpec("singer"))
    objective: str = "F4"
    population: int = 30
    iterations: int = 50
    runs: int = 30
    base_seed: int = 0
    wf: float = 0.0
    boundary: str = REDRAW
    workers: int = 1
    instance: Optional[str] = None
    transform: Optional[str] = None
    dimension: Optional[int] = None

    def __post_init__(self):
        algorithms = self.algorithms
        if isinstance(algorithms, str):
            algorithms = parse_algorithms(algorithms)
        object.__setattr__(self, "algorithms", tuple(algorithms))
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required", "--algos")
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate algorithms in {','.join(labels)}", "--algos")
        for flag, value in (("--pop", self.population), ("--iters", self.iterations),
                            ("--runs", self.runs), ("--workers", self.workers)):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"must be a positive integer, got {value!r}", flag)
        if not 0.0 <= self.wf <= 1.0:
            raise ConfigError(f"must lie in [0, 1], got {self.wf}", "--wf")
        if self.boundary not in (REDRAW, CLAMP):
            raise ConfigError(f"must be redraw or clamp, got {self.boundary!r}", "--boundary")
        # fail before any run starts
        build_objective(self)

    def as_dict(self):
        out = dataclasses.asdict(self)
        out["algorithms"] = [a.label for a in self.algorithms]
        return out


def build_objective(config):
    """Resolve the configured objective, raising :class:`ConfigError` on bad input."""
    name = config.objective
    if name == "pressure_vessel":
        return pressure_vessel_objective(track_feasible=True)
    if name == "task_assignment":
        try:
            inst = table14_instance() if config.instance is None else load_assignment(config.instance)
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc), "--instance") from None
        return assignment_objective(inst)
    try:
        spec = get_objective(name, config.dimension)
    except UnknownObjectiveError:
        valid = ", ".join(list(PROBLEMS) + registry_names())
        raise ConfigError(f"unknown objective {name!r}; valid: {valid}", "--fn") from None
    except ValueError as exc:
        raise ConfigError(str(exc), "--dim") from None
    if config.transform is not None:
        try:
            spec = spec.with_transform(load_transform(config.transform, spec.dimension))
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc), "--transform") from None
    return spec


def _run_job(job):
    config, algorithm, seed = job
    objective = build_objective(config)
    fdo_config = algorithm.config(
        population=config.population,
        iterations=config.iterations,
        wf=config.wf,
        boundary=config.boundary,
        seed=seed,
    )
    record = optimize(fdo_config, objective)
    final = record.best_fitness
    recorder = objective.function
    if config.objective == "pressure_vessel" and math.isfinite(recorder.best_cost):
        # report the cheapest feasible design rather than the penalized optimum
        final = recorder.best_cost
    return {
        "seed": seed,
        "final": float(final),
        "best_fitness": float(record.best_fitness),
        "evaluations": record.evaluations,
        "trace": record.trace.tolist(),
    }


@dataclasses.dataclass
class ReportRow:
    label: str
    mean: float
    std: Optional[float]
    p_value: Optional[float]
    significant: Optional[bool]
    runs: int
    pop: int
    iters: int
    seed: int
    note: str = ""

    def csv_fields(self):
        def num(v):
            return "" if v is None else repr(float(v))

        if self.note:
            flag = self.note
        else:
            flag = "true" if self.significant else "false"
        return [self.label, num(self.mean), num(self.std), num(self.p_value), flag,
                str(self.runs), str(self.pop), str(self.iters), str(self.seed)]


@dataclasses.dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list
    runs: dict
    timestamp: str
    version: str = __version__

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(row.csv_fields())
        return buf.getvalue()

    def to_json(self):
        payload = {
            "metadata": {
                "timestamp": self.timestamp,
                "version": self.version,
                "config": self.config.as_dict(),
            },
            "rows": [dataclasses.asdict(row) for row in self.rows],
            "runs": self.runs,
        }
        return json.dumps(payload, indent=2, allow_nan=True)

    def write(self, path, fmt="csv"):
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", newline="") as fh:
            fh.write(text)


def run_experiment(config, workers=None):
    """Execute every (algorithm, run) pair and assemble the report."""
    workers = config.workers if workers is None else workers
    jobs = [(config, alg, config.base_seed + k) for alg in config.algorithms for k in range(config.runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(job) for job in jobs]

    per_alg = {}
    for (_, alg, _), res in zip(jobs, results):
        per_alg.setdefault(alg.label, []).append(res)

    labels = [alg.label for alg in config.algorithms]
    baseline = SampleSet([r["final"] for r in per_alg[labels[0]]], labels[0])
    rows = []
    for i, label in enumerate(labels):
        sample = SampleSet([r["final"] for r in per_alg[label]], label)
        common = dict(label=label, runs=config.runs, pop=config.population,
                      iters=config.iterations, seed=config.base_seed)
        try:
            mean, std = aggregate(sample)
        except DegenerateSampleError:
            rows.append(ReportRow(mean=float(np.mean(sample.values)), std=None, p_value=None,
                                  significant=None, note=INSUFFICIENT_RUNS, **common))
            continue
        p = 1.0 if i == 0 else ranksum(sample, baseline).p_value
        rows.append(ReportRow(mean=mean, std=std, p_value=p, significant=p < 0.05, **common))
    timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return ExperimentReport(config=config, rows=rows, runs=per_alg, timestamp=timestamp)


FILE_KEYS = {
    "algos": str,
    "fn": str,
    "pop": int,
    "iters": int,
    "runs": int,
    "seed": int,
    "wf": float,
    "boundary": str,
    "workers": int,
    "instance": str,
    "transform": str,
    "dim": int,
    "out": str,
    "format": str,
}


def read_config_file(path):
    """Parse a ``key = value`` file into a flag-name dict.

    Keys use the long flag names without dashes.  ``#`` starts a comment.
    """
    values = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(str(exc), "--config") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in FILE_KEYS:
                raise ConfigError(f"{path}:{lineno}: unrecognized line {line!r}", "--config")
            kind = FILE_KEYS[key]
            try:
                values[key] = kind(value.strip())
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}", "--config") from None
    return values
