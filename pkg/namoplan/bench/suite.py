"""
Benchmark harness: every (instance, method, seed) of a manifest is run under the budget
of the instance size, each run is checked and the records are folded into a report.
"""
import dataclasses
import logging
import os
import warnings
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import cachetools
from cachetools.keys import hashkey

from namoplan.bench.report import read_report
from namoplan.cli.runner import run_luigi
from namoplan.core.settings import get_setting
from namoplan.core.utils import get_git_hash, product_dict
from namoplan.gnn.model import GNNScorer
from namoplan.gnn.weights import load_cached
from namoplan.mazenamo.dataset import load_instance, load_manifest
from namoplan.mazenamo.difficulty import DEFAULT_BUDGETS, budget_for_size
from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import to_task
from namoplan.pddl.validate import validate_plan
from namoplan.pipeline.config import PipelineConfig
from namoplan.pipeline.methods import LEARNED_METHODS, METHODS, run_method

logger = logging.getLogger(__name__)

ALL_METHODS = ("pure", "ploi", "ploi+comp", "ploi+relax", "flax")

# fraction of the budget within which a run's outcome may depend on timing jitter
BOUNDARY_FRACTION = 0.05
# slack of the budget law, one expansion latency is far below
BUDGET_SLACK = 0.05


def default_parallelism():
    return max(1, (os.cpu_count() or 2) - 1)


@dataclass(frozen=True)
class SuiteConfig:
    manifest: str
    methods: Tuple[str, ...] = ALL_METHODS
    budgets: Dict[int, float] = field(default_factory=lambda: dict(DEFAULT_BUDGETS))
    seeds: Tuple[int, ...] = (0,)
    model: Optional[str] = None
    parallelism: int = field(default_factory=default_parallelism)
    levels: Optional[Tuple[str, ...]] = None
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    def __post_init__(self):
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"Unknown methods {sorted(unknown)}, use some of {list(ALL_METHODS)}")
        if not self.methods:
            raise ValueError("Need at least one method")
        if not self.seeds:
            raise ValueError("Need at least one seed")
        if any(not budget > 0 for budget in self.budgets.values()):
            raise ValueError(f"Budgets need to be positive, got {self.budgets}")
        if self.parallelism < 1:
            raise ValueError("Parallelism needs to be at least 1")
        if self.model is None and self.learned_methods:
            raise ValueError(f"Methods {self.learned_methods} need a model")

    @classmethod
    def from_settings(cls, manifest, task=None, **overrides):
        budgets = get_setting("budgets", default=DEFAULT_BUDGETS, task=task)
        values = dict(methods=tuple(get_setting("methods", default=ALL_METHODS, task=task)),
                      budgets={int(n): float(budget) for n, budget in budgets.items()},
                      seeds=tuple(get_setting("seeds", default=(0,), task=task)),
                      parallelism=int(get_setting("parallelism", default=default_parallelism(), task=task)),
                      pipeline=PipelineConfig.from_settings(task=task))
        values.update(overrides)
        return cls(manifest=manifest, **values)

    @property
    def learned_methods(self):
        return tuple(method for method in self.methods if method in LEARNED_METHODS)

    def budget_for(self, n):
        return budget_for_size(n, budgets=self.budgets)

    def to_record(self):
        record = dataclasses.asdict(self)
        record["budgets"] = {str(n): budget for n, budget in sorted(self.budgets.items())}
        return record


def _task_key(manifest, record):
    return hashkey(os.path.abspath(manifest), record["id"])


@cachetools.cached(cache=cachetools.LRUCache(maxsize=256), key=_task_key)
def _load_task(manifest, record):
    return to_task(load_instance(manifest, record))


def check_run(task, result, domain=None):
    """Violations of the harness invariants by one run, empty if there are none."""
    violations = []
    if result.success:
        validation = validate_plan(domain or mazenamo_domain(), task, result.plan)
        if not validation:
            violations.append(f"plan not valid on the original task: {validation.message}")
    if result.elapsed > result.budget + BUDGET_SLACK:
        violations.append(f"elapsed {result.elapsed:.3f} s exceeds the budget of {result.budget} s")

    nested = [result.sets[name] for name in ("O1", "O2", "O3") if name in result.sets]
    if any(not smaller <= larger for smaller, larger in zip(nested, nested[1:])):
        violations.append(f"importance sets are not nested: {result.set_sizes}")
    return violations


def run_instance(manifest, record, method, seed, model=None, pipeline=None):
    """
    One planning run on a manifest instance under its size's budget (given by the record).
    Returns the run record including the checks of the harness.
    """
    task = _load_task(manifest, record)
    pipeline = dataclasses.replace(pipeline or PipelineConfig(), budget=record["budget"])
    scorer = GNNScorer(load_cached(model)) if method in LEARNED_METHODS else None

    result = run_method(method, task, scorer, pipeline)

    run = result.to_record(instance_id=record["id"], seed=seed)
    run.update(n=record["n"], level=record["level"])
    run["violations"] = check_run(task, result)
    run["boundary_sensitive"] = abs(result.elapsed - result.budget) <= BOUNDARY_FRACTION * result.budget
    if run["boundary_sensitive"]:
        warnings.warn(f"{method} on {record['id']} (seed {seed}) finished within "
                      f"{BOUNDARY_FRACTION:.0%} of its budget, its outcome may depend on timing")
    for violation in run["violations"]:
        logger.error("%s on %s (seed %d): %s", method, record["id"], seed, violation)
    return run


def suite_jobs(cfg):
    """Every run of the suite as ``{"record": ..., "method": ..., "seed": ...}``, records carrying their budget."""
    jobs = []
    for record in load_manifest(cfg.manifest):
        if cfg.levels is not None and record["level"] not in cfg.levels:
            continue
        record = dict(record, budget=cfg.budget_for(record["n"]))
        for args in product_dict(method=cfg.methods, seed=cfg.seeds):
            jobs.append(dict(args, record=record))
    return jobs


def report_header(cfg):
    return {"git_hash": get_git_hash(), "seeds_vary": "method seeds, instances fixed by the manifest",
            "config": cfg.to_record()}


def run_suite(cfg):
    """
    Run the suite as a luigi workflow: one planning task per job, built by
    ``cfg.parallelism`` workers, folded into a report by a
    :obj:`~namoplan.bench.tasks.BenchmarkTask`. Returns the report it wrote.
    Runs finished by an earlier call with the same parameters are not repeated.

    Raises:
        FileNotFoundError: for a missing manifest or model file.
        RuntimeError: if a task of the workflow failed.
    """
    from namoplan.bench.tasks import BenchmarkTask

    if not os.path.exists(cfg.manifest):
        raise FileNotFoundError(f"Manifest {cfg.manifest} does not exist")
    if cfg.learned_methods and not os.path.exists(cfg.model):
        raise FileNotFoundError(f"Model {cfg.model} does not exist")

    task = BenchmarkTask.from_suite_config(cfg)
    logger.info("Running %d jobs with %d workers", len(suite_jobs(cfg)), cfg.parallelism)
    if not run_luigi([task], workers=cfg.parallelism, log_level="WARNING"):
        raise RuntimeError(f"The benchmark of {cfg.manifest} did not finish, see the log of the failed tasks")

    with open(task.get_output_file_name("report.json"), "r") as f:
        return read_report(f.read())
