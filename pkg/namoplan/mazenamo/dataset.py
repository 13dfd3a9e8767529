import collections
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from namoplan.core.settings import get_setting
from namoplan.core.utils import dump_json, load_json
from namoplan.mazenamo.difficulty import DifficultyLevel, budget_for_size, classify
from namoplan.mazenamo.encoding import to_task
from namoplan.mazenamo.grid import GenConfig, MazeGrid, NoFreeCellError, generate
from namoplan.pddl.emitter import emit_task

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
INSTANCE_DIR = "instances"

# training instances are drawn from a separate seed range
TRAINING_SEED_OFFSET = 1_000_000


class QuotaUnreachableError(RuntimeError):
    """Raised when the attempt cap is hit before all level quotas are filled."""


@dataclass
class DatasetConfig:
    sizes: Tuple[int, ...] = (10,)
    quotas: Dict[str, int] = field(default_factory=lambda: {"easy": 300, "medium": 200, "hard": 100, "expert": 100})
    seed: int = 0
    max_attempts: int = 20000
    split: str = "eval"
    p_stack_on_heavy: float = 0.0
    budgets: Optional[Dict[int, float]] = None
    thresholds: Optional[Tuple[float, ...]] = None
    trivial_time: Optional[float] = None

    def __post_init__(self):
        for level, quota in self.quotas.items():
            if DifficultyLevel(level).discarded:
                raise ValueError(f"Can not keep instances of level {level}")
            if quota < 0:
                raise ValueError(f"Negative quota for level {level}")

    @classmethod
    def from_settings(cls, task=None, **overrides):
        values = dict(sizes=tuple(get_setting("dataset_sizes", default=[10], task=task)),
                      quotas=dict(get_setting("quotas", default=cls().quotas, task=task)),
                      seed=int(get_setting("dataset_seed", default=0, task=task)),
                      max_attempts=int(get_setting("max_attempts", default=20000, task=task)))
        values.update(overrides)
        return cls(**values)

    @classmethod
    def training(cls, n=10, count=200, seed=0, **kwargs):
        """The training split: easy instances of one size from their own seed range."""
        return cls(sizes=(n,), quotas={"easy": count}, seed=TRAINING_SEED_OFFSET + seed, split="train", **kwargs)


def _write_instance(output_dir, grid, task, classification):
    instance_dir = os.path.join(output_dir, INSTANCE_DIR)
    os.makedirs(instance_dir, exist_ok=True)

    record = grid.to_record()
    record["level"] = classification.level.value
    record["refSolveTimeSec"] = round(classification.elapsed, 3)
    dump_json(record, os.path.join(instance_dir, f"{grid.instance_id}.json"))

    with open(os.path.join(instance_dir, f"{grid.instance_id}.pddl"), "w") as f:
        f.write(emit_task(task))

    return (os.path.join(INSTANCE_DIR, f"{grid.instance_id}.json"),
            os.path.join(INSTANCE_DIR, f"{grid.instance_id}.pddl"))


def build_dataset(cfg, output_dir=None, planner=None, manifest_name=MANIFEST_NAME):
    """
    Generate and classify mazes seed by seed until every level quota of every size is
    filled. Instance files and the manifest are written to ``output_dir`` if given.
    The manifest is ordered by (size, level, seed).

    Raises:
        QuotaUnreachableError: after ``cfg.max_attempts`` seeds for one size.
    """
    records = []

    for n in cfg.sizes:
        quotas = {DifficultyLevel(level): quota for level, quota in cfg.quotas.items() if quota > 0}
        budget = budget_for_size(n, cfg.budgets)
        counts = collections.Counter()
        discarded = collections.Counter()

        attempt = 0
        while any(counts[level] < quota for level, quota in quotas.items()):
            if attempt >= cfg.max_attempts:
                raise QuotaUnreachableError(f"Size {n}: only {dict((l.value, c) for l, c in counts.items())} of "
                                            f"{cfg.quotas} after {attempt} attempts")
            seed = cfg.seed + attempt
            attempt += 1

            try:
                grid = generate(GenConfig(n=n, seed=seed, p_stack_on_heavy=cfg.p_stack_on_heavy))
            except NoFreeCellError:
                discarded["no-free-cell"] += 1
                continue

            task = to_task(grid)
            classification = classify(task, budget, thresholds=cfg.thresholds, trivial_time=cfg.trivial_time,
                                      planner=planner)
            level = classification.level
            if counts[level] >= quotas.get(level, 0):
                discarded[level.value] += 1
                continue
            counts[level] += 1

            record = {"id": grid.instance_id, "n": n, "seed": seed, "split": cfg.split, "level": level.value,
                      "ref_solve_time": round(classification.elapsed, 3), "budget": budget,
                      "instance": None, "problem": None}
            if output_dir is not None:
                record["instance"], record["problem"] = _write_instance(output_dir, grid, task, classification)
            records.append(record)

        logger.info("Size %d: kept %s after %d attempts, discarded %s", n,
                    {level.value: count for level, count in counts.items()}, attempt, dict(discarded))

    records.sort(key=lambda record: (record["n"], DifficultyLevel(record["level"]).rank, record["seed"]))

    if output_dir is not None:
        dump_json(records, os.path.join(output_dir, manifest_name))
    return records


def load_manifest(manifest_path):
    records = load_json(manifest_path)
    if not isinstance(records, list):
        raise ValueError(f"{manifest_path} is not a dataset manifest")
    return records


def load_instance(manifest_path, record):
    """The grid of one manifest record, instance paths are relative to the manifest."""
    path = os.path.join(os.path.dirname(os.path.abspath(manifest_path)), record["instance"])
    return MazeGrid.from_record(load_json(path))


def iter_instances(manifest_path):
    for record in load_manifest(manifest_path):
        yield record, load_instance(manifest_path, record)
