"""
Workflow tasks: dataset generation, training-set labelling, model training,
single planning runs and the benchmark report. Each task writes into its own
``result_dir/param=value/...`` folder, the luigi scheduler runs the independent
planning runs in parallel (one per worker).
"""
import logging
import os

import numpy as np

import namoplan
from namoplan.bench.report import BenchReport, report_files
from namoplan.bench.suite import ALL_METHODS, SuiteConfig, report_header, run_instance, suite_jobs
from namoplan.core.settings import get_setting
from namoplan.core.utils import dump_json, load_json
from namoplan.gnn.train import TrainConfig, save_curve, train
from namoplan.gnn.weights import save
from namoplan.mazenamo.dataset import TRAINING_SEED_OFFSET, DatasetConfig, build_dataset, iter_instances, load_manifest
from namoplan.mazenamo.difficulty import DEFAULT_BUDGETS
from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import to_task
from namoplan.pipeline.config import PipelineConfig
from namoplan.scenegraph import SceneGraph, encode, label
from namoplan.search.deadline import Deadline
from namoplan.search.planners import plan_task

logger = logging.getLogger(__name__)

DEFAULT_QUOTAS = {"easy": 300, "medium": 200, "hard": 100, "expert": 100}


class InstanceSetTask(namoplan.Task):
    """Generated and classified instances of one split, with their manifest."""
    split = namoplan.Parameter(default="eval")
    sizes = namoplan.ListParameter(default=[10], hashed=True)
    quotas = namoplan.DictParameter(default=DEFAULT_QUOTAS, hashed=True)
    seed = namoplan.IntParameter(default=0)

    def dataset_config(self):
        seed = self.seed + TRAINING_SEED_OFFSET if self.split == "train" else self.seed
        return DatasetConfig.from_settings(task=self, sizes=tuple(self.sizes), quotas=dict(self.quotas),
                                           seed=seed, split=self.split)

    def output(self):
        yield self.add_to_output("manifest.json")

    @namoplan.on_temporary_files
    def run(self):
        manifest = self.get_output_file_name("manifest.json")
        build_dataset(self.dataset_config(), output_dir=os.path.dirname(manifest),
                      manifest_name=os.path.basename(manifest))


@namoplan.requires(InstanceSetTask, split="train")
class TrainingSetTask(namoplan.Task):
    """Scene graphs of the training instances, labelled with the entities of an optimal plan."""
    label_budget = namoplan.FloatParameter(default=30.0)

    def output(self):
        yield self.add_to_output("training_set.json")

    @namoplan.on_temporary_files
    def run(self):
        domain = mazenamo_domain()
        manifest = self.get_input_file_names("manifest.json")[0]

        samples = []
        for record, grid in iter_instances(manifest):
            task = to_task(grid)
            outcome = plan_task(domain, task, Deadline(self.label_budget), optimal=True)
            if not outcome.solved:
                logger.warning("No optimal plan for %s within %s s (%s), skipping it",
                               record["id"], self.label_budget, outcome.verdict.value)
                continue
            samples.append({"id": record["id"], "graph": encode(task, domain).to_record(),
                            "labels": label(task, outcome.plan, domain).tolist(),
                            "plan": [str(step) for step in outcome.plan]})

        logger.info("Labelled %d training instances", len(samples))
        dump_json(samples, self.get_output_file_name("training_set.json"))


def load_training_set(file_name):
    return [(SceneGraph.from_record(sample["graph"]), np.array(sample["labels"], dtype=float))
            for sample in load_json(file_name)]


@namoplan.requires(TrainingSetTask)
class TrainModelTask(namoplan.Task):
    train_seed = namoplan.IntParameter(default=0)
    epochs = namoplan.IntParameter(default=500)
    step_size = namoplan.FloatParameter(default=1e-3)
    untied_rounds = namoplan.BoolParameter(default=False)

    def output(self):
        yield self.add_to_output("weights.json")
        yield self.add_to_output("curve.csv")

    @namoplan.on_temporary_files
    def run(self):
        samples = load_training_set(self.get_input_file_names("training_set.json")[0])
        cfg = TrainConfig.from_settings(task=self, seed=self.train_seed, epochs=self.epochs,
                                        step_size=self.step_size, untied_rounds=self.untied_rounds)
        params, curve = train(samples, cfg)

        save(params, self.get_output_file_name("weights.json"))
        save_curve(curve, self.get_output_file_name("curve.csv"))


def _manifest_record(manifest, instance_id):
    for record in load_manifest(manifest):
        if record["id"] == instance_id:
            return record
    raise ValueError(f"Instance {instance_id} is not part of {manifest}")


class PlanRunTask(namoplan.Task):
    """One method on one instance with one seed. ``pipeline`` overrides settings of the pipeline config."""
    manifest = namoplan.Parameter(hashed=True)
    instance_id = namoplan.Parameter()
    method = namoplan.Parameter()
    seed = namoplan.IntParameter(default=0)
    budget = namoplan.FloatParameter()
    model = namoplan.Parameter(default="", hashed=True)
    pipeline = namoplan.DictParameter(default={}, hashed=True)

    def output(self):
        yield self.add_to_output("run.json")

    @namoplan.on_temporary_files
    def run(self):
        record = dict(_manifest_record(self.manifest, self.instance_id), budget=self.budget)
        pipeline = PipelineConfig.from_settings(task=self, **self.pipeline)
        run = run_instance(self.manifest, record, self.method, self.seed, self.model or None, pipeline)
        dump_json(run, self.get_output_file_name("run.json"))


class BenchmarkTask(namoplan.Task):
    """
    All planning runs of a manifest, folded into report.md, report.csv, report.json and runs.jsonl.
    Empty ``levels`` run every level, empty ``budgets`` take the budgets setting.
    """
    manifest = namoplan.Parameter(hashed=True)
    model = namoplan.Parameter(default="", hashed=True)
    methods = namoplan.ListParameter(default=list(ALL_METHODS), hashed=True)
    seeds = namoplan.ListParameter(default=[0], hashed=True)
    levels = namoplan.ListParameter(default=[], hashed=True)
    budgets = namoplan.DictParameter(default={}, hashed=True)
    pipeline = namoplan.DictParameter(default={}, hashed=True)

    @classmethod
    def from_suite_config(cls, cfg):
        pipeline = cfg.pipeline.to_record()
        del pipeline["budget"]
        return cls(manifest=os.path.abspath(cfg.manifest), model=os.path.abspath(cfg.model) if cfg.model else "",
                   methods=list(cfg.methods), seeds=list(cfg.seeds), levels=list(cfg.levels or ()),
                   budgets={str(n): budget for n, budget in sorted(cfg.budgets.items())}, pipeline=pipeline)

    def suite_config(self):
        budgets = self.budgets or get_setting("budgets", default=DEFAULT_BUDGETS)
        return SuiteConfig.from_settings(self.manifest, task=self, methods=tuple(self.methods),
                                         seeds=tuple(self.seeds), model=self.model or None,
                                         levels=tuple(self.levels) or None,
                                         budgets={int(n): float(budget) for n, budget in budgets.items()},
                                         pipeline=PipelineConfig.from_settings(task=self, **self.pipeline))

    def requires(self):
        for job in suite_jobs(self.suite_config()):
            yield PlanRunTask(manifest=self.manifest, instance_id=job["record"]["id"], method=job["method"],
                              seed=job["seed"], budget=job["record"]["budget"], model=self.model,
                              pipeline=self.pipeline)

    def output(self):
        for file_name in ("report.md", "report.csv", "report.json", "runs.jsonl"):
            yield self.add_to_output(file_name)

    @namoplan.on_temporary_files
    def run(self):
        records = [load_json(file_name) for file_name in self.get_input_file_names("run.json")]
        report = BenchReport.from_records(records, header=report_header(self.suite_config()))

        for file_name, text in report_files(report).items():
            with open(self.get_output_file_name(file_name), "w") as f:
                f.write(text)


def preset_tasks(preset, seed=0):
    """The evaluation instances and the trained model of a preset, both needed before its benchmark can be set up."""
    instances = InstanceSetTask(split="eval", sizes=list(preset.sizes), quotas=dict(preset.quotas), seed=seed)
    model = TrainModelTask(sizes=[min(preset.sizes)], quotas=dict(preset.training_quotas), seed=seed)
    return instances, model


def preset_benchmark(preset, instances, model):
    """The benchmark of a preset over the outputs of :func:`preset_tasks`."""
    return BenchmarkTask(manifest=os.path.abspath(instances.get_output_file_name("manifest.json")),
                         model=os.path.abspath(model.get_output_file_name("weights.json")),
                         methods=list(preset.methods), seeds=list(preset.seeds),
                         budgets={str(n): budget for n, budget in sorted(preset.budgets.items())})
