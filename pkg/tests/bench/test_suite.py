import os

import luigi

import namoplan
from namoplan.bench.report import read_report
from namoplan.bench.suite import SuiteConfig, _load_task, check_run, run_instance, run_suite, suite_jobs
from namoplan.bench.tasks import BenchmarkTask
from namoplan.gnn.model import init
from namoplan.gnn.weights import save
from namoplan.mazenamo.dataset import load_manifest
from namoplan.pddl.model import Plan
from namoplan.pipeline.config import PipelineConfig
from namoplan.pipeline.methods import PipelineResult, run_method

from .. import scenarios
from ..helpers import NamoTestCase

EXPANSIONS = PipelineConfig(clock="expansions")


class SuiteConfigTestCase(NamoTestCase):
    def test_invalid(self):
        for values in [dict(methods=("astar",)), dict(methods=()), dict(seeds=()), dict(budgets={10: 0.0}),
                       dict(parallelism=0), dict(methods=("pure", "flax"))]:
            with self.subTest(**values):
                with self.assertRaises(ValueError):
                    SuiteConfig(manifest="manifest.json", **values)

    def test_from_settings(self):
        namoplan.set_setting("budgets", {"7": 2.5})
        namoplan.set_setting("methods", ["pure"])
        namoplan.set_setting("parallelism", 1)

        cfg = SuiteConfig.from_settings("manifest.json", seeds=(3,))

        self.assertEqual(cfg.methods, ("pure",))
        self.assertEqual(cfg.budgets, {7: 2.5})
        self.assertEqual(cfg.budget_for(8), 2.5)
        self.assertEqual(cfg.seeds, (3,))
        self.assertEqual(cfg.to_record()["budgets"], {"7": 2.5})

    def test_jobs(self):
        manifest = scenarios.write_manifest({"detour": scenarios.BLOCKED_DETOUR,
                                             "walled": scenarios.WALLED_IN})

        jobs = suite_jobs(SuiteConfig(manifest=manifest, methods=("pure",), seeds=(0, 1), parallelism=1,
                                      levels=("easy",)))

        self.assertEqual([(job["record"]["id"], job["method"], job["seed"]) for job in jobs],
                         [("detour", "pure", 0), ("detour", "pure", 1), ("walled", "pure", 0), ("walled", "pure", 1)])
        self.assertEqual({job["record"]["budget"] for job in jobs}, {5.0})
        self.assertEqual(suite_jobs(SuiteConfig(manifest=manifest, methods=("pure",), levels=("hard",))), [])

    def test_tasks_loaded_once(self):
        manifest = scenarios.write_manifest({"detour": scenarios.BLOCKED_DETOUR})
        record = load_manifest(manifest)[0]

        self.assertIs(_load_task(manifest, record), _load_task(os.path.abspath(manifest), dict(record, budget=1.0)))


class RunSuiteTestCase(NamoTestCase):
    def setUp(self):
        super().setUp()
        self.manifest = scenarios.write_manifest({"detour": scenarios.BLOCKED_DETOUR,
                                                  "walled": scenarios.WALLED_IN})

    def test_pure(self):
        cfg = SuiteConfig(manifest=self.manifest, methods=("pure",), seeds=(0, 1), parallelism=1,
                          pipeline=EXPANSIONS)

        report = run_suite(cfg)

        self.assertEqual(len(report.records), 4)
        self.assertEqual(report.violations, [])
        self.assertEqual(report.row(7, "easy", "pure").sr, 0.5)
        self.assertEqual({run["instance_id"]: run["success"] for run in report.records},
                         {"detour": True, "walled": False})
        self.assertEqual(report.header["config"]["methods"], ["pure"])
        self.assertEqual(report.header["config"]["pipeline"]["clock"], "expansions")

    def test_workflow_outputs(self):
        cfg = SuiteConfig(manifest=self.manifest, methods=("pure",), parallelism=1, levels=("easy",),
                          budgets={7: 2.5}, pipeline=EXPANSIONS)

        report = run_suite(cfg)

        task = BenchmarkTask.from_suite_config(cfg)
        self.assertTrue(task.complete())
        self.assertEqual(len(task.get_input_file_names("run.json")), 2)
        self.assertEqual({run["budget"] for run in report.records}, {2.5})
        self.assertEqual(task.suite_config().pipeline, EXPANSIONS)
        # a second call reads the finished workflow
        self.assertEqual(run_suite(cfg).records, report.records)

    def test_levels(self):
        cfg = SuiteConfig(manifest=self.manifest, methods=("pure",), parallelism=1, levels=("hard",),
                          pipeline=EXPANSIONS)

        self.assertEqual(list(BenchmarkTask.from_suite_config(cfg).requires()), [])

    def test_learned(self):
        save(init(0), "weights.json")
        cfg = SuiteConfig(manifest=self.manifest, methods=("ploi", "flax"), model=os.path.abspath("weights.json"),
                          parallelism=1, levels=("easy",), pipeline=EXPANSIONS)

        report = run_suite(cfg)

        self.assertEqual(len(report.records), 4)
        self.assertEqual(report.violations, [])
        for run in report.records:
            if run["method"] == "flax" and run["instance_id"] == "detour":
                self.assertEqual(set(run["set_sizes"]), {"O1", "O2", "O3"})

    def test_missing_files(self):
        with self.assertRaises(FileNotFoundError):
            run_suite(SuiteConfig(manifest="missing.json", methods=("pure",)))
        with self.assertRaises(FileNotFoundError):
            run_suite(SuiteConfig(manifest=self.manifest, methods=("flax",), model="missing.json"))

    def test_boundary_warning(self):
        record = dict(load_manifest(self.manifest)[0], budget=0.5)
        pipeline = PipelineConfig(clock="expansions", seconds_per_expansion=0.125)

        with self.assertWarns(UserWarning):
            run = run_instance(self.manifest, record, "pure", 0, pipeline=pipeline)

        self.assertTrue(run["boundary_sensitive"])
        self.assertFalse(run["success"])
        self.assertEqual(run["violations"], [])


class CheckRunTestCase(NamoTestCase):
    def test_clean(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR)

        self.assertEqual(check_run(task, run_method("pure", task, None, EXPANSIONS)), [])

    def test_violations(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR)
        result = PipelineResult(method="flax", success=True, plan=Plan(), elapsed=6.0, budget=5.0,
                                sets={"O1": frozenset({"robot", "p02_04"}), "O2": frozenset({"robot"})})

        violations = check_run(task, result)

        self.assertEqual(len(violations), 3)
        self.assertIn("not valid", violations[0])
        self.assertIn("exceeds the budget", violations[1])
        self.assertIn("not nested", violations[2])


class BenchmarkTaskTestCase(NamoTestCase):
    def test_workflow(self):
        namoplan.set_setting("clock", "expansions")
        manifest = scenarios.write_manifest({"detour": scenarios.BLOCKED_DETOUR})
        task = BenchmarkTask(manifest=manifest, methods=["pure"], seeds=[0, 1])

        self.assertTrue(luigi.build([task], local_scheduler=True, log_level="ERROR"))

        with open(task.get_output_file_name("report.json")) as f:
            report = read_report(f.read())
        self.assertEqual(len(report.records), 2)
        self.assertEqual(report.row(7, "easy", "pure").sr, 1.0)
        for file_name in ("report.md", "report.csv", "runs.jsonl"):
            self.assertTrue(os.path.exists(task.get_output_file_name(file_name)))
