import os

from ..helpers import NamoTestCase

import namoplan
from namoplan.core.utils import get_filled_params, get_task_file_dir


class TaskTestCase(NamoTestCase):
    def test_file_path_usage(self):
        class RunTask(namoplan.Task):
            seed = namoplan.IntParameter()

            def output(self):
                yield self.add_to_output("run.json")
                yield self.add_to_output("plan.txt")

        task = RunTask(seed=3)

        namoplan.set_setting("result_dir", "results/benchmark")

        self.assertEqual(get_filled_params(task), {"seed": 3})
        self.assertFalse(task.get_input_file_names())
        self.assertRaises(KeyError, lambda: task._get_input_targets("some_file"))
        self.assertEqual(task._get_output_target("run.json").path, task.get_output_file_name("run.json"))
        self.assertIn("run.json", task.get_output_file_name("run.json"))
        self.assertIn("plan.txt", task.get_output_file_name("plan.txt"))
        self.assertIn("seed=3", task.get_output_file_name("run.json"))
        self.assertIn("benchmark", task.get_output_file_name("run.json"))
        self.assertTrue(os.path.isabs(task.get_output_file_name("run.json")))

    def test_dependencies(self):
        class InstancesTask(namoplan.Task):
            seed = namoplan.IntParameter()

            def output(self):
                yield self.add_to_output("manifest.json")

        @namoplan.requires(InstancesTask)
        class ReportTask(namoplan.Task):
            def output(self):
                yield self.add_to_output("report.md")

        task = ReportTask(seed=42)

        self.assertEqual(get_filled_params(task), {"seed": 42})
        self.assertEqual(len(task._get_input_targets("manifest.json")), 1)
        self.assertEqual(len(task.get_input_file_names("manifest.json")), 1)
        self.assertEqual(len(task.get_input_file_names().keys()), 1)
        self.assertEqual(task._get_input_targets("manifest.json")[0].path,
                         task.get_input_file_names("manifest.json")[0])
        self.assertIn("seed=42", task.get_output_file_name("report.md"))
        self.assertTrue(get_task_file_dir(task).endswith(os.path.join("results", "seed=42", "ReportTask")))

    def test_many_dependencies(self):
        class RunTask(namoplan.Task):
            seed = namoplan.IntParameter()

            def output(self):
                yield self.add_to_output("run.json")

        class ReportTask(namoplan.Task):
            def requires(self):
                for i in range(20):
                    yield self.clone(RunTask, seed=i)

        task = ReportTask()

        self.assertEqual(len(task._get_input_targets("run.json")), 20)
        self.assertEqual(len(task.get_input_file_names()["run.json"]), 20)

        input_file_names = ["/".join(x.split("/")[-3:]) for x in task.get_input_file_names("run.json")]
        for i in range(20):
            self.assertIn(f"results/seed={i}/run.json", input_file_names)

    def test_slash_in_parameter_warns(self):
        class PathTask(namoplan.Task):
            manifest = namoplan.Parameter()

            def output(self):
                yield self.add_to_output("run.json")

        with self.assertWarns(UserWarning):
            PathTask(manifest="some/manifest.json").get_output_file_name("run.json")
