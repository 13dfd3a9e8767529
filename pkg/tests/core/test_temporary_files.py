import os

import luigi

from ..helpers import NamoTestCase

import namoplan


class ReportTask(namoplan.Task):
    fail = namoplan.BoolParameter(default=False)

    def output(self):
        yield self.add_to_output("report.md")

    @namoplan.on_temporary_files
    def run(self):
        with open(self.get_output_file_name("report.md"), "w") as f:
            f.write("| method | SR |\n")
            if self.fail:
                raise ValueError("interrupted")
            f.write("| flax | 1.0 |\n")


class TemporaryWrapperTestCase(NamoTestCase):
    def test_failed_temporary_files(self):
        task = ReportTask(fail=True)
        self.assertFalse(luigi.build([task], local_scheduler=True, log_level="ERROR"))

        self.assertFalse(os.path.exists(task.get_output_file_name("report.md")))
        self.assertFalse(task.complete())

    def test_good_temporary_files(self):
        task = ReportTask()
        self.assertTrue(luigi.build([task], local_scheduler=True, log_level="ERROR"))

        with open(task.get_output_file_name("report.md"), "r") as f:
            self.assertEqual(f.read(), "| method | SR |\n| flax | 1.0 |\n")

    def test_reset_output(self):
        task = ReportTask()

        self.assertNotIn("luigi-tmp", task.get_output_file_name("report.md"))
        task.run()
        self.assertNotIn("luigi-tmp", task.get_output_file_name("report.md"))
        self.assertTrue(os.path.exists(task.get_output_file_name("report.md")))
