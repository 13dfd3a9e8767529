import os
import shutil
import tempfile
from unittest import TestCase

import namoplan
from namoplan.core import settings


class NamoTestCase(TestCase):
    """Runs every test in a fresh temporary folder with ``result_dir`` pointing into it."""
    def setUp(self):
        self.test_dir = tempfile.mkdtemp()
        self.cwd = os.getcwd()
        os.chdir(self.test_dir)

        self._settings = settings.with_new_settings()
        self._settings.__enter__()
        namoplan.set_setting("result_dir", "results")

    def tearDown(self):
        self._settings.__exit__(None, None, None)
        os.chdir(self.cwd)
        shutil.rmtree(self.test_dir)

    def write_file(self, file_name, text):
        with open(file_name, "w") as f:
            f.write(text)
        return os.path.abspath(file_name)


class SteppingClock:
    """A clock advancing by ``step`` seconds on every reading."""
    def __init__(self, step):
        self.step = step
        self.time = 0.0

    def now(self):
        now = self.time
        self.time += self.step
        return now

    def tick(self):
        pass
