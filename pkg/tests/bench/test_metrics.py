from types import SimpleNamespace
from unittest import TestCase

from namoplan.bench.metrics import compute_metrics, improvement


class ComputeMetricsTestCase(TestCase):
    def test_mixed(self):
        runs = [{"success": True, "elapsed": 1.0}, {"success": False, "elapsed": 5.0}]

        self.assertEqual(compute_metrics(runs, 5.0), (0.5, 3.0))

    def test_failures_count_with_the_budget(self):
        runs = [{"success": False, "elapsed": 0.5}, {"success": False, "elapsed": 2.0}]

        self.assertEqual(compute_metrics(runs, 4.0), (0.0, 4.0))

    def test_capped_at_the_budget(self):
        self.assertEqual(compute_metrics([{"success": True, "elapsed": 7.0}], 5.0), (1.0, 5.0))

    def test_result_objects(self):
        runs = [SimpleNamespace(success=True, elapsed=2.0), SimpleNamespace(success=True, elapsed=4.0)]

        self.assertEqual(compute_metrics(runs, 10.0), (1.0, 3.0))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            compute_metrics([], 5.0)
        with self.assertRaises(ValueError):
            compute_metrics([{"success": True, "elapsed": 1.0}], 0.0)


class ImprovementTestCase(TestCase):
    def test_improvement(self):
        self.assertEqual(improvement(0.75, 0.5), 50.0)
        self.assertEqual(improvement(0.25, 0.5), -50.0)
        self.assertIsNone(improvement(0.5, 0.0))
