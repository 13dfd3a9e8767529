import namoplan
from namoplan.pipeline.config import PipelineConfig, threshold_schedule
from namoplan.search.deadline import VirtualClock, WallClock

from ..helpers import NamoTestCase


class ThresholdScheduleTestCase(NamoTestCase):
    def test_default(self):
        schedule = PipelineConfig().thresholds

        self.assertEqual(schedule[:3], (0.81, 0.729, 0.6561))
        self.assertEqual(len(schedule), 20)
        self.assertGreaterEqual(schedule[-1], 0.1)
        self.assertLess(schedule[-1] * 0.9, 0.1)
        self.assertEqual(list(schedule), sorted(schedule, reverse=True))

    def test_floor_is_inclusive(self):
        self.assertEqual(threshold_schedule(0.5, 0.5, 0.125), (0.5, 0.25, 0.125))


class PipelineConfigTestCase(NamoTestCase):
    def test_derived_times(self):
        cfg = PipelineConfig(budget=10.0)

        self.assertEqual(cfg.step1_time, 2.0)
        self.assertEqual(cfg.step2_time, 2.0)
        self.assertEqual(cfg.first_attempt_cap, 1.0)
        self.assertEqual(PipelineConfig(budget=0.5).first_attempt_cap, 0.1)

    def test_invalid(self):
        for values in [dict(budget=0), dict(q_min=0.9), dict(q_max=1.0), dict(gamma=1.0),
                       dict(step1_fraction=0.6, step2_fraction=0.4), dict(step2_fraction=0),
                       dict(min_attempt_cap=0), dict(clock="cpu")]:
            with self.subTest(**values):
                with self.assertRaises(ValueError):
                    PipelineConfig(**values)

    def test_from_settings(self):
        namoplan.set_setting("budget", 12.0)
        namoplan.set_setting("clock", "expansions")

        cfg = PipelineConfig.from_settings(gamma=0.5)

        self.assertEqual(cfg.budget, 12.0)
        self.assertEqual(cfg.gamma, 0.5)
        self.assertEqual(cfg.q_max, 0.81)
        self.assertIsInstance(cfg.make_clock(), VirtualClock)

    def test_clock(self):
        self.assertIsInstance(PipelineConfig().make_clock(), WallClock)

        clock = PipelineConfig(clock="expansions", seconds_per_expansion=0.5).make_clock()
        clock.tick()
        self.assertEqual(clock.now(), 0.5)

    def test_record(self):
        record = PipelineConfig().to_record()

        self.assertEqual(record["budget"], 5.0)
        self.assertTrue(record["fallback_to_full"])
