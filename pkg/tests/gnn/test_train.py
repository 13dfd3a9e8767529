import json
import os

import numpy as np

import namoplan
from namoplan.gnn.model import forward, init
from namoplan.gnn.train import EmptyDatasetError, TrainConfig, load_curve, save_curve, train
from namoplan.gnn.weights import WeightFileError, load, load_cached, save
from namoplan.scenegraph import encode, label

from .. import scenarios
from ..helpers import NamoTestCase


def samples():
    stacked = scenarios.task(scenarios.STACKED)
    detour = scenarios.task(scenarios.BLOCKED_DETOUR)
    return [(encode(stacked), label(stacked, scenarios.STACKED_DETOUR_PLAN)),
            (encode(detour), label(detour, scenarios.BLOCKED_DETOUR_PLAN))]


class TrainTestCase(NamoTestCase):
    def test_curve(self):
        cfg = TrainConfig(seed=1, epochs=30, step_size=1e-2, mini_batch=2, validation_fraction=0.0)

        params, curve = train(samples(), cfg)

        self.assertEqual([point.epoch for point in curve], list(range(31)))
        self.assertLess(curve[-1].train_loss, curve[0].train_loss)
        self.assertEqual(curve[-1].train_loss, curve[-1].val_loss)
        self.assertTrue(params.tied)

    def test_deterministic(self):
        cfg = TrainConfig(seed=2, epochs=5, step_size=1e-2, validation_fraction=0.0)

        first, _ = train(samples(), cfg)
        second, _ = train(samples(), cfg)

        self.assertTrue(first.equals(second))

    def test_early_stop(self):
        cfg = TrainConfig(seed=0, epochs=100, step_size=0.0, early_stop_patience=3, validation_fraction=0.5)

        params, curve = train(samples(), cfg)

        self.assertEqual(len(curve), 4)
        self.assertTrue(params.equals(init(0)))

    def test_untied(self):
        params, _ = train(samples(), TrainConfig(epochs=1, untied_rounds=True))

        self.assertFalse(params.tied)

    def test_empty(self):
        with self.assertRaises(EmptyDatasetError):
            train([], TrainConfig(epochs=1))

    def test_config(self):
        with self.assertRaises(ValueError):
            TrainConfig(epochs=0)
        with self.assertRaises(ValueError):
            TrainConfig(validation_fraction=1.0)
        with self.assertRaises(ValueError):
            TrainConfig(step_size=-1.0)

        namoplan.set_setting("epochs", 12)
        self.assertEqual(TrainConfig.from_settings().epochs, 12)
        self.assertEqual(TrainConfig.from_settings(epochs=3).epochs, 3)

    def test_curve_file(self):
        _, curve = train(samples(), TrainConfig(epochs=2, validation_fraction=0.5))

        save_curve(curve, "curve.csv")

        self.assertEqual(load_curve("curve.csv"), curve)


class WeightsTestCase(NamoTestCase):
    def test_lossless(self):
        for tied in (True, False):
            params = init(4, tied=tied)

            save(params, "model/weights.json")

            self.assertTrue(load("model/weights.json").equals(params))

    def test_cached(self):
        save(init(4), "weights.json")

        self.assertIs(load_cached("weights.json"), load_cached(os.path.abspath("weights.json")))

    def test_cached_until_modified(self):
        save(init(4), "weights.json")
        first = load_cached("weights.json")
        save(init(5), "weights.json")
        os.utime("weights.json", (0, os.path.getmtime("weights.json") + 10))

        second = load_cached("weights.json")

        self.assertIsNot(first, second)
        self.assertTrue(second.equals(load("weights.json")))
        self.assertIs(load_cached("weights.json"), second)

    def rewrite(self, change):
        save(init(4), "weights.json")
        with open("weights.json") as f:
            data = json.load(f)
        change(data)
        with open("weights.json", "w") as f:
            json.dump(data, f)

    def test_truncated(self):
        save(init(4), "weights.json")
        with open("weights.json") as f:
            text = f.read()
        with open("weights.json", "w") as f:
            f.write(text[:len(text) // 2])

        with self.assertRaises(WeightFileError):
            load("weights.json")

    def test_other_layout(self):
        self.rewrite(lambda data: data.update(fingerprint="0" * 16))
        with self.assertRaises(WeightFileError):
            load("weights.json")

        self.rewrite(lambda data: data.update(node_dim=20))
        with self.assertRaises(WeightFileError):
            load("weights.json")

    def test_bad_arrays(self):
        self.rewrite(lambda data: data["arrays"].pop("decoder.bias"))
        with self.assertRaises(WeightFileError):
            load("weights.json")

        self.rewrite(lambda data: data["arrays"]["decoder.bias"].update(values=[0.0, 1.0]))
        with self.assertRaises(WeightFileError):
            load("weights.json")

    def test_not_a_weight_file(self):
        with open("weights.json", "w") as f:
            json.dump([1, 2, 3], f)
        with self.assertRaises(WeightFileError):
            load("weights.json")

        self.rewrite(lambda data: data.update(version=2))
        with self.assertRaises(WeightFileError):
            load("weights.json")

    def test_scores_survive(self):
        graph = encode(scenarios.task(scenarios.BLOCKED_DETOUR))
        params = init(9)
        save(params, "weights.json")

        np.testing.assert_array_equal(forward(load("weights.json"), graph), forward(params, graph))
