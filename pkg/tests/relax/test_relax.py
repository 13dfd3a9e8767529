import dataclasses
from unittest import TestCase

import numpy as np

from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import to_task
from namoplan.mazenamo.grid import GenConfig, NoFreeCellError, generate
from namoplan.pddl.grounding import ground
from namoplan.pddl.model import Atom, Plan, PlanStep
from namoplan.relax import (GoalEntityMissingError, ImportanceSet, complementary_closure, entities_of_plan,
                            relax_light_boxes, restrict_task, rules_for)
from namoplan.search.planners import Verdict, bfs_oracle

from .. import scenarios


class ImportanceSetTestCase(TestCase):
    def setUp(self):
        self.task = scenarios.task(scenarios.LIGHT_BOX_CORRIDOR)

    def test_anchors(self):
        self.assertEqual(ImportanceSet.anchors(self.task), frozenset({"robot", "p01_05"}))

    def test_for_task(self):
        importance_set = ImportanceSet.for_task(self.task, ["p01_02", "ghost"])

        self.assertEqual(importance_set.entities, frozenset({"robot", "p01_05", "p01_02"}))
        self.assertIn("p01_02", importance_set)
        self.assertEqual(list(importance_set), ["p01_02", "p01_05", "robot"])

    def test_from_scores(self):
        scores = {name: 0.5 for name in self.task.entity_names}
        scores["o01_03"] = 0.9

        importance_set = ImportanceSet.from_scores(self.task, scores, 0.5)
        self.assertEqual(len(importance_set), len(self.task.entities))

        importance_set = ImportanceSet.from_scores(self.task, scores, 0.81)
        self.assertEqual(importance_set.entities, frozenset({"robot", "p01_05", "o01_03"}))

    def test_union_and_order(self):
        small = ImportanceSet.for_task(self.task, ())
        large = small | ["p01_03"]

        self.assertTrue(small <= large)
        self.assertFalse(large <= small)
        self.assertTrue(large <= ImportanceSet.everything(self.task))


class RestrictTaskTestCase(TestCase):
    def setUp(self):
        self.task = scenarios.task(scenarios.LIGHT_BOX_CORRIDOR)

    def test_everything(self):
        self.assertIs(restrict_task(self.task, ImportanceSet.everything(self.task)), self.task)

    def test_drop_box(self):
        restricted = restrict_task(self.task, set(self.task.entity_names) - {"o01_03"})

        self.assertNotIn("o01_03", restricted.entity_names)
        self.assertEqual(restricted.goal, self.task.goal)
        self.assertFalse(any("o01_03" in atom.args for atom in restricted.init))
        # the cell of the dropped box is not made empty
        self.assertNotIn(Atom("isempty", ("p01_03",)), restricted.init)
        restricted.check_against(mazenamo_domain())

    def test_drop_cell(self):
        restricted = restrict_task(self.task, ImportanceSet.for_task(self.task, ["p01_01", "p01_02", "p01_04"]))

        self.assertNotIn(Atom("rightto", ("p01_03", "p01_02")), restricted.init)
        self.assertIn(Atom("rightto", ("p01_02", "p01_01")), restricted.init)

    def test_goal_entity_missing(self):
        with self.assertRaises(GoalEntityMissingError):
            restrict_task(self.task, {"robot", "p01_01"})

    def test_unknown_entity(self):
        with self.assertRaises(ValueError):
            restrict_task(self.task, set(self.task.entity_names) | {"ghost"})


class RelaxLightBoxesTestCase(TestCase):
    def test_corridor(self):
        task = scenarios.task(scenarios.LIGHT_BOX_CORRIDOR)

        relaxed = relax_light_boxes(task)

        self.assertEqual(relaxed.name, task.name + "-relaxed")
        self.assertNotIn("o01_03", relaxed.entity_names)
        self.assertIn(Atom("isempty", ("p01_03",)), relaxed.init)
        self.assertEqual(relaxed.goal, task.goal)
        relaxed.check_against(mazenamo_domain())

    def test_stacked(self):
        task = scenarios.task(scenarios.STACKED)

        relaxed = relax_light_boxes(task)

        self.assertEqual(relaxed.entities_of_type("object"), ("o01_03",))
        self.assertIn(Atom("clear", ("o01_03",)), relaxed.init)
        self.assertIn(Atom("isheavy", ("o01_03",)), relaxed.init)
        # the heavy base still occupies the cell
        self.assertNotIn(Atom("isempty", ("p01_03",)), relaxed.init)

    def test_holding(self):
        task = scenarios.task(scenarios.LIGHT_BOX_CORRIDOR)
        held = task.init - {Atom("oat", ("o01_03", "p01_03")), Atom("onground", ("o01_03",)),
                            Atom("clear", ("o01_03",)), Atom("handempty", ("robot",))}
        held |= {Atom("holding", ("robot", "o01_03")), Atom("isempty", ("p01_03",))}
        task = dataclasses.replace(task, init=frozenset(held))

        relaxed = relax_light_boxes(task)

        self.assertIn(Atom("handempty", ("robot",)), relaxed.init)
        self.assertFalse(any(atom.predicate == "holding" for atom in relaxed.init))

    def test_nothing_to_relax(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR.replace("L", "."))

        self.assertIs(relax_light_boxes(task), task)

    def test_keeps_solvability(self):
        checked = 0
        for seed in range(40):
            try:
                task = to_task(generate(GenConfig(n=5, seed=seed)))
            except NoFreeCellError:
                continue
            domain = mazenamo_domain()
            if not bfs_oracle(ground(domain, task)).solved:
                continue

            self.assertIs(bfs_oracle(ground(domain, relax_light_boxes(task))).verdict, Verdict.solved, task.name)
            checked += 1

        self.assertGreater(checked, 3)


class ClosureTestCase(TestCase):
    def setUp(self):
        self.task = scenarios.task(scenarios.STACKED)

    def test_closure(self):
        start = ImportanceSet.for_task(self.task, ["p01_03"])

        closed = complementary_closure(self.task, start)

        self.assertTrue(start <= closed)
        self.assertIn("o01_03", closed)
        self.assertIn("o01_03_top", closed)
        self.assertNotIn("p01_02", closed)

    def test_from_a_box(self):
        closed = complementary_closure(self.task, ImportanceSet.for_task(self.task, ["o01_03_top"]))

        self.assertTrue({"p01_03", "o01_03", "o01_03_top"} <= closed.entities)

    def test_idempotent(self):
        closed = complementary_closure(self.task, ImportanceSet.for_task(self.task, ["p01_03", "p02_02"]))

        self.assertEqual(complementary_closure(self.task, closed), closed)

    def test_monotone(self):
        small = ImportanceSet.for_task(self.task, ["p01_02"])
        large = ImportanceSet.for_task(self.task, ["p01_02", "p01_03"])

        self.assertTrue(complementary_closure(self.task, small) <= complementary_closure(self.task, large))

    def test_laws_on_random_samples(self):
        rng = np.random.default_rng(0)
        samples = 0
        for seed in range(100):
            if samples == 1000:
                break
            try:
                task = to_task(generate(GenConfig(n=5 + seed % 2, seed=seed, p_stack_on_heavy=0.5)))
            except NoFreeCellError:
                continue

            names = task.entity_names
            for _ in range(20):
                small = ImportanceSet.for_task(task, [name for name in names if rng.random() < 0.3])
                large = small | [name for name in names if rng.random() < 0.3]

                closed = complementary_closure(task, small)

                self.assertTrue(small <= closed)
                self.assertEqual(complementary_closure(task, closed), closed)
                self.assertTrue(closed <= complementary_closure(task, large))
                samples += 1

        self.assertEqual(samples, 1000)

    def test_rules(self):
        rules = rules_for("mazenamo")

        self.assertEqual(rules.complementary, (("oat", 0, 1),))
        self.assertEqual(rules.domain(), mazenamo_domain())
        with self.assertRaises(KeyError):
            rules_for("blocksworld")


class EntitiesOfPlanTestCase(TestCase):
    def test_entities(self):
        plan = Plan((PlanStep("turn_left_from_up", ("robot",)), PlanStep("move_left", ("robot", "p01_02", "p01_01"))))

        self.assertEqual(entities_of_plan(plan), frozenset({"robot", "p01_01", "p01_02"}))
        self.assertEqual(entities_of_plan(Plan()), frozenset())
