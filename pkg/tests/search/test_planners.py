import dataclasses
from unittest import TestCase

from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import to_task
from namoplan.mazenamo.grid import GenConfig, NoFreeCellError, generate
from namoplan.pddl.grounding import ground
from namoplan.pddl.model import Atom
from namoplan.pddl.validate import validate_plan
from namoplan.search.deadline import Deadline, VirtualClock
from namoplan.search.planners import (ORACLE_ATOM_LIMIT, Verdict, bfs_oracle, plan_task, solve_optimal,
                                      solve_satisficing)

from .. import scenarios


def grounded(task):
    return ground(mazenamo_domain(), task, reachable_only=True)


class SatisficingTestCase(TestCase):
    def test_blocked_detour(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR)

        outcome = solve_satisficing(grounded(task), Deadline(60))

        self.assertEqual(outcome.verdict, Verdict.solved)
        self.assertLessEqual(len(outcome.plan), 18)
        self.assertTrue(validate_plan(mazenamo_domain(), task, outcome.plan))
        self.assertGreater(outcome.stats.expansions, 0)

    def test_goal_holds_initially(self):
        task = scenarios.task(scenarios.EMPTY_CORRIDOR)
        task = dataclasses.replace(task, goal=frozenset({Atom("rat", ("robot", "p01_01"))}))

        outcome = solve_satisficing(grounded(task), Deadline(1))

        self.assertTrue(outcome.solved)
        self.assertEqual(len(outcome.plan), 0)
        self.assertEqual(outcome.stats.expansions, 0)

    def test_walled_in(self):
        outcome = solve_satisficing(grounded(scenarios.task(scenarios.WALLED_IN)), Deadline(10))

        self.assertEqual(outcome.verdict, Verdict.unsolvable)
        self.assertIsNone(outcome.plan)

    def test_carries_the_light_box(self):
        task = scenarios.task(scenarios.LIGHT_BOX_CORRIDOR)

        outcome = solve_satisficing(grounded(task), Deadline(60))

        self.assertTrue(outcome.solved)
        self.assertTrue(validate_plan(mazenamo_domain(), task, outcome.plan))
        self.assertIn("o01_03", {arg for step in outcome.plan for arg in step.args})

    def test_timed_out(self):
        clock = VirtualClock(1e-4)
        outcome = solve_satisficing(grounded(scenarios.task(scenarios.BLOCKED_DETOUR)), Deadline(1e-4, clock=clock))

        self.assertEqual(outcome.verdict, Verdict.timed_out)
        self.assertIsNone(outcome.plan)
        self.assertEqual(outcome.stats.expansions, 0)

    def test_deterministic(self):
        problem = grounded(scenarios.task(scenarios.BLOCKED_DETOUR))

        first = solve_satisficing(problem, Deadline(60))
        second = solve_satisficing(problem, Deadline(60))

        self.assertEqual(first.plan, second.plan)
        self.assertEqual(first.stats.expansions, second.stats.expansions)


class OptimalTestCase(TestCase):
    def test_blocked_detour(self):
        outcome = solve_optimal(grounded(scenarios.task(scenarios.BLOCKED_DETOUR)), Deadline(60))

        self.assertTrue(outcome.solved)
        self.assertEqual(len(outcome.plan), len(scenarios.BLOCKED_DETOUR_PLAN))

    def test_corridor(self):
        outcome = solve_optimal(grounded(scenarios.task(scenarios.EMPTY_CORRIDOR)), Deadline(60))

        self.assertEqual([step.action for step in outcome.plan], ["move_right"] * 4)

    def test_walled_in(self):
        outcome = solve_optimal(grounded(scenarios.task(scenarios.WALLED_IN)), Deadline(10))

        self.assertEqual(outcome.verdict, Verdict.unsolvable)

    def test_matches_the_oracle(self):
        compared = 0
        for seed in range(1000):
            if compared == 200:
                break
            try:
                grid = generate(GenConfig(n=5 + seed % 2, seed=seed))
            except NoFreeCellError:
                continue
            oracle = bfs_oracle(ground(mazenamo_domain(), to_task(grid)))
            if not oracle.solved:
                continue

            optimal = solve_optimal(grounded(to_task(grid)), Deadline(60))

            self.assertIs(optimal.verdict, Verdict.solved, grid.to_ascii())
            self.assertEqual(len(optimal.plan), len(oracle.plan), grid.to_ascii())
            compared += 1

        self.assertEqual(compared, 200)

    def test_estimates_only_popped_states(self):
        outcome = solve_optimal(grounded(scenarios.task(scenarios.BLOCKED_DETOUR)), Deadline(60))

        self.assertGreater(outcome.stats.evaluations, 0)
        self.assertLess(outcome.stats.evaluations, outcome.stats.generated)
        self.assertEqual(outcome.to_record()["evaluations"], outcome.stats.evaluations)


class OracleTestCase(TestCase):
    def test_node_limit(self):
        outcome = bfs_oracle(grounded(scenarios.task(scenarios.BLOCKED_DETOUR)), node_limit=1)

        self.assertEqual(outcome.verdict, Verdict.node_limit)

    def test_atom_limit(self):
        problem = grounded(scenarios.task(scenarios.EMPTY_CORRIDOR))
        problem = dataclasses.replace(problem, atoms=problem.atoms * (ORACLE_ATOM_LIMIT // len(problem.atoms) + 1))

        with self.assertRaises(ValueError):
            bfs_oracle(problem)


class PlanTaskTestCase(TestCase):
    def test_plan_task(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR)

        outcome = plan_task(mazenamo_domain(), task, Deadline(60), optimal=True)

        self.assertEqual(len(outcome.plan), 9)
        record = outcome.to_record()
        self.assertEqual(record["verdict"], "solved")
        self.assertEqual(record["plan_length"], 9)
        self.assertEqual(record["plan"][0], str(outcome.plan[0]))

    def test_unsolved_record(self):
        outcome = plan_task(mazenamo_domain(), scenarios.task(scenarios.WALLED_IN), Deadline(10))

        record = outcome.to_record()
        self.assertEqual(record["verdict"], "unsolvable")
        self.assertIsNone(record["plan"])
        self.assertIsNone(record["plan_length"])
