from unittest import TestCase

from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import to_task
from namoplan.mazenamo.grid import GenConfig, generate
from namoplan.mazenamo.render import render_ascii
from namoplan.pddl.model import Plan
from namoplan.pddl.validate import execute_plan

from .. import scenarios

SOLVED_DETOUR = """\
#######
###H###
###.>##
##..###
##L####
#######
#######
"""


class RenderTestCase(TestCase):
    def test_initial_state(self):
        for text in (scenarios.BLOCKED_DETOUR, scenarios.STACKED, scenarios.LIGHT_BOX_CORRIDOR):
            self.assertEqual(render_ascii(scenarios.task(text)), text)

    def test_generated(self):
        for seed in range(5):
            grid = generate(GenConfig(n=10, seed=seed, p_stack_on_heavy=0.3))

            self.assertEqual(render_ascii(to_task(grid)), grid.to_ascii())
            self.assertEqual(render_ascii(grid), grid.to_ascii())

    def test_after_plan(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR)
        state = execute_plan(mazenamo_domain(), task, scenarios.BLOCKED_DETOUR_PLAN)

        self.assertEqual(render_ascii(task, state), SOLVED_DETOUR)

    def test_holding(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR)
        state = execute_plan(mazenamo_domain(), task, Plan(scenarios.BLOCKED_DETOUR_PLAN.steps[:1]))

        text = render_ascii(task, state)

        self.assertEqual(text.splitlines()[3], "##>.###")
        self.assertTrue(text.endswith("robot holds o03_03\n"))

    def test_unsupported(self):
        with self.assertRaises(TypeError):
            render_ascii(42)
