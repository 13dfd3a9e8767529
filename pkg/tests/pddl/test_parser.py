from unittest import TestCase

from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import to_task
from namoplan.mazenamo.grid import GenConfig, NoFreeCellError, generate
from namoplan.pddl.emitter import emit_domain, emit_plan, emit_task
from namoplan.pddl.model import Atom, Plan, PlanStep, TaskDefinitionError
from namoplan.pddl.parser import PDDLParseError, UnsupportedRequirementError, parse_domain, parse_plan, parse_task
from namoplan.relax import relax_light_boxes

from .. import scenarios

TOY_DOMAIN = """
; two cells and a token
(define (domain Toy)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (adjacent ?a - cell ?b - cell))
  (:action step
    :parameters (?from - cell ?to - cell)
    :precondition (and (at ?from) (adjacent ?from ?to))
    :effect (and (at ?to) (not (at ?from)))))
"""

TOY_TASK = """
(define (problem hop)
  (:domain toy)
  (:objects a b - cell)
  (:init (at a) (adjacent a b))
  (:goal (and (at b))))
"""


class ParseDomainTestCase(TestCase):
    def test_mazenamo_domain(self):
        domain = parse_domain(emit_domain(mazenamo_domain()))

        self.assertEqual(len(domain.actions), 32)
        self.assertEqual(len(domain.predicates), 18)
        self.assertEqual(domain, mazenamo_domain())

    def test_toy_domain(self):
        domain = parse_domain(TOY_DOMAIN)

        self.assertEqual(domain.name, "toy")
        self.assertEqual(domain.types, ("cell",))
        self.assertEqual(domain.predicate("adjacent").param_types, ("cell", "cell"))

        step = domain.action("step")
        self.assertEqual(step.parameters, (("?from", "cell"), ("?to", "cell")))
        self.assertEqual(step.add, frozenset({Atom("at", ("?to",))}))
        self.assertEqual(step.delete, frozenset({Atom("at", ("?from",))}))
        self.assertEqual(domain.static_predicates, frozenset({"adjacent"}))

    def test_unsupported_requirement(self):
        text = TOY_DOMAIN.replace(":strips :typing", ":strips :adl")

        with self.assertRaises(UnsupportedRequirementError) as context:
            parse_domain(text)
        self.assertEqual(context.exception.requirement, ":adl")

    def test_negative_precondition(self):
        text = TOY_DOMAIN.replace("(adjacent ?from ?to))", "(not (at ?to)))")

        with self.assertRaises(UnsupportedRequirementError) as context:
            parse_domain(text)
        self.assertEqual(context.exception.requirement, ":negative-preconditions")

    def test_syntax_errors(self):
        with self.assertRaises(PDDLParseError) as context:
            parse_domain(")")
        self.assertEqual((context.exception.line, context.exception.column), (1, 1))

        with self.assertRaises(PDDLParseError) as context:
            parse_domain("(define (domain toy)\n  (:types cell)\n")
        self.assertEqual(context.exception.line, 1)

        with self.assertRaises(PDDLParseError):
            parse_domain("")

        with self.assertRaises(PDDLParseError):
            parse_domain(TOY_DOMAIN.replace("(:types cell)", "(:types cell - place)"))

    def test_undeclared_variable(self):
        with self.assertRaises(PDDLParseError):
            parse_domain(TOY_DOMAIN.replace("(at ?to)", "(at ?elsewhere)"))


class ParseTaskTestCase(TestCase):
    def setUp(self):
        self.domain = parse_domain(TOY_DOMAIN)

    def test_toy_task(self):
        task = parse_task(TOY_TASK, self.domain)

        self.assertEqual(task.name, "hop")
        self.assertEqual(task.entity_names, ("a", "b"))
        self.assertIn(Atom("adjacent", ("a", "b")), task.init)
        self.assertEqual(task.goal, frozenset({Atom("at", ("b",))}))

    def test_arity_mismatch(self):
        with self.assertRaises(TaskDefinitionError):
            parse_task(TOY_TASK.replace("(:init (at a)", "(:init (at a b)"), self.domain)

    def test_unknown_names(self):
        with self.assertRaises(TaskDefinitionError):
            parse_task(TOY_TASK.replace("(:init (at a)", "(:init (on a)"), self.domain)
        with self.assertRaises(TaskDefinitionError):
            parse_task(TOY_TASK.replace("(:init (at a)", "(:init (at c)"), self.domain)
        with self.assertRaises(TaskDefinitionError):
            parse_task(TOY_TASK.replace("a b - cell", "a b - room"), self.domain)
        with self.assertRaises(TaskDefinitionError):
            parse_task(TOY_TASK.replace("(:domain toy)", "(:domain other)"), self.domain)

    def test_empty_init_and_goal(self):
        text = TOY_TASK.replace("(:init (at a) (adjacent a b))", "(:init)").replace("(and (at b))", "(and)")
        task = parse_task(text, self.domain)

        self.assertEqual(task.init, frozenset())
        self.assertEqual(task.goal, frozenset())

    def test_mazenamo_round_trip(self):
        task = scenarios.task(scenarios.BLOCKED_DETOUR)

        self.assertEqual(parse_task(emit_task(task), mazenamo_domain()), task)

    def test_relaxed_round_trip(self):
        for text in (scenarios.LIGHT_BOX_CORRIDOR, scenarios.STACKED, scenarios.BLOCKED_DETOUR):
            relaxed = relax_light_boxes(scenarios.task(text))
            with self.subTest(task=relaxed.name):
                self.assertEqual(parse_task(emit_task(relaxed), mazenamo_domain()), relaxed)

    def test_generated_round_trip(self):
        for seed in range(24):
            try:
                grid = generate(GenConfig(n=5 + seed % 6, seed=seed, p_stack_on_heavy=0.3))
            except NoFreeCellError:
                continue
            task = to_task(grid)
            with self.subTest(task=task.name):
                self.assertEqual(parse_task(emit_task(task), mazenamo_domain()), task)


class ParsePlanTestCase(TestCase):
    def test_plan(self):
        text = "; found by hand\n(step a b)\n\n(STEP b a) ; back\n"
        plan = parse_plan(text)

        self.assertEqual(plan, Plan((PlanStep("step", ("a", "b")), PlanStep("step", ("b", "a")))))
        self.assertEqual(emit_plan(plan), "(step a b)\n(step b a)\n")

    def test_empty_plan(self):
        self.assertEqual(len(parse_plan("")), 0)

    def test_broken_plan(self):
        with self.assertRaises(PDDLParseError):
            parse_plan("(step a (b))")
        with self.assertRaises(PDDLParseError):
            parse_plan("(step a b")
