from namoplan.pddl.model import (Atom, ActionSchema, Domain, Entity, Plan, PlanStep, PredicateSchema, Task,
                                 TaskDefinitionError)
from namoplan.pddl.parser import PDDLParseError, UnsupportedRequirementError, parse_domain, parse_task, parse_plan
from namoplan.pddl.emitter import emit_domain, emit_task, emit_plan
from namoplan.pddl.grounding import (GroundAction, GroundedProblem, InapplicableActionError, applicable, apply,
                                     ground, relevant_actions)
from namoplan.pddl.validate import (PlanValidation, InvalidPlanError, validate_plan, execute_plan, INAPPLICABLE,
                                    GOAL_UNSATISFIED)
