"""
Plan validation on the lifted representation.

This does not use the grounder, so it also serves as an independent check of plans
produced on grounded (and possibly pruned) problems.
"""
from dataclasses import dataclass
from typing import FrozenSet, Optional

from namoplan.pddl.model import Atom, TaskDefinitionError

INAPPLICABLE = "inapplicable"
GOAL_UNSATISFIED = "goal-unsatisfied"


class InvalidPlanError(ValueError):
    """Raised where a plan has to be valid but is not."""


@dataclass(frozen=True)
class PlanValidation:
    """
    Verdict of :func:`validate_plan`. Truthy iff the plan is valid.
    For invalid plans, ``failed_step`` is the index of the first inapplicable step,
    or the plan length if only the goal is unsatisfied.
    """
    valid: bool
    failed_step: Optional[int] = None
    reason: Optional[str] = None
    message: str = ""
    final_state: FrozenSet[Atom] = frozenset()

    def __bool__(self):
        return self.valid


def _ground_step(domain, task, step):
    schema = domain.action(step.action)
    if len(step.args) != len(schema.parameters):
        raise TaskDefinitionError(f"{step} needs {len(schema.parameters)} arguments")

    for arg, (_, type_name) in zip(step.args, schema.parameters):
        if arg not in task.entity_types:
            raise TaskDefinitionError(f"Unknown entity {arg} in plan step {step}")
        if task.entity_types[arg] != type_name:
            raise TaskDefinitionError(f"Entity {arg} in plan step {step} is not a {type_name}")

    return schema.instantiate(step.args)


def validate_plan(domain, task, plan):
    """
    Execute the plan from the initial state of the task.

    Raises:
        TaskDefinitionError: if a step names an unknown action or entity or is badly typed.
    """
    state = set(task.init)

    for index, step in enumerate(plan):
        pre, add, delete = _ground_step(domain, task, step)
        missing = sorted(pre - state)
        if missing:
            return PlanValidation(valid=False, failed_step=index, reason=INAPPLICABLE,
                                  message=f"Step {index} {step}: precondition {missing[0]} does not hold",
                                  final_state=frozenset(state))
        state -= delete
        state |= add

    missing = sorted(task.goal - state)
    if missing:
        return PlanValidation(valid=False, failed_step=len(plan), reason=GOAL_UNSATISFIED,
                              message=f"Goal atom {missing[0]} does not hold after the plan",
                              final_state=frozenset(state))

    return PlanValidation(valid=True, final_state=frozenset(state))


def execute_plan(domain, task, plan):
    """Final state of a plan which has to be applicable (the goal does not need to hold)."""
    result = validate_plan(domain, task, plan)
    if result.reason == INAPPLICABLE:
        raise InvalidPlanError(result.message)
    return result.final_state
