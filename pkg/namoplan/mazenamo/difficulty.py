import enum
import logging
from dataclasses import dataclass
from typing import Optional

from namoplan.core.settings import get_setting
from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import size_of_task
from namoplan.search.deadline import Deadline, make_clock
from namoplan.search.planners import SearchOutcome, Verdict, plan_task

logger = logging.getLogger(__name__)

DEFAULT_BUDGETS = {10: 5.0, 12: 20.0, 15: 40.0}
DEFAULT_THRESHOLDS = (0.10, 0.25, 0.60, 1.00)
DEFAULT_TRIVIAL_TIME = 0.1


class DifficultyLevel(enum.Enum):
    easy = "easy"
    medium = "medium"
    hard = "hard"
    expert = "expert"
    unsolvable = "unsolvable"
    trivial = "trivial"
    too_hard = "too-hard"

    @property
    def discarded(self):
        return self not in LEVELS

    @property
    def rank(self):
        return list(DifficultyLevel).index(self)


LEVELS = (DifficultyLevel.easy, DifficultyLevel.medium, DifficultyLevel.hard, DifficultyLevel.expert)


def budget_for_size(n, budgets=None, task=None):
    """
    Evaluation budget in seconds for mazes of size n, from the ``budgets`` setting
    (size -> seconds). Sizes without an entry use the closest configured size.
    """
    if budgets is None:
        budgets = get_setting("budgets", default=DEFAULT_BUDGETS, task=task)
    budgets = {int(size): float(seconds) for size, seconds in budgets.items()}

    if n in budgets:
        return budgets[n]
    closest = min(budgets, key=lambda size: (abs(size - n), size))
    return budgets[closest]


def check_thresholds(thresholds):
    thresholds = tuple(float(threshold) for threshold in thresholds)
    if len(thresholds) != len(LEVELS):
        raise ValueError(f"Need {len(LEVELS)} difficulty thresholds, got {len(thresholds)}")
    if any(lower >= upper for lower, upper in zip(thresholds, thresholds[1:])) or thresholds[0] <= 0:
        raise ValueError(f"Difficulty thresholds need to be positive and strictly increasing, got {thresholds}")
    return thresholds


@dataclass(frozen=True)
class Classification:
    level: DifficultyLevel
    elapsed: float
    budget: float
    outcome: Optional[SearchOutcome] = None


def _reference_planner(task, deadline):
    return plan_task(mazenamo_domain(), task, deadline)


def classify(task, budget, thresholds=None, trivial_time=None, clock=None, planner=None):
    """
    Solve the task with the reference satisficing planner within the budget and map the
    solve time to a difficulty level. Levels are inclusive upper bounds, relative to the budget.
    """
    thresholds = check_thresholds(thresholds or get_setting("difficulty_thresholds", default=DEFAULT_THRESHOLDS))
    if trivial_time is None:
        trivial_time = float(get_setting("trivial_time", default=DEFAULT_TRIVIAL_TIME))
    planner = planner or _reference_planner

    deadline = Deadline(budget, clock=clock or make_clock())
    outcome = planner(task, deadline)
    elapsed = outcome.stats.elapsed

    if outcome.verdict is Verdict.unsolvable:
        level = DifficultyLevel.unsolvable
    elif not outcome.solved:
        level = DifficultyLevel.too_hard
    elif elapsed < trivial_time:
        level = DifficultyLevel.trivial
    else:
        level = DifficultyLevel.too_hard
        for candidate, threshold in zip(LEVELS, thresholds):
            if elapsed <= threshold * budget:
                level = candidate
                break

    logger.debug("%s: %s after %.3f s of %.1f s", task.name, level.value, elapsed, budget)
    return Classification(level=level, elapsed=elapsed, budget=budget, outcome=outcome)


def classify_difficulty(task, thresholds=None, budget=None, **kwargs):
    """Difficulty level of the task, the budget defaults to the one of its grid size."""
    if budget is None:
        budget = budget_for_size(size_of_task(task))
    return classify(task, budget, thresholds=thresholds, **kwargs).level
