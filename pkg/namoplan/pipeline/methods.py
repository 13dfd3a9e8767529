"""
Budgeted planning methods: pure planning, pruning with learned importance scores,
its two single-step extensions and the full three step method
(prune, rough plan on the relaxed task, complementary closure).

Every method returns a :obj:`PipelineResult`; a plan is only reported after it
was validated on the original task.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from namoplan.pddl.model import Plan
from namoplan.pddl.validate import validate_plan
from namoplan.relax import ImportanceSet, complementary_closure, entities_of_plan, restrict_task, rules_for
from namoplan.search.deadline import Deadline
from namoplan.search.planners import Verdict, plan_task

logger = logging.getLogger(__name__)

PURE = "pure"
PLOI = "ploi"
PLOI_COMP = "ploi+comp"
PLOI_RELAX = "ploi+relax"
FLAX = "flax"

STEP_PRUNE = "1"
STEP_RELAX = "2"
STEP_FINAL = "3"
STEP_FALLBACK = "fallback"
STEP_NONE = "n/a"


@dataclass
class Attempt:
    phase: str
    set_size: int
    verdict: str
    expansions: int
    elapsed: float
    threshold: Optional[float] = None

    def to_record(self):
        return {"phase": self.phase, "threshold": self.threshold, "set_size": self.set_size,
                "verdict": self.verdict, "expansions": self.expansions, "elapsed": round(self.elapsed, 3)}


@dataclass
class PipelineResult:
    method: str
    success: bool
    plan: Optional[Plan]
    elapsed: float
    budget: float
    step_reached: str = STEP_NONE
    threshold_trace: List[float] = field(default_factory=list)
    sets: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    attempts: List[Attempt] = field(default_factory=list)

    @property
    def set_sizes(self):
        return {name: len(entities) for name, entities in sorted(self.sets.items())}

    def to_record(self, instance_id=None, seed=None):
        """Per-run JSON record, times at millisecond resolution."""
        return {
            "method": self.method,
            "instance_id": instance_id,
            "seed": seed,
            "success": self.success,
            "elapsed": round(self.elapsed, 3),
            "budget": self.budget,
            "step_reached": self.step_reached,
            "threshold_trace": list(self.threshold_trace),
            "set_sizes": self.set_sizes,
            "plan_length": len(self.plan) if self.plan is not None else None,
            "plan": [str(step) for step in self.plan] if self.plan is not None else None,
            "attempts": [attempt.to_record() for attempt in self.attempts],
        }


class _Run:
    """State of one method run: the overall deadline, the attempts so far and the threshold trace."""
    def __init__(self, method, task, cfg, domain=None):
        self.method = method
        self.task = task
        self.cfg = cfg
        self.domain = domain or rules_for(task.domain_name).domain()
        self.deadline = Deadline(cfg.budget, clock=cfg.make_clock())
        self.attempts = []
        self.trace = []
        self.sets = {}
        self.full_task_unsolvable = False

    def elapsed(self):
        return self.deadline.elapsed()

    def solve(self, task, time_limit, phase, set_size, threshold=None):
        """Solve within the time limit, never beyond the overall deadline. Returns the outcome or None."""
        time_limit = min(time_limit, self.deadline.remaining())
        if time_limit <= 0:
            return None

        outcome = plan_task(self.domain, task, self.deadline.child(time_limit))
        self.attempts.append(Attempt(phase=phase, set_size=set_size, verdict=outcome.verdict.value,
                                     expansions=outcome.stats.expansions, elapsed=outcome.stats.elapsed,
                                     threshold=threshold))
        return outcome

    def attempt(self, importance_set, time_limit, phase, threshold=None):
        """Solve the task restricted to the set; a plan is returned only if it is valid on the original task."""
        outcome = self.solve(restrict_task(self.task, importance_set), time_limit, phase,
                             len(importance_set), threshold)
        if outcome is None:
            return None

        if outcome.verdict is Verdict.unsolvable and len(importance_set) == len(self.task.entities):
            self.full_task_unsolvable = True
        if not outcome.solved:
            return None

        validation = validate_plan(self.domain, self.task, outcome.plan)
        if not validation:
            logger.warning("Plan of the %s attempt on %s is not valid on the original task: %s",
                           phase, self.task.name, validation.message)
            return None
        return outcome.plan

    def fallback(self):
        """Plan on the full task with the remaining time, if allowed and not already proved useless."""
        if not self.cfg.fallback_to_full or self.full_task_unsolvable or self.deadline.expired():
            return None
        return self.attempt(ImportanceSet.everything(self.task), self.deadline.remaining(), phase=STEP_FALLBACK)

    def result(self, plan=None, step_reached=STEP_NONE):
        success = plan is not None
        elapsed = self.elapsed()
        logger.info("%s on %s: %s after %.3f s (step %s)", self.method, self.task.name,
                    "solved" if success else "failed", elapsed, step_reached)
        return PipelineResult(method=self.method, success=success, plan=plan, elapsed=elapsed,
                              budget=self.cfg.budget, step_reached=step_reached if success else STEP_NONE,
                              threshold_trace=list(self.trace), sets=dict(self.sets),
                              attempts=list(self.attempts))


def prune_and_plan(run, scores, time_limit):
    """
    Walk down the threshold schedule until a plan is found or ``time_limit`` seconds
    of the run are used up. Sets equal to an already attempted one are skipped, their
    threshold is still traced. Returns the plan (or None) and the last attempted set.
    """
    cap = run.cfg.first_attempt_cap
    attempted = set()
    last_set = None

    for threshold in run.cfg.thresholds:
        if run.elapsed() >= time_limit or run.deadline.expired():
            break
        run.trace.append(threshold)

        importance_set = ImportanceSet.from_scores(run.task, scores, threshold)
        if importance_set.entities in attempted:
            continue
        attempted.add(importance_set.entities)
        last_set = importance_set

        plan = run.attempt(importance_set, min(cap, time_limit - run.elapsed()), phase=STEP_PRUNE,
                           threshold=threshold)
        cap *= 2
        if plan is not None:
            return plan, last_set

    if last_set is None:
        last_set = ImportanceSet.for_task(run.task, ())
    return None, last_set


def _score(model, task):
    return dict(model.score(task))


def _rough_plan_entities(run):
    """
    Solve the relaxed full task within the second step's share of the budget.
    Returns the entities of the rough plan (empty on a timeout) and whether the
    relaxed task was proved unsolvable.
    """
    relaxed = rules_for(run.task.domain_name).relax(run.task)
    outcome = run.solve(relaxed, run.cfg.step2_time, phase=STEP_RELAX, set_size=len(relaxed.entities))
    if outcome is None:
        return frozenset(), False
    if outcome.verdict is Verdict.unsolvable:
        logger.info("Relaxed version of %s is unsolvable, so is the task", run.task.name)
        return frozenset(), True
    return entities_of_plan(outcome.plan) if outcome.solved else frozenset(), False


def run_pure(task, cfg, domain=None):
    """Plan on the complete task with the whole budget."""
    run = _Run(PURE, task, cfg, domain)
    everything = ImportanceSet.everything(task)
    run.sets["O1"] = everything.entities
    plan = run.attempt(everything, cfg.budget, phase="full")
    return run.result(plan, STEP_NONE)


def run_ploi(task, model, cfg, domain=None):
    """Score once, prune over the whole budget, then fall back to the full task."""
    run = _Run(PLOI, task, cfg, domain)
    scores = _score(model, task)

    plan, final_set = prune_and_plan(run, scores, cfg.budget)
    run.sets["O1"] = final_set.entities
    if plan is not None:
        return run.result(plan, STEP_PRUNE)

    plan = run.fallback()
    return run.result(plan, STEP_FALLBACK)


def _expand_and_plan(method, task, model, cfg, domain, use_relaxation, use_closure):
    run = _Run(method, task, cfg, domain)
    scores = _score(model, task)

    plan, current = prune_and_plan(run, scores, cfg.step1_time)
    run.sets["O1"] = current.entities
    if plan is not None:
        run.sets["O2"] = run.sets["O3"] = current.entities
        return run.result(plan, STEP_PRUNE)

    if use_relaxation:
        rough_entities, unsolvable = _rough_plan_entities(run)
        if unsolvable:
            return run.result()
        current = ImportanceSet.for_task(task, current.entities | rough_entities)
    run.sets["O2"] = current.entities

    if use_closure:
        current = complementary_closure(task, current)
    run.sets["O3"] = current.entities

    plan = run.attempt(current, run.deadline.remaining(), phase=STEP_FINAL)
    if plan is not None:
        return run.result(plan, STEP_FINAL)

    plan = run.fallback()
    return run.result(plan, STEP_FALLBACK)


def run_flax(task, model, cfg, domain=None):
    """
    Prune within the first share of the budget (O1), merge in the entities of a rough
    plan for the relaxed task (O2), close the set under the complementary rules (O3)
    and solve the restricted task with the rest of the budget.
    """
    return _expand_and_plan(FLAX, task, model, cfg, domain, use_relaxation=True, use_closure=True)


def run_ploi_comp(task, model, cfg, domain=None):
    return _expand_and_plan(PLOI_COMP, task, model, cfg, domain, use_relaxation=False, use_closure=True)


def run_ploi_relax(task, model, cfg, domain=None):
    return _expand_and_plan(PLOI_RELAX, task, model, cfg, domain, use_relaxation=True, use_closure=False)


METHODS = {
    PURE: lambda task, model, cfg, domain=None: run_pure(task, cfg, domain),
    PLOI: run_ploi,
    PLOI_COMP: run_ploi_comp,
    PLOI_RELAX: run_ploi_relax,
    FLAX: run_flax,
}

LEARNED_METHODS = (PLOI, PLOI_COMP, PLOI_RELAX, FLAX)


def run_method(method, task, model, cfg, domain=None):
    """
    Raises:
        ValueError: for an unknown method name.
    """
    try:
        runner = METHODS[method]
    except KeyError:
        raise ValueError(f"Unknown method {method}, use one of {sorted(METHODS)}") from None
    return runner(task, model, cfg, domain)
