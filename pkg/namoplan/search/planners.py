import collections
import enum
import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from namoplan.pddl.grounding import ground, relevant_actions
from namoplan.pddl.model import Plan
from namoplan.search.deadline import Deadline, DeadlineExpired
from namoplan.search.heuristics import DeleteRelaxation

logger = logging.getLogger(__name__)

ORACLE_ATOM_LIMIT = 4096


class Verdict(enum.Enum):
    solved = "solved"
    unsolvable = "unsolvable"
    timed_out = "timed-out"
    node_limit = "node-limit"


@dataclass(frozen=True)
class SearchStats:
    expansions: int = 0
    generated: int = 0
    elapsed: float = 0.0
    evaluations: int = 0


@dataclass(frozen=True)
class SearchOutcome:
    verdict: Verdict
    plan: Optional[Plan] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def solved(self):
        return self.verdict is Verdict.solved

    def to_record(self):
        """JSON-compatible summary, elapsed time in milliseconds resolution."""
        return {
            "verdict": self.verdict.value,
            "plan": [str(step) for step in self.plan] if self.plan is not None else None,
            "plan_length": len(self.plan) if self.plan is not None else None,
            "expansions": self.stats.expansions,
            "generated": self.stats.generated,
            "evaluations": self.stats.evaluations,
            "elapsed": round(self.stats.elapsed, 3),
        }


def _extract_plan(problem, parents, state):
    actions = []
    while parents[state] is not None:
        state, action = parents[state]
        actions.append(action)
    return problem.plan_of(reversed(actions))


def _outcome(verdict, deadline, expansions, generated, plan=None, evaluations=0):
    return SearchOutcome(verdict, plan, SearchStats(expansions, generated, deadline.elapsed(), evaluations))


def _pruned(problem, prune, deadline):
    if not prune:
        return problem
    return problem.with_actions(relevant_actions(problem, deadline))


def solve_satisficing(problem, deadline, prune=True):
    """
    Greedy best-first search on h_add with FIFO tie-breaking and duplicate detection.
    States with an infinite estimate are dead ends and never enter the open list.
    """
    if problem.is_goal(problem.init):
        return _outcome(Verdict.solved, deadline, 0, 0, Plan())

    try:
        problem = _pruned(problem, prune, deadline)
    except DeadlineExpired:
        return _outcome(Verdict.timed_out, deadline, 0, 0)
    heuristic = DeleteRelaxation(problem)

    counter = itertools.count()
    parents = {problem.init: None}
    open_list = [(heuristic.h_add(problem.init), next(counter), problem.init)]
    expansions = generated = 0
    evaluations = 1

    while open_list:
        if deadline.poll():
            return _outcome(Verdict.timed_out, deadline, expansions, generated, evaluations=evaluations)

        h, _, state = heapq.heappop(open_list)
        if h == math.inf:
            continue
        expansions += 1

        for action, successor in problem.successors(state):
            generated += 1
            if successor in parents:
                continue
            parents[successor] = (state, action)

            if problem.is_goal(successor):
                return _outcome(Verdict.solved, deadline, expansions, generated,
                                _extract_plan(problem, parents, successor), evaluations)

            # checked per successor, not only per expansion
            if deadline.expired():
                return _outcome(Verdict.timed_out, deadline, expansions, generated, evaluations=evaluations)
            estimate = heuristic.h_add(successor)
            evaluations += 1
            if estimate < math.inf:
                heapq.heappush(open_list, (estimate, next(counter), successor))

    return _outcome(Verdict.unsolvable, deadline, expansions, generated, evaluations=evaluations)


def solve_optimal(problem, deadline, prune=True):
    """
    A* on the admissible h_max with unit action costs.

    Estimates are evaluated lazily: a successor enters the open list with its parent's
    estimate minus one, which h_max never exceeds, and its own estimate is computed
    (once per state) when it is first popped. A state is expanded only once its key is
    its exact f value. Ties on f are broken by lower g, then by insertion order.
    """
    try:
        problem = _pruned(problem, prune, deadline)
    except DeadlineExpired:
        return _outcome(Verdict.timed_out, deadline, 0, 0)
    heuristic = DeleteRelaxation(problem)

    estimates = {}

    def estimate(state):
        if state not in estimates:
            estimates[state] = heuristic.h_max(state)
        return estimates[state]

    counter = itertools.count()
    best_g = {problem.init: 0}
    parents = {problem.init: None}
    h0 = estimate(problem.init)
    open_list = [(h0, 0, next(counter), problem.init)] if h0 < math.inf else []
    expansions = generated = 0

    while open_list:
        if deadline.poll():
            return _outcome(Verdict.timed_out, deadline, expansions, generated, evaluations=len(estimates))

        f, g, _, state = heapq.heappop(open_list)
        if g > best_g[state]:
            continue

        h = estimate(state)
        if h == math.inf:
            continue
        if g + h > f:
            heapq.heappush(open_list, (g + h, g, next(counter), state))
            continue

        if problem.is_goal(state):
            return _outcome(Verdict.solved, deadline, expansions, generated,
                            _extract_plan(problem, parents, state), len(estimates))
        expansions += 1

        for action, successor in problem.successors(state):
            generated += 1
            successor_g = g + 1
            if successor_g >= best_g.get(successor, math.inf):
                continue

            best_g[successor] = successor_g
            parents[successor] = (state, action)
            bound = estimates.get(successor, max(h - 1, 0))
            if bound < math.inf:
                heapq.heappush(open_list, (successor_g + bound, successor_g, next(counter), successor))

    return _outcome(Verdict.unsolvable, deadline, expansions, generated, evaluations=len(estimates))


def bfs_oracle(problem, node_limit=1_000_000):
    """
    Uninformed breadth-first search for tests, without any pruning.

    Raises:
        ValueError: for problems with more than 4096 atoms.
    """
    if len(problem.atoms) > ORACLE_ATOM_LIMIT:
        raise ValueError(f"The oracle only handles up to {ORACLE_ATOM_LIMIT} atoms, "
                         f"problem {problem.name} has {len(problem.atoms)}")

    deadline = Deadline.unlimited()
    if problem.is_goal(problem.init):
        return _outcome(Verdict.solved, deadline, 0, 0, Plan())

    parents = {problem.init: None}
    queue = collections.deque([problem.init])
    expansions = generated = 0

    while queue:
        if expansions >= node_limit:
            return _outcome(Verdict.node_limit, deadline, expansions, generated)

        state = queue.popleft()
        expansions += 1
        for action, successor in problem.successors(state):
            generated += 1
            if successor in parents:
                continue
            parents[successor] = (state, action)
            if problem.is_goal(successor):
                return _outcome(Verdict.solved, deadline, expansions, generated,
                                _extract_plan(problem, parents, successor))
            queue.append(successor)

    return _outcome(Verdict.unsolvable, deadline, expansions, generated)


def plan_task(domain, task, deadline, optimal=False):
    """
    Ground the task (relaxed-reachable actions only) and solve it. The reported
    elapsed time includes the grounding, which stops with a timeout like the search.
    """
    try:
        problem = ground(domain, task, reachable_only=True, deadline=deadline)
    except DeadlineExpired:
        logger.debug("Budget used up while grounding %s", task.name)
        return _outcome(Verdict.timed_out, deadline, 0, 0)

    solver = solve_optimal if optimal else solve_satisficing
    outcome = solver(problem, deadline)
    logger.debug("%s on %s: %s after %d expansions, %.3f s", solver.__name__, task.name,
                 outcome.verdict.value, outcome.stats.expansions, outcome.stats.elapsed)
    return outcome
