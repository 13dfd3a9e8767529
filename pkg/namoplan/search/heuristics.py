"""
Delete-relaxation heuristics.

Both estimates are computed with a generalised Dijkstra over atoms: an action fires
once its last precondition is settled, at cost 1 plus the sum (h_add) or the
maximum (h_max) of its precondition costs. The propagation stops as soon as all
goal atoms are settled.
"""
import heapq
import math

from namoplan.pddl.grounding import iter_bits


class DeleteRelaxation:
    """Precomputed action/precondition index of one grounded problem."""
    def __init__(self, problem):
        self.problem = problem
        self.actions = problem.actions
        self.goal = problem.goal_indices
        self.pre_count = [len(action.pre) for action in self.actions]
        self.free_actions = [number for number, action in enumerate(self.actions) if not action.pre]

        self.consumers = {}
        for number, action in enumerate(self.actions):
            for index in action.pre:
                self.consumers.setdefault(index, []).append(number)

    def _propagate(self, state, combine):
        if not self.goal:
            return 0

        cost = {index: 0 for index in iter_bits(state)}
        queue = [(0, index) for index in sorted(cost)]

        unsatisfied = list(self.pre_count)
        accumulated = [0] * len(self.actions)

        def fire(number, value):
            for index in self.actions[number].add:
                if value < cost.get(index, math.inf):
                    cost[index] = value
                    heapq.heappush(queue, (value, index))

        for number in self.free_actions:
            fire(number, 1)

        open_goals = set(self.goal)
        while queue:
            value, index = heapq.heappop(queue)
            if value > cost[index]:
                continue

            open_goals.discard(index)
            if not open_goals:
                break

            for number in self.consumers.get(index, ()):
                accumulated[number] = combine(accumulated[number], value)
                unsatisfied[number] -= 1
                if unsatisfied[number] == 0:
                    fire(number, accumulated[number] + 1)

        if open_goals:
            return math.inf

        result = 0
        for index in self.goal:
            result = combine(result, cost[index])
        return result

    def h_add(self, state):
        return self._propagate(state, lambda a, b: a + b)

    def h_max(self, state):
        return self._propagate(state, max)


def h_add(state, problem):
    """Additive delete-relaxation estimate, ``math.inf`` if the goal is relaxed-unreachable."""
    return DeleteRelaxation(problem).h_add(state)


def h_max(state, problem):
    """Admissible maximum delete-relaxation estimate."""
    return DeleteRelaxation(problem).h_max(state)
