import math
import time

from namoplan.core.settings import get_setting


class WallClock:
    """Monotonic wall-clock time."""
    def now(self):
        return time.monotonic()

    def tick(self):
        pass


class VirtualClock:
    """
    Time which only advances when a search polls its deadline, by a fixed amount
    per node expansion. Runs measured with this clock give the same verdicts and
    the same timings on every machine.
    """
    def __init__(self, seconds_per_expansion=1e-4):
        if seconds_per_expansion <= 0:
            raise ValueError("seconds_per_expansion must be positive")
        self.seconds_per_expansion = seconds_per_expansion
        self._ticks = 0

    def now(self):
        return self._ticks * self.seconds_per_expansion

    def tick(self):
        self._ticks += 1


def make_clock(kind=None, task=None):
    """Clock as configured by the ``clock`` setting: ``"wall"`` (default) or ``"expansions"``."""
    kind = kind or get_setting("clock", default="wall", task=task)
    if kind == "wall":
        return WallClock()
    if kind == "expansions":
        return VirtualClock(float(get_setting("seconds_per_expansion", default=1e-4, task=task)))
    raise ValueError(f"Unknown clock {kind}, use 'wall' or 'expansions'")


class DeadlineExpired(Exception):
    """Raised by :meth:`Deadline.check` from work that has no verdict of its own, such as grounding."""
    def __init__(self, deadline):
        self.deadline = deadline
        super().__init__(f"Budget of {deadline.budget} s used up")


class Deadline:
    """
    A time budget starting at construction. Searches call :meth:`poll` once per
    node expansion, which is the only place a running search can be stopped.
    """
    def __init__(self, budget, clock=None):
        if not budget > 0:
            raise ValueError(f"A deadline needs a positive budget, got {budget}")
        self.budget = budget
        self.clock = clock or WallClock()
        self.start = self.clock.now()

    @classmethod
    def unlimited(cls, clock=None):
        return cls(math.inf, clock=clock)

    def elapsed(self):
        return self.clock.now() - self.start

    def remaining(self):
        return max(0.0, self.budget - self.elapsed())

    def expired(self):
        return self.elapsed() >= self.budget

    def poll(self):
        """Account for one expansion, True if the budget is used up."""
        self.clock.tick()
        return self.expired()

    def check(self):
        """Raise :obj:`DeadlineExpired` once the budget is used up. Does not count as an expansion."""
        if self.expired():
            raise DeadlineExpired(self)

    def child(self, budget):
        """
        A deadline on the same clock, ending no later than this one. The clock is read
        once, so the child of a deadline running out right now is already expired.
        """
        child = Deadline(budget, clock=self.clock)
        child.budget = max(0.0, min(budget, self.budget - (child.start - self.start)))
        return child

    def __repr__(self):
        return f"Deadline(budget={self.budget}, elapsed={self.elapsed():.3f})"
