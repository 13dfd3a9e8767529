from dataclasses import asdict, dataclass
from decimal import Decimal

from namoplan.core.settings import get_setting
from namoplan.search.deadline import VirtualClock, WallClock

CONFIG_KEYS = ("budget", "q_max", "gamma", "q_min", "step1_fraction", "step2_fraction", "min_attempt_cap",
               "attempt_cap_fraction", "fallback_to_full", "clock", "seconds_per_expansion")


def threshold_schedule(q_max, gamma, q_min):
    """
    Geometric thresholds ``q_max * gamma ** k`` down to ``q_min`` (inclusive).
    Products are taken in decimal arithmetic, so 0.81 * 0.9 is exactly 0.729.
    """
    q, factor, floor = Decimal(str(q_max)), Decimal(str(gamma)), Decimal(str(q_min))
    schedule = []
    while q >= floor:
        schedule.append(float(q))
        q *= factor
    return tuple(schedule)


@dataclass(frozen=True)
class PipelineConfig:
    """
    Parameters of one pipeline run. ``budget`` is the total time in seconds,
    the step fractions give the shares of the budget for the pruning loop and the
    relaxed solve. An attempt inside the pruning loop starts with
    ``max(min_attempt_cap, attempt_cap_fraction * budget)`` seconds and doubles
    on every further attempt.
    """
    budget: float = 5.0
    q_max: float = 0.81
    gamma: float = 0.9
    q_min: float = 0.1
    step1_fraction: float = 0.2
    step2_fraction: float = 0.2
    min_attempt_cap: float = 0.1
    attempt_cap_fraction: float = 0.1
    fallback_to_full: bool = True
    clock: str = "wall"
    seconds_per_expansion: float = 1e-4

    def __post_init__(self):
        if not self.budget > 0:
            raise ValueError(f"The budget needs to be positive, got {self.budget}")
        if not 0 < self.q_min < self.q_max < 1:
            raise ValueError(f"Need 0 < q_min < q_max < 1, got q_min={self.q_min}, q_max={self.q_max}")
        if not 0 < self.gamma < 1:
            raise ValueError(f"Need 0 < gamma < 1, got {self.gamma}")
        if self.step1_fraction <= 0 or self.step2_fraction <= 0:
            raise ValueError("Step fractions need to be positive")
        if self.step1_fraction + self.step2_fraction >= 1:
            raise ValueError(f"Step fractions {self.step1_fraction} + {self.step2_fraction} leave no time "
                             f"for the final solve")
        if self.min_attempt_cap <= 0 or self.attempt_cap_fraction <= 0:
            raise ValueError("Attempt caps need to be positive")
        if self.clock not in ("wall", "expansions"):
            raise ValueError(f"Unknown clock {self.clock}, use 'wall' or 'expansions'")

    @classmethod
    def from_settings(cls, task=None, **overrides):
        values = {key: get_setting(key, default=getattr(cls, key), task=task)
                  for key in CONFIG_KEYS if key not in overrides}
        values.update(overrides)
        return cls(**values)

    @property
    def thresholds(self):
        return threshold_schedule(self.q_max, self.gamma, self.q_min)

    @property
    def step1_time(self):
        return self.step1_fraction * self.budget

    @property
    def step2_time(self):
        return self.step2_fraction * self.budget

    @property
    def first_attempt_cap(self):
        return max(self.min_attempt_cap, self.attempt_cap_fraction * self.budget)

    def make_clock(self):
        if self.clock == "expansions":
            return VirtualClock(self.seconds_per_expansion)
        return WallClock()

    def to_record(self):
        return asdict(self)
