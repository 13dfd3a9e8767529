"""
Named benchmark setups. A preset fixes the instance sizes and quotas, the budget,
the method seeds and the training set of a complete comparison, so that
``namoplan bench --preset <name>`` reproduces it from nothing.
"""
from dataclasses import dataclass, field
from typing import Dict, Tuple

from namoplan.bench.suite import ALL_METHODS


@dataclass(frozen=True)
class BenchPreset:
    name: str
    sizes: Tuple[int, ...]
    quotas: Dict[str, int]
    budget: float
    seeds: Tuple[int, ...]
    training_instances: int
    methods: Tuple[str, ...] = ALL_METHODS
    check_levels: Tuple[str, ...] = ("hard", "expert")
    training_quotas: Dict[str, int] = field(init=False)

    def __post_init__(self):
        if self.training_instances < 1:
            raise ValueError("A preset needs at least one training instance")
        if not self.budget > 0:
            raise ValueError(f"The budget needs to be positive, got {self.budget}")
        # the model is trained on easy instances only
        object.__setattr__(self, "training_quotas", {"easy": self.training_instances})

    @property
    def budgets(self):
        return {n: self.budget for n in self.sizes}


PRESETS = {
    # one size with small quotas, sized for a single desktop machine
    "desk": BenchPreset(name="desk", sizes=(10,), quotas={"easy": 30, "medium": 20, "hard": 10, "expert": 10},
                        budget=5.0, seeds=(0, 1, 2), training_instances=200),
}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"Unknown preset {name}, use one of {sorted(PRESETS)}") from None
