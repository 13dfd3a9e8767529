"""
Task transformations around importance sets: restriction of a task to a subset of its
entities, the domain relaxation rule and the complementary-rule closure.

Each domain registers its rules in a table keyed by the domain name.
"""
import collections
from dataclasses import dataclass
from typing import Callable, FrozenSet, Tuple

from namoplan.mazenamo.domain import DOMAIN_NAME as MAZENAMO, ROBOT, mazenamo_domain
from namoplan.pddl.model import Atom, Task


class GoalEntityMissingError(ValueError):
    pass


@dataclass(frozen=True)
class DomainRules:
    """
    ``relax`` maps a task to its relaxed version; every ``(predicate, i, j)`` of ``complementary``
    ties arguments i and j of its true atoms together; entities of the ``anchor_types`` are
    kept in every importance set.
    """
    domain: Callable
    relax: Callable[[Task], Task]
    complementary: Tuple[Tuple[str, int, int], ...] = ()
    anchor_types: Tuple[str, ...] = ()


_RULES = {}


def register_rules(domain_name, rules):
    _RULES[domain_name] = rules


def rules_for(domain_name):
    try:
        return _RULES[domain_name]
    except KeyError:
        raise KeyError(f"No rules registered for domain {domain_name}, known: {sorted(_RULES)}") from None


@dataclass(frozen=True)
class ImportanceSet:
    entities: FrozenSet[str]

    def __len__(self):
        return len(self.entities)

    def __contains__(self, name):
        return name in self.entities

    def __iter__(self):
        return iter(sorted(self.entities))

    def __or__(self, other):
        return ImportanceSet(self.entities | frozenset(other))

    def __le__(self, other):
        return self.entities <= other.entities

    @staticmethod
    def anchors(task):
        """Goal entities and the entities of the domain's anchor types."""
        anchor_types = rules_for(task.domain_name).anchor_types if task.domain_name in _RULES else ()
        anchored = set(task.goal_entities)
        for type_name in anchor_types:
            anchored.update(task.entities_of_type(type_name))
        return frozenset(anchored)

    @classmethod
    def for_task(cls, task, entities):
        """The given entities of the task plus its anchors. Names outside the task are dropped."""
        return cls((frozenset(entities) & frozenset(task.entity_names)) | cls.anchors(task))

    @classmethod
    def from_scores(cls, task, scores, threshold):
        """Entities scored at least ``threshold``, plus the anchors."""
        return cls.for_task(task, (name for name, score in scores.items() if score >= threshold))

    @classmethod
    def everything(cls, task):
        return cls(frozenset(task.entity_names))


def restrict_task(task, importance_set):
    """
    The task on the given entities only: atoms of the initial state mentioning other
    entities are dropped, the goal is kept.

    Raises:
        GoalEntityMissingError: if a goal entity is not part of the set.
        ValueError: if the set names entities the task does not have.
    """
    keep = frozenset(importance_set.entities if isinstance(importance_set, ImportanceSet) else importance_set)

    unknown = keep - set(task.entity_names)
    if unknown:
        raise ValueError(f"Entities {sorted(unknown)} are not part of task {task.name}")
    missing = task.goal_entities - keep
    if missing:
        raise GoalEntityMissingError(f"Goal entities {sorted(missing)} are missing from the importance set")

    if len(keep) == len(task.entities):
        return task

    return Task(name=task.name, domain_name=task.domain_name,
                entities=tuple(entity for entity in task.entities if entity.name in keep),
                init=frozenset(atom for atom in task.init if keep.issuperset(atom.args)),
                goal=task.goal)


def relax_light_boxes(task):
    """
    Remove every light box (not mentioned in the goal). Its cell becomes empty unless another
    box stays there; a heavy base it was stacked on becomes clear; a robot holding it gets
    an empty hand.
    """
    light = {atom.args[0] for atom in task.init if atom.predicate == "islight"} - task.goal_entities
    if not light:
        return task

    init = {atom for atom in task.init if not light.intersection(atom.args)}

    occupied = {atom.args[1] for atom in init if atom.predicate == "oat"}
    for atom in task.init:
        if atom.predicate == "oat" and atom.args[0] in light and atom.args[1] not in occupied:
            init.add(Atom("isempty", (atom.args[1],)))
        elif atom.predicate == "upon" and atom.args[0] in light and atom.args[1] not in light:
            base = atom.args[1]
            if not any(other.predicate == "upon" and other.args[1] == base for other in init):
                init.add(Atom("clear", (base,)))
        elif atom.predicate == "holding" and atom.args[1] in light:
            init.add(Atom("handempty", (atom.args[0],)))

    return Task(name=f"{task.name}-relaxed", domain_name=task.domain_name,
                entities=tuple(entity for entity in task.entities if entity.name not in light),
                init=frozenset(init), goal=task.goal)


def entities_of_plan(plan):
    """All entities bound by any step of the plan."""
    return frozenset(arg for step in plan for arg in step.args)


def complementary_closure(task, importance_set, rules=None):
    """
    Least superset of the importance set closed under the complementary rules of the domain:
    if an atom tying two entities holds initially and one of them is in the set, so is the other.
    """
    rules = rules or rules_for(task.domain_name)

    linked = collections.defaultdict(set)
    for atom in task.init:
        for predicate, i, j in rules.complementary:
            if atom.predicate == predicate:
                linked[atom.args[i]].add(atom.args[j])
                linked[atom.args[j]].add(atom.args[i])

    closed = set(importance_set.entities)
    queue = collections.deque(sorted(closed))
    while queue:
        name = queue.popleft()
        for other in sorted(linked.get(name, ())):
            if other not in closed:
                closed.add(other)
                queue.append(other)

    return ImportanceSet(frozenset(closed))


register_rules(MAZENAMO, DomainRules(domain=mazenamo_domain, relax=relax_light_boxes,
                                     complementary=(("oat", 0, 1),), anchor_types=(ROBOT,)))
