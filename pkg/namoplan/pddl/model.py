"""
Typed STRIPS data model.

All objects are immutable and compare structurally, so a domain or task that went
through :func:`~namoplan.pddl.emitter.emit_domain` and
:func:`~namoplan.pddl.parser.parse_domain` compares equal to the original.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Tuple


class TaskDefinitionError(ValueError):
    """Raised when a domain or task does not type-check."""


@dataclass(frozen=True, order=True)
class Atom:
    """
    An atom ``(predicate arg_1 ... arg_k)``.
    Lifted atoms carry variable names (``?p``), ground atoms carry entity names.
    """
    predicate: str
    args: Tuple[str, ...] = ()

    def __str__(self):
        return "(" + " ".join((self.predicate,) + self.args) + ")"

    def substitute(self, binding):
        return Atom(self.predicate, tuple(binding.get(arg, arg) for arg in self.args))


@dataclass(frozen=True)
class PredicateSchema:
    name: str
    param_types: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.param_types) > 2:
            raise TaskDefinitionError(f"Predicate {self.name} has arity {len(self.param_types)}, at most 2 is supported")

    @property
    def arity(self):
        return len(self.param_types)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: Tuple[Tuple[str, str], ...]
    pre: FrozenSet[Atom] = frozenset()
    add: FrozenSet[Atom] = frozenset()
    delete: FrozenSet[Atom] = frozenset()

    def __post_init__(self):
        variables = {variable for variable, _ in self.parameters}
        if len(variables) != len(self.parameters):
            raise TaskDefinitionError(f"Action {self.name} declares a parameter twice")

        for atom in self.pre | self.add | self.delete:
            free = set(atom.args) - variables
            if free:
                raise TaskDefinitionError(f"Action {self.name} uses undeclared variables {sorted(free)} in {atom}")

        both = self.add & self.delete
        if both:
            raise TaskDefinitionError(f"Action {self.name} adds and deletes {sorted(map(str, both))}")

    @property
    def variables(self):
        return tuple(variable for variable, _ in self.parameters)

    def instantiate(self, args):
        """Ground pre, add and delete atoms for the given argument tuple."""
        if len(args) != len(self.parameters):
            raise TaskDefinitionError(f"Action {self.name} takes {len(self.parameters)} arguments, got {len(args)}")

        binding = dict(zip(self.variables, args))
        return (frozenset(atom.substitute(binding) for atom in self.pre),
                frozenset(atom.substitute(binding) for atom in self.add),
                frozenset(atom.substitute(binding) for atom in self.delete))


@dataclass(frozen=True)
class Domain:
    name: str
    types: Tuple[str, ...]
    predicates: Tuple[PredicateSchema, ...]
    actions: Tuple[ActionSchema, ...] = ()
    requirements: Tuple[str, ...] = (":strips", ":typing")

    def __post_init__(self):
        names = [predicate.name for predicate in self.predicates]
        if len(set(names)) != len(names):
            raise TaskDefinitionError(f"Domain {self.name} declares a predicate twice")

        for predicate in self.predicates:
            self._check_types(predicate.param_types, f"predicate {predicate.name}")

        for action in self.actions:
            self._check_types([type_name for _, type_name in action.parameters], f"action {action.name}")
            types_by_variable = dict(action.parameters)
            for atom in action.pre | action.add | action.delete:
                schema = self.predicate(atom.predicate)
                if schema.arity != len(atom.args):
                    raise TaskDefinitionError(f"Arity mismatch in action {action.name}: {atom}")
                for variable, expected_type in zip(atom.args, schema.param_types):
                    if types_by_variable[variable] != expected_type:
                        raise TaskDefinitionError(f"Type mismatch in action {action.name}: {atom} "
                                                  f"expects {expected_type} for {variable}")

    def _check_types(self, type_names, where):
        unknown = set(type_names) - set(self.types)
        if unknown:
            raise TaskDefinitionError(f"Undeclared types {sorted(unknown)} in {where}")

    @cached_property
    def predicates_by_name(self):
        return {predicate.name: predicate for predicate in self.predicates}

    @cached_property
    def actions_by_name(self):
        return {action.name: action for action in self.actions}

    def predicate(self, name):
        try:
            return self.predicates_by_name[name]
        except KeyError:
            raise TaskDefinitionError(f"Unknown predicate {name}") from None

    def action(self, name):
        try:
            return self.actions_by_name[name]
        except KeyError:
            raise TaskDefinitionError(f"Unknown action {name}") from None

    @cached_property
    def static_predicates(self):
        """Predicates which appear in no add or delete list."""
        changed = set()
        for action in self.actions:
            changed.update(atom.predicate for atom in action.add | action.delete)
        return frozenset(predicate.name for predicate in self.predicates if predicate.name not in changed)


@dataclass(frozen=True, order=True)
class Entity:
    name: str
    type: str


@dataclass(frozen=True)
class Task:
    name: str
    domain_name: str
    entities: Tuple[Entity, ...]
    init: FrozenSet[Atom] = frozenset()
    goal: FrozenSet[Atom] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(sorted(self.entities)))

        names = [entity.name for entity in self.entities]
        if len(set(names)) != len(names):
            raise TaskDefinitionError(f"Task {self.name} lists an entity twice")

        known = set(names)
        for atom in self.init | self.goal:
            unknown = set(atom.args) - known
            if unknown:
                raise TaskDefinitionError(f"Atom {atom} references unknown entities {sorted(unknown)}")

    @cached_property
    def entity_types(self):
        return {entity.name: entity.type for entity in self.entities}

    @cached_property
    def entity_names(self):
        return tuple(entity.name for entity in self.entities)

    @cached_property
    def goal_entities(self):
        return frozenset(arg for atom in self.goal for arg in atom.args)

    def entities_of_type(self, type_name):
        return tuple(entity.name for entity in self.entities if entity.type == type_name)

    def check_against(self, domain):
        """Type-check all atoms against the domain, raise :obj:`TaskDefinitionError` otherwise."""
        for entity in self.entities:
            if entity.type not in domain.types:
                raise TaskDefinitionError(f"Entity {entity.name} has undeclared type {entity.type}")

        for atom in sorted(self.init | self.goal):
            schema = domain.predicate(atom.predicate)
            if schema.arity != len(atom.args):
                raise TaskDefinitionError(f"Arity mismatch: {atom} needs {schema.arity} arguments")
            for arg, expected_type in zip(atom.args, schema.param_types):
                if self.entity_types[arg] != expected_type:
                    raise TaskDefinitionError(f"Type mismatch: {arg} in {atom} is not a {expected_type}")
        return self


@dataclass(frozen=True)
class PlanStep:
    action: str
    args: Tuple[str, ...] = ()

    def __str__(self):
        return "(" + " ".join((self.action,) + self.args) + ")"


@dataclass(frozen=True)
class Plan:
    steps: Tuple[PlanStep, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, index):
        return self.steps[index]
