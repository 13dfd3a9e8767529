"""
Grounding of a lifted task into a :obj:`GroundedProblem` with integer bitset states.

Atom ``i`` of the universe is bit ``1 << i`` of a state. Static atoms (predicates never
added or deleted) are part of the initial state but compiled out of the preconditions.
"""
import collections
import dataclasses
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

from namoplan.pddl.model import Atom, Plan, PlanStep


class InapplicableActionError(ValueError):
    def __init__(self, action, missing):
        self.action = action
        self.missing = missing
        super().__init__(f"{action} is not applicable: precondition {missing} does not hold")


def to_mask(indices):
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


def iter_bits(state):
    """Indices of the set bits, ascending."""
    while state:
        lowest = state & -state
        yield lowest.bit_length() - 1
        state ^= lowest


@dataclass(frozen=True)
class GroundAction:
    schema: str
    args: Tuple[str, ...]
    pre: Tuple[int, ...]
    add: Tuple[int, ...]
    delete: Tuple[int, ...]
    pre_atoms: Tuple[Atom, ...] = field(default=(), compare=False, repr=False)
    pre_mask: int = field(init=False, compare=False, repr=False)
    add_mask: int = field(init=False, compare=False, repr=False)
    del_mask: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "pre_mask", to_mask(self.pre))
        object.__setattr__(self, "add_mask", to_mask(self.add))
        object.__setattr__(self, "del_mask", to_mask(self.delete))

    def __str__(self):
        return "(" + " ".join((self.schema,) + self.args) + ")"

    @property
    def step(self):
        return PlanStep(self.schema, self.args)


def applicable(state, action):
    return state & action.pre_mask == action.pre_mask


def apply(state, action):
    """
    Successor state ``(s - del) | add``. Integers are immutable, so the input state
    is never changed.

    Raises:
        InapplicableActionError: naming the first precondition which does not hold.
    """
    if not applicable(state, action):
        for position, index in enumerate(action.pre):
            if not state >> index & 1:
                missing = action.pre_atoms[position] if action.pre_atoms else f"#{index}"
                raise InapplicableActionError(action, missing)
    return (state & ~action.del_mask) | action.add_mask


@dataclass(frozen=True)
class GroundedProblem:
    atoms: Tuple[Atom, ...]
    init: int
    goal: int
    actions: Tuple[GroundAction, ...]
    name: str = ""

    @cached_property
    def atom_index(self):
        return {atom: index for index, atom in enumerate(self.atoms)}

    @cached_property
    def goal_indices(self):
        return tuple(iter_bits(self.goal))

    @cached_property
    def actions_by_step(self):
        return {action.step: action for action in self.actions}

    def state_of(self, atoms):
        return to_mask(self.atom_index[atom] for atom in atoms)

    def atoms_of(self, state):
        return frozenset(self.atoms[index] for index in iter_bits(state))

    def is_goal(self, state):
        return state & self.goal == self.goal

    def action_for(self, step):
        try:
            return self.actions_by_step[step]
        except KeyError:
            raise KeyError(f"No ground action {step} in problem {self.name}") from None

    def plan_of(self, actions):
        return Plan(tuple(action.step for action in actions))

    def with_actions(self, actions):
        return dataclasses.replace(self, actions=tuple(actions))

    @cached_property
    def _successor_index(self):
        """
        Each action is filed under its most selective precondition atom, i.e. the one whose
        predicate has the fewest true atoms in the initial state relative to its universe size.
        A state then only needs to look at the actions filed under its true atoms.
        """
        universe_count = collections.Counter(atom.predicate for atom in self.atoms)
        init_count = collections.Counter(self.atoms[index].predicate for index in iter_bits(self.init))

        def selectivity(index):
            predicate = self.atoms[index].predicate
            return (init_count[predicate] + 1) / universe_count[predicate], index

        always = []
        by_atom = collections.defaultdict(list)
        for action in self.actions:
            if action.pre:
                by_atom[min(action.pre, key=selectivity)].append(action)
            else:
                always.append(action)
        return tuple(always), dict(by_atom)

    def successors(self, state):
        """Applicable actions and their successor states, in a deterministic order."""
        always, by_atom = self._successor_index
        for action in always:
            yield action, (state & ~action.del_mask) | action.add_mask
        for index in iter_bits(state):
            for action in by_atom.get(index, ()):
                if state & action.pre_mask == action.pre_mask:
                    yield action, (state & ~action.del_mask) | action.add_mask


class _AtomIndex:
    """Ground atoms by predicate and by (predicate, position, value), for joins over partial bindings."""
    def __init__(self, atoms=()):
        self.by_predicate = collections.defaultdict(set)
        self.by_argument = collections.defaultdict(set)
        for atom in atoms:
            self.add(atom.predicate, atom.args)

    def add(self, predicate, args):
        if args in self.by_predicate[predicate]:
            return False
        self.by_predicate[predicate].add(args)
        for position, value in enumerate(args):
            self.by_argument[predicate, position, value].add(args)
        return True

    def matches(self, pattern, binding):
        candidates = self.by_predicate.get(pattern.predicate, ())
        for position, variable in enumerate(pattern.args):
            if variable in binding:
                narrowed = self.by_argument.get((pattern.predicate, position, binding[variable]), ())
                if len(narrowed) < len(candidates):
                    candidates = narrowed

        for args in candidates:
            extended = _unify(pattern, args, binding)
            if extended is not None:
                yield extended


def _unify(pattern, args, binding):
    extended = dict(binding)
    for variable, value in zip(pattern.args, args):
        if extended.setdefault(variable, value) != value:
            return None
    return extended


def _join(patterns, index, binding):
    if not patterns:
        yield binding
        return

    # most bound variables first
    best = max(range(len(patterns)), key=lambda i: (sum(arg in binding for arg in patterns[i].args), -i))
    rest = patterns[:best] + patterns[best + 1:]
    for extended in index.matches(patterns[best], binding):
        yield from _join(rest, index, extended)


def _complete(schema, binding, entities_by_type):
    """All type-correct extensions of the binding to every parameter of the schema."""
    free = [(variable, type_name) for variable, type_name in schema.parameters if variable not in binding]
    for values in itertools.product(*[entities_by_type.get(type_name, ()) for _, type_name in free]):
        full = dict(binding)
        full.update(zip((variable for variable, _ in free), values))
        yield tuple(full[variable] for variable in schema.variables)


class _CompiledSchema:
    """
    Atoms of an action schema as ``(predicate, parameter positions)``, so an instance
    is built by indexing into its argument tuple. Static preconditions are left out.
    """
    def __init__(self, schema, static):
        positions = {variable: number for number, variable in enumerate(schema.variables)}

        def compiled(atoms):
            return tuple((atom.predicate, tuple(positions[arg] for arg in atom.args)) for atom in sorted(atoms))

        self.pre = compiled(atom for atom in schema.pre if atom.predicate not in static)
        self.add = compiled(schema.add)
        self.delete = compiled(schema.delete)


def _keys(templates, args):
    """Ground atoms as ``(predicate, args)`` pairs, which sort like :obj:`Atom`."""
    return [(predicate, tuple(args[position] for position in positions)) for predicate, positions in templates]


def _check_every(items, deadline, every=256):
    for number, item in enumerate(items):
        if deadline is not None and number % every == 0:
            deadline.check()
        yield item


def _static_instances(domain, task, entities_by_type, deadline=None):
    static = domain.static_predicates
    static_index = _AtomIndex(atom for atom in task.init if atom.predicate in static)

    instances = set()
    for schema in domain.actions:
        static_pre = sorted(atom for atom in schema.pre if atom.predicate in static)
        for binding in _check_every(_join(static_pre, static_index, {}), deadline):
            for args in _complete(schema, binding, entities_by_type):
                instances.add((schema.name, args))
    return instances


def _reachable_instances(domain, task, entities_by_type, compiled, deadline=None):
    """Instances whose preconditions are reachable under the delete relaxation."""
    reached = _AtomIndex(task.init)
    queue = collections.deque((atom.predicate, atom.args) for atom in sorted(task.init))
    instances = set()

    triggers = collections.defaultdict(list)
    for schema in domain.actions:
        for pattern in sorted(schema.pre):
            triggers[pattern.predicate].append((schema, pattern, sorted(schema.pre - {pattern})))

    def fire(schema, binding):
        add = compiled[schema.name].add
        for args in _complete(schema, binding, entities_by_type):
            if (schema.name, args) in instances:
                continue
            instances.add((schema.name, args))
            for key in sorted(_keys(add, args)):
                if reached.add(*key):
                    queue.append(key)

    for schema in domain.actions:
        if not schema.pre:
            fire(schema, {})

    while queue:
        if deadline is not None:
            deadline.check()
        predicate, args = queue.popleft()
        for schema, pattern, rest in triggers[predicate]:
            binding = _unify(pattern, args, {})
            if binding is None:
                continue
            for extended in list(_join(rest, reached, binding)):
                fire(schema, extended)

    return instances


def ground(domain, task, reachable_only=False, deadline=None):
    """
    Ground the task.

    By default this returns exactly the type-correct instances of all action schemas, minus
    those whose static preconditions are false in the initial state. With ``reachable_only``,
    only instances reachable in the delete relaxation are created, which is what the planners use.

    Raises:
        DeadlineExpired: if the optional :obj:`~namoplan.search.deadline.Deadline` runs out
            while grounding. It is checked between small units of work.
    """
    task.check_against(domain)

    static = domain.static_predicates
    entities_by_type = {type_name: task.entities_of_type(type_name) for type_name in domain.types}
    compiled = {schema.name: _CompiledSchema(schema, static) for schema in domain.actions}

    if reachable_only:
        instances = _reachable_instances(domain, task, entities_by_type, compiled, deadline)
    else:
        instances = _static_instances(domain, task, entities_by_type, deadline)

    lifted = []
    universe = {(atom.predicate, atom.args) for atom in task.init | task.goal}
    for name, args in _check_every(sorted(instances), deadline):
        schema = compiled[name]
        pre, add, delete = _keys(schema.pre, args), _keys(schema.add, args), _keys(schema.delete, args)
        lifted.append((name, args, pre, add, delete))
        universe.update(pre)
        universe.update(add)
        universe.update(delete)

    keys = sorted(universe)
    atoms = tuple(Atom(predicate, args) for predicate, args in keys)
    atom_index = {key: index for index, key in enumerate(keys)}

    def indices(atom_keys):
        return tuple(sorted({atom_index[key] for key in atom_keys}))

    actions = []
    for name, args, pre, add, delete in _check_every(lifted, deadline):
        pre = indices(pre)
        actions.append(GroundAction(schema=name, args=args, pre=pre, add=indices(add), delete=indices(delete),
                                    pre_atoms=tuple(atoms[index] for index in pre)))

    return GroundedProblem(atoms=atoms,
                           init=to_mask(atom_index[atom.predicate, atom.args] for atom in task.init),
                           goal=to_mask(atom_index[atom.predicate, atom.args] for atom in task.goal),
                           actions=tuple(actions),
                           name=task.name)


def relevant_actions(problem, deadline=None):
    """
    Actions which are reachable from the initial state in the delete relaxation and which
    contribute, directly or through other such actions, to a goal atom. Dropping all other
    actions keeps every plan (and every shortest plan) intact.

    Raises:
        DeadlineExpired: if the optional deadline runs out on the way.
    """
    actions = problem.actions
    unsatisfied = [len(action.pre) for action in actions]
    consumers = collections.defaultdict(list)
    for number, action in enumerate(actions):
        for index in action.pre:
            consumers[index].append(number)

    reached = set()
    queue = collections.deque()

    def reach(indices):
        for index in indices:
            if index not in reached:
                reached.add(index)
                queue.append(index)

    reach(iter_bits(problem.init))
    reachable = {number for number, count in enumerate(unsatisfied) if count == 0}
    for number in sorted(reachable):
        reach(actions[number].add)

    for index in _check_every(_drain(queue), deadline):
        for number in consumers.get(index, ()):
            unsatisfied[number] -= 1
            if unsatisfied[number] == 0:
                reachable.add(number)
                reach(actions[number].add)

    adders = collections.defaultdict(list)
    for number in sorted(reachable):
        for index in actions[number].add:
            adders[index].append(number)

    relevant = set()
    wanted = set(iter_bits(problem.goal))
    queue.extend(sorted(wanted))
    for index in _check_every(_drain(queue), deadline):
        for number in adders.get(index, ()):
            if number in relevant:
                continue
            relevant.add(number)
            for pre in actions[number].pre:
                if pre not in wanted:
                    wanted.add(pre)
                    queue.append(pre)

    return tuple(action for number, action in enumerate(actions) if number in relevant)


def _drain(queue):
    """Pop from the left until the queue is empty, including items appended meanwhile."""
    while queue:
        yield queue.popleft()
