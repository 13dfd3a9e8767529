"""
Reader for the typed-STRIPS subset of PDDL.

Identifiers are case-insensitive and normalised to lower case. Everything outside
``:strips`` and ``:typing`` is rejected with the name of the missing requirement.
"""
import re
from collections import namedtuple

from namoplan.pddl.model import (Atom, ActionSchema, Domain, Entity, Plan, PlanStep, PredicateSchema, Task,
                                 TaskDefinitionError)

SUPPORTED_REQUIREMENTS = (":strips", ":typing")

# Expression heads which need a requirement we do not support
_UNSUPPORTED_HEADS = {
    "not": ":negative-preconditions",
    "or": ":disjunctive-preconditions",
    "imply": ":disjunctive-preconditions",
    "exists": ":existential-preconditions",
    "forall": ":universal-preconditions",
    "when": ":conditional-effects",
    "=": ":equality",
    "increase": ":action-costs",
    "decrease": ":action-costs",
}

_TOKEN_PATTERN = re.compile(r"[()]|[^\s()]+")

Token = namedtuple("Token", ["value", "line", "column"])


class PDDLParseError(ValueError):
    """Syntax error in a PDDL text, with the position where it was found."""
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnsupportedRequirementError(PDDLParseError):
    def __init__(self, requirement, line=None, column=None):
        self.requirement = requirement
        super().__init__(f"Unsupported requirement {requirement}", line, column)


class _Expression(list):
    """A parenthesised list, remembering where it was opened."""
    def __init__(self, line, column):
        super().__init__()
        self.line = line
        self.column = column


def tokenize(text):
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split(";", 1)[0]
        for match in _TOKEN_PATTERN.finditer(line):
            yield Token(match.group().lower(), line_number, match.start() + 1)


def read_expression(text):
    """Turn the text into exactly one nested :obj:`_Expression`."""
    stack = []
    result = None

    for token in tokenize(text):
        if token.value == "(":
            stack.append(_Expression(token.line, token.column))
        elif token.value == ")":
            if not stack:
                raise PDDLParseError("Unbalanced closing parenthesis", token.line, token.column)
            expression = stack.pop()
            if stack:
                stack[-1].append(expression)
            elif result is None:
                result = expression
            else:
                raise PDDLParseError("Only one top-level expression is allowed", token.line, token.column)
        elif stack:
            stack[-1].append(token)
        else:
            raise PDDLParseError(f"Unexpected token {token.value} outside of parentheses", token.line, token.column)

    if stack:
        raise PDDLParseError("Missing closing parenthesis", stack[-1].line, stack[-1].column)
    if result is None:
        raise PDDLParseError("Empty input")
    return result


def _position(node):
    return node.line, node.column


def _expect_list(node, what):
    if not isinstance(node, _Expression):
        raise PDDLParseError(f"Expected a list for {what}, got {node.value}", *_position(node))
    return node


def _expect_token(node, what):
    if isinstance(node, _Expression):
        raise PDDLParseError(f"Expected {what}, got a list", *_position(node))
    return node


def _head(node):
    if not node:
        return None
    first = node[0]
    return None if isinstance(first, _Expression) else first.value


def _parse_header(tree, kind):
    _expect_list(tree, "the definition")
    if _head(tree) != "define" or len(tree) < 2:
        raise PDDLParseError("Expected (define ...)", *_position(tree))

    header = _expect_list(tree[1], kind)
    if _head(header) != kind or len(header) != 2:
        raise PDDLParseError(f"Expected ({kind} <name>)", *_position(header))
    return _expect_token(header[1], f"the {kind} name").value


def _parse_typed_list(nodes, what):
    """Parse ``a b - t c - u d`` into [(a, t), (b, t), (c, u), (d, object)]."""
    result = []
    pending = []
    iterator = iter(nodes)

    for node in iterator:
        token = _expect_token(node, what)
        if token.value == "-":
            try:
                type_token = _expect_token(next(iterator), "a type name")
            except StopIteration:
                raise PDDLParseError(f"Missing type after '-' in {what}", token.line, token.column) from None
            if not pending:
                raise PDDLParseError(f"Type {type_token.value} without names in {what}", token.line, token.column)
            result += [(name, type_token.value) for name in pending]
            pending = []
        else:
            pending.append(token)

    result += [(name, "object") for name in pending]
    return result


def _parse_requirements(node):
    requirements = []
    for token in node[1:]:
        token = _expect_token(token, "a requirement")
        if token.value not in SUPPORTED_REQUIREMENTS:
            raise UnsupportedRequirementError(token.value, token.line, token.column)
        requirements.append(token.value)
    return tuple(requirements)


def _parse_types(node):
    types = []
    for token, parent in _parse_typed_list(node[1:], ":types"):
        if parent != "object":
            raise PDDLParseError(f"Type hierarchies are not supported ({token.value} - {parent})", *_position(token))
        types.append(token.value)
    return tuple(types)


def _parse_predicates(node):
    predicates = []
    for predicate in node[1:]:
        predicate = _expect_list(predicate, "a predicate declaration")
        name = _expect_token(predicate[0], "a predicate name").value if predicate else None
        if name is None:
            raise PDDLParseError("Empty predicate declaration", *_position(predicate))
        parameters = _parse_typed_list(predicate[1:], f"predicate {name}")
        try:
            predicates.append(PredicateSchema(name, tuple(type_name for _, type_name in parameters)))
        except TaskDefinitionError as ex:
            raise PDDLParseError(str(ex), *_position(predicate)) from None
    return tuple(predicates)


def _parse_atom(node, what):
    node = _expect_list(node, what)
    head = _head(node)
    if head is None:
        raise PDDLParseError(f"Expected an atom in {what}", *_position(node))
    if head in _UNSUPPORTED_HEADS:
        raise UnsupportedRequirementError(_UNSUPPORTED_HEADS[head], *_position(node))
    args = tuple(_expect_token(arg, f"an argument of {head}") for arg in node[1:])
    return Atom(head, tuple(arg.value for arg in args)), node


def _parse_conjunction(node, what, allow_delete=False):
    """
    Parse ``(and ...)``, a single atom or ``()``.
    Returns the positive atoms and, if allowed, the negated ones, each with their expression.
    """
    node = _expect_list(node, what)
    if not node:
        return [], []

    parts = node[1:] if _head(node) == "and" else [node]

    positive = []
    negative = []
    for part in parts:
        part = _expect_list(part, what)
        if allow_delete and _head(part) == "not":
            if len(part) != 2:
                raise PDDLParseError("Expected (not <atom>)", *_position(part))
            negative.append(_parse_atom(part[1], what))
        else:
            positive.append(_parse_atom(part, what))
    return positive, negative


def _parse_action(node):
    if len(node) < 2:
        raise PDDLParseError("Action without name", *_position(node))
    name = _expect_token(node[1], "an action name").value

    fields = {}
    rest = node[2:]
    if len(rest) % 2:
        raise PDDLParseError(f"Odd number of entries in action {name}", *_position(node))
    for key, value in zip(rest[::2], rest[1::2]):
        key = _expect_token(key, "an action keyword")
        if key.value not in (":parameters", ":precondition", ":effect"):
            raise PDDLParseError(f"Unknown action keyword {key.value}", key.line, key.column)
        fields[key.value] = value

    parameters = _parse_typed_list(_expect_list(fields.get(":parameters", _Expression(*_position(node))), "parameters"),
                                   f"parameters of {name}")
    pre = []
    if ":precondition" in fields:
        pre, _ = _parse_conjunction(fields[":precondition"], f"precondition of {name}")
    add, delete = [], []
    if ":effect" in fields:
        add, delete = _parse_conjunction(fields[":effect"], f"effect of {name}", allow_delete=True)

    try:
        return ActionSchema(name=name,
                            parameters=tuple((variable.value, type_name) for variable, type_name in parameters),
                            pre=frozenset(atom for atom, _ in pre),
                            add=frozenset(atom for atom, _ in add),
                            delete=frozenset(atom for atom, _ in delete))
    except TaskDefinitionError as ex:
        raise PDDLParseError(str(ex), *_position(node)) from None


def parse_domain(text):
    """
    Parse a typed-STRIPS PDDL domain.

    Raises:
        PDDLParseError: on syntax errors, with line and column.
        UnsupportedRequirementError: for everything beyond ``:strips`` and ``:typing``.
    """
    tree = read_expression(text)
    name = _parse_header(tree, "domain")

    requirements = SUPPORTED_REQUIREMENTS
    types = ()
    predicates = ()
    actions = []

    for section in tree[2:]:
        section = _expect_list(section, "a domain section")
        keyword = _head(section)
        if keyword == ":requirements":
            requirements = _parse_requirements(section)
        elif keyword == ":types":
            types = _parse_types(section)
        elif keyword == ":predicates":
            predicates = _parse_predicates(section)
        elif keyword == ":action":
            actions.append(_parse_action(section))
        else:
            raise PDDLParseError(f"Unsupported domain section {keyword}", *_position(section))

    try:
        return Domain(name=name, types=types, predicates=predicates, actions=tuple(actions),
                      requirements=requirements)
    except TaskDefinitionError as ex:
        raise PDDLParseError(str(ex), *_position(tree)) from None


def _check_atom(domain, entity_types, atom, node):
    position = "line {}, column {}".format(*_position(node))
    if atom.predicate not in domain.predicates_by_name:
        raise TaskDefinitionError(f"Unknown predicate {atom.predicate} ({position})")

    schema = domain.predicates_by_name[atom.predicate]
    if schema.arity != len(atom.args):
        raise TaskDefinitionError(f"Arity mismatch: {atom} needs {schema.arity} arguments ({position})")

    for arg, expected_type in zip(atom.args, schema.param_types):
        if arg not in entity_types:
            raise TaskDefinitionError(f"Unknown entity {arg} in {atom} ({position})")
        if entity_types[arg] != expected_type:
            raise TaskDefinitionError(f"Type mismatch: {arg} in {atom} is not a {expected_type} ({position})")


def parse_task(text, domain):
    """
    Parse a PDDL problem against an already parsed domain.

    Raises:
        PDDLParseError: on syntax errors.
        TaskDefinitionError: on unknown predicates, types or entities and on arity mismatches.
    """
    tree = read_expression(text)
    name = _parse_header(tree, "problem")

    domain_name = None
    entities = []
    init = []
    goal = []

    for section in tree[2:]:
        section = _expect_list(section, "a problem section")
        keyword = _head(section)
        if keyword == ":domain":
            if len(section) != 2:
                raise PDDLParseError("Expected (:domain <name>)", *_position(section))
            domain_name = _expect_token(section[1], "the domain name").value
        elif keyword == ":requirements":
            _parse_requirements(section)
        elif keyword == ":objects":
            for token, type_name in _parse_typed_list(section[1:], ":objects"):
                if type_name not in domain.types:
                    raise TaskDefinitionError(f"Unknown type {type_name} of {token.value} "
                                              f"(line {token.line}, column {token.column})")
                entities.append(Entity(token.value, type_name))
        elif keyword == ":init":
            init += [_parse_atom(atom, ":init") for atom in section[1:]]
        elif keyword == ":goal":
            if len(section) != 2:
                raise PDDLParseError("Expected (:goal <formula>)", *_position(section))
            goal, _ = _parse_conjunction(section[1], ":goal")
        else:
            raise PDDLParseError(f"Unsupported problem section {keyword}", *_position(section))

    if domain_name is not None and domain_name != domain.name:
        raise TaskDefinitionError(f"Problem {name} is defined for domain {domain_name}, not {domain.name}")

    entity_types = {}
    for entity in entities:
        if entity.name in entity_types:
            raise TaskDefinitionError(f"Entity {entity.name} is declared twice")
        entity_types[entity.name] = entity.type

    for atom, node in init + goal:
        _check_atom(domain, entity_types, atom, node)

    return Task(name=name, domain_name=domain_name or domain.name, entities=tuple(entities),
                init=frozenset(atom for atom, _ in init), goal=frozenset(atom for atom, _ in goal))


def parse_plan(text):
    """
    Read a plan file: one ``(action arg ...)`` per line, ``;`` starts a comment.
    """
    steps = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split(";", 1)[0].strip()
        if not line:
            continue
        expression = read_expression(line)
        head = _head(expression)
        if head is None:
            raise PDDLParseError("Expected (<action> <args>)", line_number, expression.column)
        args = tuple(_expect_token(arg, "an action argument").value for arg in expression[1:])
        steps.append(PlanStep(head, args))
    return Plan(tuple(steps))
