"""
The MazeNamo domain: a robot on a grid which turns, moves, pushes boxes and
picks up and places light boxes, either on the ground or on top of a heavy box.

``{d}to(?a, ?b)`` means cell ``?a`` is the neighbour of ``?b`` in direction ``d``,
e.g. ``upto(?a, ?b)``: ``?a`` is immediately above ``?b``.
"""
import cachetools

from namoplan.pddl.model import Atom, ActionSchema, Domain, PredicateSchema

DOMAIN_NAME = "mazenamo"

DIRECTIONS = ("left", "right", "up", "down")

# turning left: up -> left -> down -> right -> up
LEFT_OF = {"up": "left", "left": "down", "down": "right", "right": "up"}
RIGHT_OF = {after: before for before, after in LEFT_OF.items()}

ROBOT, OBJECT, POS = "robot", "object", "pos"

PREDICATES = (
    PredicateSchema("rat", (ROBOT, POS)),
    PredicateSchema("oat", (OBJECT, POS)),
    PredicateSchema("dirisleft", (ROBOT,)),
    PredicateSchema("dirisright", (ROBOT,)),
    PredicateSchema("dirisup", (ROBOT,)),
    PredicateSchema("dirisdown", (ROBOT,)),
    PredicateSchema("upto", (POS, POS)),
    PredicateSchema("downto", (POS, POS)),
    PredicateSchema("leftto", (POS, POS)),
    PredicateSchema("rightto", (POS, POS)),
    PredicateSchema("isheavy", (OBJECT,)),
    PredicateSchema("islight", (OBJECT,)),
    PredicateSchema("onground", (OBJECT,)),
    PredicateSchema("upon", (OBJECT, OBJECT)),
    PredicateSchema("clear", (OBJECT,)),
    PredicateSchema("handempty", (ROBOT,)),
    PredicateSchema("holding", (ROBOT, OBJECT)),
    PredicateSchema("isempty", (POS,)),
)


def _atom(predicate, *args):
    return Atom(predicate, args)


def _facing(direction):
    return _atom(f"diris{direction}", "?r")


def _schema(name, parameters, pre, add, delete):
    return ActionSchema(name=name, parameters=tuple(parameters),
                        pre=frozenset(pre), add=frozenset(add), delete=frozenset(delete))


def _turn_schemas(direction):
    for turn, table in (("left", LEFT_OF), ("right", RIGHT_OF)):
        yield _schema(f"turn_{turn}_from_{direction}", [("?r", ROBOT)],
                      pre=[_facing(direction)],
                      add=[_facing(table[direction])],
                      delete=[_facing(direction)])


def _move_schema(d):
    return _schema(f"move_{d}", [("?r", ROBOT), ("?p1", POS), ("?p2", POS)],
                   pre=[_atom("rat", "?r", "?p1"), _facing(d), _atom(f"{d}to", "?p2", "?p1"),
                        _atom("isempty", "?p2")],
                   add=[_atom("rat", "?r", "?p2")],
                   delete=[_atom("rat", "?r", "?p1")])


def _push_schema(d):
    return _schema(f"push_{d}", [("?r", ROBOT), ("?p1", POS), ("?p2", POS), ("?p3", POS), ("?o", OBJECT)],
                   pre=[_atom("rat", "?r", "?p1"), _facing(d),
                        _atom(f"{d}to", "?p2", "?p1"), _atom(f"{d}to", "?p3", "?p2"),
                        _atom("oat", "?o", "?p2"), _atom("onground", "?o"), _atom("clear", "?o"),
                        _atom("isempty", "?p3"), _atom("handempty", "?r")],
                   add=[_atom("rat", "?r", "?p2"), _atom("isempty", "?p2"), _atom("oat", "?o", "?p3")],
                   delete=[_atom("rat", "?r", "?p1"), _atom("oat", "?o", "?p2"), _atom("isempty", "?p3")])


def _reach(d):
    """Robot at ?p1, facing ?p2."""
    return [_atom("rat", "?r", "?p1"), _facing(d), _atom(f"{d}to", "?p2", "?p1")]


def _pickup_schemas(d):
    yield _schema(f"pickup_ground_{d}", [("?r", ROBOT), ("?p1", POS), ("?p2", POS), ("?o", OBJECT)],
                  pre=_reach(d) + [_atom("handempty", "?r"), _atom("oat", "?o", "?p2"), _atom("islight", "?o"),
                                   _atom("onground", "?o"), _atom("clear", "?o")],
                  add=[_atom("holding", "?r", "?o"), _atom("isempty", "?p2")],
                  delete=[_atom("handempty", "?r"), _atom("oat", "?o", "?p2"), _atom("onground", "?o"),
                          _atom("clear", "?o")])

    # the base stays in the cell, so it does not become empty
    yield _schema(f"pickup_stacked_{d}",
                  [("?r", ROBOT), ("?p1", POS), ("?p2", POS), ("?o", OBJECT), ("?b", OBJECT)],
                  pre=_reach(d) + [_atom("handempty", "?r"), _atom("upon", "?o", "?b"), _atom("oat", "?o", "?p2"),
                                   _atom("oat", "?b", "?p2"), _atom("islight", "?o"), _atom("isheavy", "?b"),
                                   _atom("clear", "?o")],
                  add=[_atom("holding", "?r", "?o"), _atom("clear", "?b")],
                  delete=[_atom("handempty", "?r"), _atom("upon", "?o", "?b"), _atom("oat", "?o", "?p2"),
                          _atom("clear", "?o")])


def _place_schemas(d):
    yield _schema(f"place_ground_{d}", [("?r", ROBOT), ("?p1", POS), ("?p2", POS), ("?o", OBJECT)],
                  pre=_reach(d) + [_atom("holding", "?r", "?o"), _atom("isempty", "?p2")],
                  add=[_atom("oat", "?o", "?p2"), _atom("onground", "?o"), _atom("clear", "?o"),
                       _atom("handempty", "?r")],
                  delete=[_atom("holding", "?r", "?o"), _atom("isempty", "?p2")])

    # only on a heavy base on the ground, which caps stacks at two boxes
    yield _schema(f"place_on_object_{d}",
                  [("?r", ROBOT), ("?p1", POS), ("?p2", POS), ("?o", OBJECT), ("?b", OBJECT)],
                  pre=_reach(d) + [_atom("holding", "?r", "?o"), _atom("oat", "?b", "?p2"), _atom("isheavy", "?b"),
                                   _atom("clear", "?b"), _atom("onground", "?b")],
                  add=[_atom("upon", "?o", "?b"), _atom("oat", "?o", "?p2"), _atom("clear", "?o"),
                       _atom("handempty", "?r")],
                  delete=[_atom("holding", "?r", "?o"), _atom("clear", "?b")])


@cachetools.cached(cache={})
def mazenamo_domain():
    """The authored domain: 18 predicates, 32 action schemas."""
    actions = []
    for direction in DIRECTIONS:
        actions += _turn_schemas(direction)
    actions += [_move_schema(direction) for direction in DIRECTIONS]
    actions += [_push_schema(direction) for direction in DIRECTIONS]
    for direction in DIRECTIONS:
        actions += _pickup_schemas(direction)
    for direction in DIRECTIONS:
        actions += _place_schemas(direction)

    return Domain(name=DOMAIN_NAME, types=(ROBOT, OBJECT, POS), predicates=PREDICATES, actions=tuple(actions))
