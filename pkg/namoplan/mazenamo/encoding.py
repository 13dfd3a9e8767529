import parse

from namoplan.mazenamo.domain import DOMAIN_NAME, OBJECT, POS, ROBOT
from namoplan.mazenamo.grid import Cell
from namoplan.pddl.model import Atom, Entity, Task

ROBOT_NAME = "robot"

_POSITION_FORMAT = parse.compile("p{row:d}_{col:d}")
_SIZE_FORMAT = parse.compile("-n{n:d}-")


def position_name(row, col):
    return f"p{row:02d}_{col:02d}"


def object_name(row, col, top=False):
    return f"o{row:02d}_{col:02d}" + ("_top" if top else "")


def parse_position(name):
    """(row, col) of a position entity name, None for other names."""
    result = _POSITION_FORMAT.parse(name)
    if result is None:
        return None
    return result["row"], result["col"]


def size_of_task(task):
    """Grid size encoded in the task name, falling back to the largest position index."""
    result = _SIZE_FORMAT.search(task.name)
    if result is not None:
        return result["n"]

    cells = [parse_position(name) for name in task.entities_of_type(POS)]
    return max(max(cell) for cell in cells if cell is not None) + 2


def _box_atoms(name, position, heavy):
    return [Atom("oat", (name, position)),
            Atom("isheavy" if heavy else "islight", (name,))]


def to_task(grid, name=None):
    """
    Typed PDDL task of the grid. Walls are no entities; every other cell is a ``pos``,
    every box an ``object``. Adjacency atoms connect orthogonally neighbouring
    non-wall cells in both directions.
    """
    entities = [Entity(ROBOT_NAME, ROBOT)]
    init = {Atom("rat", (ROBOT_NAME, position_name(*grid.robot))),
            Atom(f"diris{grid.robot_dir.name}", (ROBOT_NAME,)),
            Atom("handempty", (ROBOT_NAME,))}

    non_wall = set(grid.positions())
    for row, col in sorted(non_wall):
        position = position_name(row, col)
        entities.append(Entity(position, POS))

        cell = grid.cell(row, col)
        if cell is Cell.free:
            init.add(Atom("isempty", (position,)))
        else:
            base = object_name(row, col)
            entities.append(Entity(base, OBJECT))
            init.update(_box_atoms(base, position, heavy=cell is not Cell.light))
            init.add(Atom("onground", (base,)))

            if cell is Cell.light_on_heavy:
                top = object_name(row, col, top=True)
                entities.append(Entity(top, OBJECT))
                init.update(_box_atoms(top, position, heavy=False))
                init.update([Atom("upon", (top, base)), Atom("clear", (top,))])
            else:
                init.add(Atom("clear", (base,)))

        if (row - 1, col) in non_wall:
            above = position_name(row - 1, col)
            init.add(Atom("upto", (above, position)))
            init.add(Atom("downto", (position, above)))
        if (row, col - 1) in non_wall:
            left = position_name(row, col - 1)
            init.add(Atom("leftto", (left, position)))
            init.add(Atom("rightto", (position, left)))

    goal = {Atom("rat", (ROBOT_NAME, position_name(*grid.goal)))}
    return Task(name=name or grid.instance_id, domain_name=DOMAIN_NAME, entities=tuple(entities),
                init=frozenset(init), goal=frozenset(goal))
