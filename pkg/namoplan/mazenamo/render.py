from functools import singledispatch

from namoplan.mazenamo.domain import DIRECTIONS, POS
from namoplan.mazenamo.encoding import ROBOT_NAME, parse_position, size_of_task
from namoplan.mazenamo.grid import GOAL_GLYPH, Cell, Direction, MazeGrid
from namoplan.pddl.model import Task


@singledispatch
def render_ascii(maze, state=None):
    """
    One character per cell: ``#`` wall, ``H`` heavy, ``L`` light, ``l`` light on heavy,
    ``.`` free, ``G`` goal and the robot as ``<>^v``. Accepts a :obj:`MazeGrid` or a
    :obj:`Task` with an optional state (a set of atoms, the initial state by default).
    """
    raise TypeError(f"Can not render {type(maze).__name__}")


@render_ascii.register(MazeGrid)
def _render_grid(grid, state=None):
    return grid.to_ascii()


@render_ascii.register(Task)
def _render_task(task, state=None):
    if state is None:
        state = task.init

    n = size_of_task(task)
    glyphs = [[Cell.wall.value] * n for _ in range(n)]
    for name in task.entities_of_type(POS):
        row, col = parse_position(name)
        glyphs[row][col] = Cell.free.value

    for atom in task.goal:
        if atom.predicate == "rat":
            row, col = parse_position(atom.args[1])
            glyphs[row][col] = GOAL_GLYPH

    heavy = {atom.args[0] for atom in task.init if atom.predicate == "isheavy"}
    boxes = {}
    robot_cell = facing = None
    held = []
    for atom in state:
        if atom.predicate == "oat":
            boxes.setdefault(parse_position(atom.args[1]), []).append(atom.args[0])
        elif atom.predicate == "rat" and atom.args[0] == ROBOT_NAME:
            robot_cell = parse_position(atom.args[1])
        elif atom.predicate == "holding":
            held.append(atom.args[1])
        elif atom.predicate.startswith("diris") and atom.predicate[5:] in DIRECTIONS:
            facing = Direction[atom.predicate[5:]]

    for (row, col), names in boxes.items():
        if len(names) > 1:
            glyphs[row][col] = Cell.light_on_heavy.value
        elif names[0] in heavy:
            glyphs[row][col] = Cell.heavy.value
        else:
            glyphs[row][col] = Cell.light.value

    if robot_cell is not None and facing is not None:
        glyphs[robot_cell[0]][robot_cell[1]] = facing.value

    text = "\n".join("".join(row) for row in glyphs) + "\n"
    for name in sorted(held):
        text += f"robot holds {name}\n"
    return text
