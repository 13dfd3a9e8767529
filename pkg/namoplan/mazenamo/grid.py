import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


class NoFreeCellError(ValueError):
    """Raised when a generated grid has fewer than two free cells for robot and goal."""


class Cell(enum.Enum):
    wall = "#"
    heavy = "H"
    light = "L"
    light_on_heavy = "l"
    free = "."


class Direction(enum.Enum):
    left = "<"
    right = ">"
    up = "^"
    down = "v"


GOAL_GLYPH = "G"
ROBOT_GLYPHS = {direction.value: direction for direction in Direction}

# order of the categorical draw in generate()
_SAMPLED_CELLS = (Cell.wall, Cell.heavy, Cell.light, Cell.free)


@dataclass(frozen=True)
class MazeGrid:
    """
    An n x n maze. Cells are indexed (row, column) from the top left corner;
    the border is always wall, robot and goal stand on distinct free cells.
    """
    n: int
    cells: Tuple[Tuple[Cell, ...], ...]
    robot: Tuple[int, int]
    robot_dir: Direction
    goal: Tuple[int, int]
    seed: Optional[int] = None

    def __post_init__(self):
        if len(self.cells) != self.n or any(len(row) != self.n for row in self.cells):
            raise ValueError(f"A grid of size {self.n} needs {self.n} rows of {self.n} cells")

        for row in range(self.n):
            for col in range(self.n):
                on_border = row in (0, self.n - 1) or col in (0, self.n - 1)
                if on_border and self.cells[row][col] is not Cell.wall:
                    raise ValueError(f"Border cell {(row, col)} is not a wall")

        if self.robot == self.goal:
            raise ValueError("Robot and goal need to be on different cells")
        for what, cell in (("robot", self.robot), ("goal", self.goal)):
            if self.cell(*cell) is not Cell.free:
                raise ValueError(f"The {what} cell {cell} is not free")

    def cell(self, row, col):
        return self.cells[row][col]

    def positions(self):
        """All non-wall cells, row-major."""
        return [(row, col) for row in range(self.n) for col in range(self.n)
                if self.cells[row][col] is not Cell.wall]

    @property
    def instance_id(self):
        seed = "x" if self.seed is None else f"{self.seed:06d}"
        return f"namo-n{self.n}-s{seed}"

    def to_ascii(self):
        lines = []
        for row in range(self.n):
            line = ""
            for col in range(self.n):
                if (row, col) == self.robot:
                    line += self.robot_dir.value
                elif (row, col) == self.goal:
                    line += GOAL_GLYPH
                else:
                    line += self.cells[row][col].value
            lines.append(line)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_ascii(cls, text, seed=None):
        """Inverse of :meth:`to_ascii`. Lines after the n x n block are ignored."""
        lines = [line.rstrip() for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("Empty maze")
        n = len(lines[0])
        lines = lines[:n]

        cells = []
        robot = goal = robot_dir = None
        for row, line in enumerate(lines):
            if len(line) != n:
                raise ValueError(f"Line {row} has {len(line)} cells, expected {n}")
            parsed = []
            for col, glyph in enumerate(line):
                if glyph in ROBOT_GLYPHS:
                    robot, robot_dir = (row, col), ROBOT_GLYPHS[glyph]
                    parsed.append(Cell.free)
                elif glyph == GOAL_GLYPH:
                    goal = (row, col)
                    parsed.append(Cell.free)
                else:
                    try:
                        parsed.append(Cell(glyph))
                    except ValueError:
                        raise ValueError(f"Unknown glyph {glyph!r} at {(row, col)}") from None
            cells.append(tuple(parsed))

        if robot is None or goal is None:
            raise ValueError("A maze needs a robot and a goal")
        return cls(n=n, cells=tuple(cells), robot=robot, robot_dir=robot_dir, goal=goal, seed=seed)

    def to_record(self):
        return {
            "n": self.n,
            "seed": self.seed,
            "cells": "".join(cell.value for row in self.cells for cell in row),
            "robot": {"cell": list(self.robot), "dir": self.robot_dir.name},
            "goal": list(self.goal),
        }

    @classmethod
    def from_record(cls, record):
        n = record["n"]
        flat = record["cells"]
        if len(flat) != n * n:
            raise ValueError(f"Expected {n * n} cells, got {len(flat)}")
        cells = tuple(tuple(Cell(glyph) for glyph in flat[row * n:(row + 1) * n]) for row in range(n))
        return cls(n=n, cells=cells, robot=tuple(record["robot"]["cell"]),
                   robot_dir=Direction[record["robot"]["dir"]], goal=tuple(record["goal"]), seed=record.get("seed"))


@dataclass(frozen=True)
class GenConfig:
    n: int
    seed: int = 0
    p_wall: float = 0.20
    p_heavy: float = 0.10
    p_light: float = 0.15
    p_free: float = 0.55
    # chance that a heavy box carries a light one; the i.i.d. cell model has none
    p_stack_on_heavy: float = 0.0

    def __post_init__(self):
        probabilities = (self.p_wall, self.p_heavy, self.p_light, self.p_free)
        if any(p < 0 for p in probabilities) or not math.isclose(sum(probabilities), 1.0, abs_tol=1e-9):
            raise ValueError(f"Cell probabilities need to be non-negative and sum to 1, got {probabilities}")
        if not 0 <= self.p_stack_on_heavy <= 1:
            raise ValueError("p_stack_on_heavy needs to be in [0, 1]")

    @property
    def probabilities(self):
        return (self.p_wall, self.p_heavy, self.p_light, self.p_free)


def generate(cfg):
    """
    Random maze: wall border, interior cells drawn independently with the configured
    probabilities, robot (with random orientation) and goal on two distinct free cells.
    Deterministic in ``cfg.seed``.

    Raises:
        NoFreeCellError: if fewer than two interior cells are free.
    """
    if cfg.n < 4:
        raise ValueError(f"Mazes need a size of at least 4, got {cfg.n}")

    rng = np.random.default_rng(cfg.seed)
    inner = cfg.n - 2
    draws = rng.choice(len(_SAMPLED_CELLS), size=(inner, inner), p=np.array(cfg.probabilities))
    stacked = rng.random(size=(inner, inner)) < cfg.p_stack_on_heavy

    cells = [[Cell.wall] * cfg.n for _ in range(cfg.n)]
    for row in range(inner):
        for col in range(inner):
            cell = _SAMPLED_CELLS[draws[row, col]]
            if cell is Cell.heavy and stacked[row, col]:
                cell = Cell.light_on_heavy
            cells[row + 1][col + 1] = cell

    free = [(row, col) for row in range(cfg.n) for col in range(cfg.n) if cells[row][col] is Cell.free]
    if len(free) < 2:
        raise NoFreeCellError(f"Maze with seed {cfg.seed} has {len(free)} free cells, need 2")

    robot_index, goal_index = rng.choice(len(free), size=2, replace=False)
    robot_dir = list(Direction)[rng.integers(len(Direction))]

    return MazeGrid(n=cfg.n, cells=tuple(tuple(row) for row in cells), robot=free[robot_index],
                    robot_dir=robot_dir, goal=free[goal_index], seed=cfg.seed)


def interior_cell_frequencies(grids):
    """Share of wall, heavy, light and free interior cells over the given grids."""
    counts = np.zeros(len(_SAMPLED_CELLS))
    for grid in grids:
        for row in range(1, grid.n - 1):
            for col in range(1, grid.n - 1):
                cell = grid.cell(row, col)
                if cell is Cell.light_on_heavy:
                    cell = Cell.heavy
                counts[_SAMPLED_CELLS.index(cell)] += 1
    return counts / counts.sum()
