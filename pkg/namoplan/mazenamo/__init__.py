from namoplan.mazenamo.domain import DIRECTIONS, DOMAIN_NAME, mazenamo_domain
from namoplan.mazenamo.grid import Cell, Direction, GenConfig, MazeGrid, NoFreeCellError, generate
from namoplan.mazenamo.encoding import ROBOT_NAME, object_name, parse_position, position_name, to_task
from namoplan.mazenamo.render import render_ascii
from namoplan.mazenamo.difficulty import (DifficultyLevel, LEVELS, budget_for_size, classify, classify_difficulty)
from namoplan.mazenamo.dataset import (DatasetConfig, QuotaUnreachableError, build_dataset, iter_instances,
                                       load_instance, load_manifest)
