from namoplan.search.deadline import Deadline, DeadlineExpired, VirtualClock, WallClock, make_clock
from namoplan.search.heuristics import DeleteRelaxation, h_add, h_max
from namoplan.search.planners import (SearchOutcome, SearchStats, Verdict, bfs_oracle, plan_task, solve_optimal,
                                      solve_satisficing)
