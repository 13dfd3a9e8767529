from namoplan.pipeline.config import PipelineConfig, threshold_schedule
from namoplan.pipeline.methods import (FLAX, LEARNED_METHODS, METHODS, PLOI, PLOI_COMP, PLOI_RELAX, PURE, Attempt,
                                       PipelineResult, prune_and_plan, run_flax, run_method, run_ploi, run_ploi_comp,
                                       run_ploi_relax, run_pure)
