from namoplan.bench.metrics import compute_metrics, improvement
from namoplan.bench.presets import PRESETS, BenchPreset, get_preset
from namoplan.bench.report import (BenchReport, DirectionalCheck, ReportRow, directional_check, emit_report, emit_runs,
                                   read_report, read_runs, report_files, sr_gain, write_report)
from namoplan.bench.suite import ALL_METHODS, SuiteConfig, check_run, run_instance, run_suite
