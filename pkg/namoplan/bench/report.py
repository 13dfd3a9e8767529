import collections
import csv
import io
import json
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import cachetools
import jinja2

from namoplan.bench.metrics import compute_metrics, improvement
from namoplan.mazenamo.difficulty import DifficultyLevel

FORMATS = ("json", "csv", "markdown")
RUN_COLUMNS = ("instance_id", "n", "level", "method", "seed", "success", "elapsed", "budget", "step_reached",
               "plan_length", "threshold_trace", "set_sizes", "boundary_sensitive", "violations")

TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), "templates")


@dataclass(frozen=True)
class ReportRow:
    n: int
    level: str
    method: str
    runs: int
    sr: float
    wpt: float
    budget: float

    @property
    def normalized_wpt(self):
        return self.wpt / self.budget


@dataclass
class BenchReport:
    rows: List[ReportRow]
    averages: Dict[str, Dict[str, float]]
    records: List[dict]
    header: Dict = field(default_factory=dict)

    @classmethod
    def from_records(cls, records, header=None):
        """Aggregate per (size, level, method); the averages run over all records of a method."""
        records = sorted(records, key=lambda run: (run["n"], DifficultyLevel(run["level"]).rank, run["instance_id"],
                                                   run["method"], run["seed"]))
        groups = collections.defaultdict(list)
        for run in records:
            groups[run["n"], run["level"], run["method"]].append(run)

        rows = []
        for (n, level, method), runs in groups.items():
            budget = runs[0]["budget"]
            sr, wpt = compute_metrics(runs, budget)
            rows.append(ReportRow(n=n, level=level, method=method, runs=len(runs), sr=sr, wpt=wpt, budget=budget))

        by_method = collections.defaultdict(list)
        for run in records:
            by_method[run["method"]].append(run)
        averages = {}
        for method, runs in sorted(by_method.items()):
            usage = [compute_metrics([run], run["budget"])[1] / run["budget"] for run in runs]
            averages[method] = {"sr": sum(run["success"] for run in runs) / len(runs),
                                "wpt_rate": sum(usage) / len(usage), "runs": len(runs)}

        return cls(rows=rows, averages=averages, records=records, header=dict(header or {}))

    @classmethod
    def from_record(cls, record):
        return cls(rows=[ReportRow(**row) for row in record["rows"]], averages=record["averages"],
                   records=record["records"], header=record["header"])

    def to_record(self):
        return {"header": self.header, "rows": [asdict(row) for row in self.rows],
                "averages": self.averages, "records": self.records}

    @property
    def methods(self):
        return sorted({row.method for row in self.rows}, key=_method_order)

    @property
    def violations(self):
        return [(run["instance_id"], run["method"], run["seed"], violation)
                for run in self.records for violation in run.get("violations", ())]

    @property
    def boundary_sensitive(self):
        return [run for run in self.records if run.get("boundary_sensitive")]

    def row(self, n, level, method):
        for row in self.rows:
            if (row.n, row.level, row.method) == (n, level, method):
                return row
        return None


def _method_order(method):
    order = ("pure", "ploi", "ploi+comp", "ploi+relax", "flax")
    return order.index(method) if method in order else len(order), method


def _percent(value):
    return "n/a" if value is None else f"{value:+.2f}%"


def _table(report):
    """Table rows with one SR/WPT cell pair per method and the gains of the full method over pruning."""
    methods = report.methods
    lines = []
    keys = sorted({(row.n, row.level) for row in report.rows}, key=lambda key: (key[0], DifficultyLevel(key[1]).rank))
    for n, level in keys:
        cells = {}
        for method in methods:
            row = report.row(n, level, method)
            cells[method] = (row.sr, row.normalized_wpt) if row else None

        gains = _gains(cells.get("flax"), cells.get("ploi"))
        lines.append({"n": n, "level": level, "cells": cells, "gains": gains})
    return lines


def _gains(flax, ploi):
    if flax is None or ploi is None:
        return None
    # a lower weighted planning time is a gain
    wpt_change = improvement(flax[1], ploi[1])
    return _percent(improvement(flax[0], ploi[0])), _percent(None if wpt_change is None else -wpt_change)


@cachetools.cached(cache={})
def _template(name):
    environment = jinja2.Environment(loader=jinja2.FileSystemLoader(TEMPLATE_DIR), trim_blocks=True,
                                     lstrip_blocks=True, keep_trailing_newline=True)
    return environment.get_template(name)


def _markdown(report):
    averages = {method: (values["sr"], values["wpt_rate"]) for method, values in report.averages.items()}
    return _template("report.md.jinja2").render(header=report.header, methods=report.methods,
                                                lines=_table(report), averages=averages,
                                                average_gains=_gains(averages.get("flax"), averages.get("ploi")),
                                                violations=report.violations,
                                                boundary=len(report.boundary_sensitive),
                                                total=len(report.records))


def _csv(report):
    output = io.StringIO()
    writer = csv.DictWriter(output, fieldnames=RUN_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for run in report.records:
        writer.writerow({key: json.dumps(value) if isinstance(value, (list, dict)) else value
                         for key, value in run.items()})
    return output.getvalue()


def emit_report(report, fmt="markdown"):
    """
    Text of the report as ``json`` (everything), ``csv`` (one line per run)
    or ``markdown`` (the result table).
    """
    if fmt == "json":
        return json.dumps(report.to_record(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(report)
    if fmt == "markdown":
        return _markdown(report)
    raise ValueError(f"Unknown report format {fmt}, use one of {FORMATS}")


def read_report(text):
    return BenchReport.from_record(json.loads(text))


def emit_runs(records):
    """One JSON object per line."""
    return "".join(json.dumps(run, sort_keys=True) + "\n" for run in records)


def read_runs(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def report_files(report):
    """Text of report.md, report.csv, report.json and runs.jsonl."""
    return {"report.md": emit_report(report, "markdown"), "report.csv": emit_report(report, "csv"),
            "report.json": emit_report(report, "json"), "runs.jsonl": emit_runs(report.records)}


def write_report(report, directory):
    os.makedirs(directory, exist_ok=True)
    outputs = report_files(report)
    for file_name, text in outputs.items():
        with open(os.path.join(directory, file_name), "w") as f:
            f.write(text)
    return sorted(outputs)


def sr_gain(report, n=None, level=None) -> Optional[float]:
    """Relative SR gain of the full method over pruning, over all runs or one (size, level) cell."""
    runs = [run for run in report.records if (n is None or run["n"] == n) and (level is None or run["level"] == level)]
    rates = {}
    for method in ("flax", "ploi"):
        method_runs = [run for run in runs if run["method"] == method]
        if not method_runs:
            return None
        rates[method] = sum(run["success"] for run in method_runs) / len(method_runs)
    return improvement(rates["flax"], rates["ploi"])


@dataclass(frozen=True)
class DirectionalCheck:
    """Pooled SR and budget-normalized WPT of two methods on a set of levels."""
    levels: tuple
    challenger: str
    baseline: str
    sr: Dict[str, float]
    wpt_rate: Dict[str, float]
    runs: Dict[str, int]

    @property
    def sr_gap(self):
        return self.sr[self.challenger] - self.sr[self.baseline]

    @property
    def passed(self):
        return self.sr_gap >= 0 and self.wpt_rate[self.challenger] <= self.wpt_rate[self.baseline]

    def summary(self):
        return (f"{self.challenger} vs {self.baseline} on {'+'.join(self.levels)}: "
                f"SR {self.sr[self.challenger]:.3f} / {self.sr[self.baseline]:.3f}, "
                f"WPT rate {self.wpt_rate[self.challenger]:.3f} / {self.wpt_rate[self.baseline]:.3f}")


def directional_check(report, levels=("hard", "expert"), challenger="flax", baseline="ploi"):
    """
    Whether ``challenger`` solves at least as many runs as ``baseline`` on the given levels
    without a higher weighted planning time. Runs of all sizes are pooled, each run's time
    is taken relative to its own budget. None if one of the methods has no run on these levels.
    """
    sr, wpt_rate, counts = {}, {}, {}
    for method in (challenger, baseline):
        runs = [run for run in report.records if run["method"] == method and run["level"] in levels]
        if not runs:
            return None
        sr[method] = sum(run["success"] for run in runs) / len(runs)
        wpt_rate[method] = sum(compute_metrics([run], run["budget"])[1] / run["budget"] for run in runs) / len(runs)
        counts[method] = len(runs)
    return DirectionalCheck(levels=tuple(levels), challenger=challenger, baseline=baseline, sr=sr,
                            wpt_rate=wpt_rate, runs=counts)
