import logging
import os
import sys

import colorama

from namoplan.cli import runner
from namoplan.cli.arguments import LEVELS, get_cli_arguments
from namoplan.core.settings import load_settings_file, set_setting
from namoplan.core.utils import dump_json, load_json
from namoplan.mazenamo.difficulty import budget_for_size, classify
from namoplan.mazenamo.domain import mazenamo_domain
from namoplan.mazenamo.encoding import size_of_task, to_task
from namoplan.mazenamo.grid import GenConfig, MazeGrid, generate
from namoplan.mazenamo.render import render_ascii
from namoplan.pddl.emitter import emit_plan, emit_task
from namoplan.pddl.parser import parse_domain, parse_plan, parse_task
from namoplan.pddl.validate import GOAL_UNSATISFIED, validate_plan
from namoplan.search.deadline import make_clock

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVARIANT_VIOLATION = 2


def _success(*message):
    print(colorama.Fore.GREEN + " ".join(str(m) for m in message) + colorama.Style.RESET_ALL)


def _failure(*message):
    print(colorama.Fore.RED + " ".join(str(m) for m in message) + colorama.Style.RESET_ALL)


def _read(file_name):
    with open(file_name, "r") as f:
        return f.read()


def load_task(file_name, domain=None):
    """A task from a grid record (.json) or a PDDL problem file."""
    if file_name.endswith(".json"):
        return to_task(MazeGrid.from_record(load_json(file_name)))
    return parse_task(_read(file_name), domain or mazenamo_domain())


def _gen(args):
    os.makedirs(args.output_dir, exist_ok=True)
    for offset in range(args.count):
        grid = generate(GenConfig(n=args.size, seed=args.seed + offset, p_stack_on_heavy=args.p_stack_on_heavy))
        task = to_task(grid)
        base = os.path.join(args.output_dir, grid.instance_id)
        dump_json(grid.to_record(), base + ".json")
        with open(base + ".pddl", "w") as f:
            f.write(emit_task(task))
        print(grid.instance_id)
        print(grid.to_ascii())
    return EXIT_OK


def _dataset(args):
    from namoplan.bench.tasks import InstanceSetTask

    quotas = {level: getattr(args, level) for level in LEVELS if getattr(args, level)}
    task = InstanceSetTask(split=args.split, sizes=args.sizes, quotas=quotas, seed=args.seed)
    code = runner.process([task], args)
    if code == EXIT_OK and not (args.show_output or args.dry_run):
        _success("Manifest written to", task.get_output_file_name("manifest.json"))
    return code


def _classify(args):
    task = load_task(args.instance)
    budget = args.budget or budget_for_size(size_of_task(task))
    classification = classify(task, budget, clock=make_clock())
    print(f"{task.name}: {classification.level.value} ({classification.elapsed:.3f} s of {budget} s)")
    return EXIT_OK


def _render(args):
    task = load_task(args.instance)
    state = None
    if args.plan:
        validation = validate_plan(mazenamo_domain(), task, parse_plan(_read(args.plan)))
        if validation.failed_step is not None and validation.reason != GOAL_UNSATISFIED:
            _failure(validation.message)
            return EXIT_FAILED
        state = validation.final_state
    print(render_ascii(task, state), end="")
    return EXIT_OK


def _train(args):
    from namoplan.bench.tasks import TrainModelTask

    task = TrainModelTask(sizes=[args.size], quotas={"easy": args.count}, seed=args.seed,
                          train_seed=args.train_seed, epochs=args.epochs, step_size=args.step_size,
                          untied_rounds=args.untied_rounds)
    code = runner.process([task], args)
    if code == EXIT_OK and not (args.show_output or args.dry_run):
        _success("Weights written to", task.get_output_file_name("weights.json"))
    return code


def _plan(args):
    from namoplan.gnn.model import GNNScorer
    from namoplan.gnn.weights import load
    from namoplan.pipeline.config import PipelineConfig
    from namoplan.pipeline.methods import LEARNED_METHODS, run_method

    task = load_task(args.instance)
    model = None
    if args.method in LEARNED_METHODS:
        if not args.model:
            _failure(f"Method {args.method} needs a --model")
            return EXIT_FAILED
        model = GNNScorer(load(args.model))

    budget = args.budget or budget_for_size(size_of_task(task))
    result = run_method(args.method, task, model, PipelineConfig.from_settings(budget=budget))

    if not result.success:
        _failure(f"{args.method} found no plan for {task.name} within {budget} s")
        return EXIT_FAILED

    text = emit_plan(result.plan)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    print(text, end="")
    _success(f"{args.method}: {len(result.plan)} steps after {result.elapsed:.3f} s (step {result.step_reached})")
    return EXIT_OK


def _bench(args):
    from namoplan.bench.tasks import BenchmarkTask

    if args.preset:
        if args.manifest:
            _failure("Give either a manifest or --preset, not both")
            return EXIT_FAILED
        return _bench_preset(args)
    if not args.manifest:
        _failure("bench needs a manifest or --preset")
        return EXIT_FAILED

    task = BenchmarkTask(manifest=os.path.abspath(args.manifest), model=args.model and os.path.abspath(args.model),
                         methods=args.methods, seeds=args.seeds)
    return _run_benchmark(task, args)


def _bench_preset(args):
    """Instances and model first, the benchmark can only be set up once the manifest exists."""
    from namoplan.bench.presets import get_preset
    from namoplan.bench.tasks import preset_benchmark, preset_tasks

    preset = get_preset(args.preset)
    instances, model = preset_tasks(preset)
    code = runner.process([instances, model], args)
    if code != EXIT_OK or args.show_output:
        return code
    return _run_benchmark(preset_benchmark(preset, instances, model), args, preset=preset)


def _run_benchmark(task, args, preset=None):
    from namoplan.bench.report import directional_check, read_report, sr_gain

    code = runner.process([task], args)
    if code != EXIT_OK or args.show_output or args.dry_run:
        return code

    report = read_report(_read(task.get_output_file_name("report.json")))
    print(_read(task.get_output_file_name("report.md")), end="")

    gain = sr_gain(report)
    if gain is not None:
        print(f"SR gain of flax over ploi: {gain:+.2f}%")
    if report.violations:
        for instance_id, method, seed, violation in report.violations:
            _failure(f"{instance_id} / {method} / seed {seed}: {violation}")
        return EXIT_INVARIANT_VIOLATION

    if preset is not None:
        check = directional_check(report, levels=preset.check_levels)
        if check is None:
            _failure(f"No flax and ploi runs on {', '.join(preset.check_levels)} instances to compare")
            return EXIT_FAILED
        if not check.passed:
            _failure("Directional check failed:", check.summary())
            return EXIT_FAILED
        _success("Directional check passed:", check.summary())

    _success("Report written to", os.path.dirname(task.get_output_file_name("report.md")))
    return EXIT_OK


def _validate(args):
    domain = parse_domain(_read(args.domain)) if args.domain else mazenamo_domain()
    task = load_task(args.instance, domain)
    validation = validate_plan(domain, task, parse_plan(_read(args.plan)))
    if not validation:
        _failure(f"Invalid plan: {validation.message}")
        return EXIT_FAILED
    _success("Valid plan")
    return EXIT_OK


COMMANDS = {
    "gen": _gen,
    "dataset": _dataset,
    "classify": _classify,
    "render": _render,
    "train": _train,
    "plan": _plan,
    "bench": _bench,
    "validate": _validate,
}


def apply_global_arguments(args):
    if args.config:
        load_settings_file(args.config)
    if args.result_dir:
        set_setting("result_dir", args.result_dir)
    if args.clock:
        set_setting("clock", args.clock)
    logging.basicConfig(level=getattr(logging, args.log_level))


def main(argv=None):
    """
    Entry point of the ``namoplan`` command. Returns (and exits with) 0 on success,
    1 if the command failed and 2 if a benchmark run violated an invariant.
    """
    colorama.init()
    args = get_cli_arguments(argv)
    apply_global_arguments(args)

    try:
        code = COMMANDS[args.command](args)
    except (OSError, ValueError) as ex:
        _failure(f"{args.command} failed: {ex}")
        code = EXIT_FAILED

    if argv is None:
        sys.exit(code)
    return code
