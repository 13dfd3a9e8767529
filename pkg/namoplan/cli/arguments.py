import argparse

from namoplan.bench.presets import PRESETS
from namoplan.bench.suite import ALL_METHODS

LEVELS = ("easy", "medium", "hard", "expert")


def _add_workflow_arguments(parser):
    parser.add_argument("--show-output",
                        help="Instead of running the tasks, show which output files will/are created.",
                        action="store_true")
    parser.add_argument("--dry-run",
                        help="Do not run any task but set the return value to 0, if the tasks are complete.",
                        action="store_true")
    parser.add_argument("--workers", help="Number of luigi workers, defaults to the parallelism setting.",
                        type=int, default=None)


def _add_instance_argument(parser):
    parser.add_argument("instance", help="Instance file: a grid record (.json) or a PDDL problem (.pddl).")


def _add_quota_arguments(parser, defaults):
    for level in LEVELS:
        parser.add_argument(f"--{level}", type=int, default=defaults.get(level, 0),
                            help=f"Number of {level} instances to keep per size.")


def get_parser():
    parser = argparse.ArgumentParser(prog="namoplan",
                                     description="Planning with learned entity importance on MazeNamo instances.")
    parser.add_argument("--config", help="JSON file with settings, loaded before any flag is applied.")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--result-dir", help="Folder for all workflow outputs (setting result_dir).")
    parser.add_argument("--clock", choices=["wall", "expansions"],
                        help="Measure budgets in wall-clock time or in node expansions (setting clock).")

    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    gen = commands.add_parser("gen", help="Generate random instances without classifying them.")
    gen.add_argument("--size", "-n", type=int, default=10)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--p-stack-on-heavy", type=float, default=0.0)
    gen.add_argument("--output-dir", default="instances")

    dataset = commands.add_parser("dataset", help="Generate and classify instances until all quotas are filled.")
    dataset.add_argument("--sizes", type=int, nargs="+", default=[10])
    dataset.add_argument("--seed", type=int, default=0)
    dataset.add_argument("--split", choices=["eval", "train"], default="eval")
    _add_quota_arguments(dataset, {"easy": 300, "medium": 200, "hard": 100, "expert": 100})
    _add_workflow_arguments(dataset)

    classify = commands.add_parser("classify", help="Difficulty level of one instance.")
    _add_instance_argument(classify)
    classify.add_argument("--budget", type=float, help="Budget in seconds, defaults to the budget of the size.")

    render = commands.add_parser("render", help="Print an instance as text.")
    _add_instance_argument(render)
    render.add_argument("--plan", help="Plan file; the state after executing it is rendered.")

    train = commands.add_parser("train", help="Generate, label and train on easy instances.")
    train.add_argument("--size", "-n", type=int, default=10)
    train.add_argument("--count", type=int, default=200)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--train-seed", type=int, default=0)
    train.add_argument("--epochs", type=int, default=500)
    train.add_argument("--step-size", type=float, default=1e-3)
    train.add_argument("--untied-rounds", action="store_true")
    _add_workflow_arguments(train)

    plan = commands.add_parser("plan", help="Solve one instance with one method.")
    _add_instance_argument(plan)
    plan.add_argument("--method", choices=ALL_METHODS, default="flax")
    plan.add_argument("--model", help="Weight file, needed by every method but pure.")
    plan.add_argument("--budget", type=float, help="Budget in seconds, defaults to the budget of the size.")
    plan.add_argument("--output", help="Write the plan to this file.")

    bench = commands.add_parser("bench", help="Run all methods on the instances of a manifest.")
    bench.add_argument("manifest", nargs="?", help="Manifest of the instances, not needed with --preset.")
    bench.add_argument("--preset", choices=sorted(PRESETS),
                       help="Generate the instances, train the model and run the benchmark of a named setup.")
    bench.add_argument("--model", default="")
    bench.add_argument("--methods", nargs="+", choices=ALL_METHODS, default=list(ALL_METHODS))
    bench.add_argument("--seeds", type=int, nargs="+", default=[0])
    _add_workflow_arguments(bench)

    validate = commands.add_parser("validate", help="Check a plan against a task.")
    _add_instance_argument(validate)
    validate.add_argument("plan", help="Plan file, one (action args...) per line.")
    validate.add_argument("--domain", help="PDDL domain file, defaults to the MazeNamo domain.")

    return parser


def get_cli_arguments(argv=None):
    args = get_parser().parse_args(argv)

    if getattr(args, "show_output", False) and getattr(args, "dry_run", False):
        print("Ignoring --dry-run, as you have given the --show-output parameter.")
    if getattr(args, "workers", None) is not None and args.workers < 1:
        raise AttributeError("Need at least one worker.")

    return args
