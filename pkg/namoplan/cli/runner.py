import collections

import luigi
from colorama import Fore, Style

from namoplan.core.settings import get_setting
from namoplan.core.utils import get_all_output_files_in_tree, task_iterator


def run_luigi(task_list, workers=None, log_level="INFO", **kwargs):
    """Build the tasks with a local scheduler. Returns True if every task is complete afterwards."""
    kwargs["local_scheduler"] = True
    kwargs["workers"] = workers or int(get_setting("parallelism", default=1))
    kwargs.setdefault("log_level", log_level)
    return luigi.build(task_list, **kwargs)


def show_all_outputs(task_list):
    all_output_files = collections.defaultdict(list)

    for task in task_list:
        output_files = get_all_output_files_in_tree(task)
        for key, file_names in output_files.items():
            all_output_files[key] += file_names

    for key, file_names in all_output_files.items():
        print(key)

        file_names = {d["file_name"]: d["exists"] for d in file_names}
        for file_name, exists in file_names.items():
            if exists:
                print("\t", Fore.GREEN, file_name, Style.RESET_ALL)
            else:
                print("\t", Fore.RED, file_name, Style.RESET_ALL)
        print()


def dry_run(task_list):
    """Print the tasks which would run. Returns the number of incomplete tasks."""
    nonfinished_task_list = collections.defaultdict(set)

    for root_task in task_list:
        for task in task_iterator(root_task, only_non_complete=True):
            nonfinished_task_list[task.__class__.__name__].add(task)

    non_completed_tasks = 0
    for task_class in sorted(nonfinished_task_list):
        print(task_class)
        for task in sorted(nonfinished_task_list[task_class], key=str):
            print("\tWould run", task)
            non_completed_tasks += 1
        print()

    if non_completed_tasks:
        print("In total", non_completed_tasks)
    else:
        print("All tasks are finished!")
    return non_completed_tasks


def process(task_list, args):
    """Run, show or dry-run the workflow as requested on the command line. Returns the exit code."""
    if args.show_output:
        show_all_outputs(task_list)
        return 0
    if args.dry_run:
        return 1 if dry_run(task_list) else 0
    return 0 if run_luigi(task_list, workers=args.workers, log_level=args.log_level) else 1
