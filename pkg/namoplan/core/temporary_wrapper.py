from contextlib import ExitStack
from functools import wraps


def on_temporary_files(run_function):
    """
    Decorate a task's run function so that ``get_output_file_name`` hands out
    temporary paths, which are moved to their final place only if ``run`` returns
    without an exception.

    Dataset generation and benchmark runs take long; a half-written manifest or
    report would otherwise look like a finished target to the luigi scheduler::

        class MyTask(namoplan.Task):
            def output(self):
                yield self.add_to_output("manifest.json")

            @namoplan.on_temporary_files
            def run(self):
                with open(self.get_output_file_name("manifest.json"), "w") as f:
                    f.write(...)

    *Attention*: only ``get_output_file_name`` is redirected. Using the output
    targets directly bypasses the temporary files.
    """
    @wraps(run_function)
    def run(self):
        final_names = self.get_output_file_name

        with ExitStack() as stack:
            temporary_names = {}

            def get_output_file_name(key):
                if key not in temporary_names:
                    target = self._get_output_target(key)
                    temporary_names[key] = stack.enter_context(target.temporary_path())
                return temporary_names[key]

            self.get_output_file_name = get_output_file_name
            try:
                run_function(self)
            finally:
                self.get_output_file_name = final_names

    return run
