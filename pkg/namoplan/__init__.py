"""Neuro-symbolic task planning on maze navigation-among-movable-obstacles problems"""
__version__ = "0.1.0"

from luigi import *

from namoplan.core.parameter import wrap_parameter

wrap_parameter()

from namoplan.core.task import Task
from namoplan.core.temporary_wrapper import on_temporary_files
from namoplan.core.settings import get_setting, set_setting, clear_setting


class requires(object):
    """
    This "hack" copies the luigi.requires functionality, except that we allow for
    additional kwarg arguments when called.

    It can be used to require a certain task, but with some variables already set,
    e.g.

        @namoplan.requires(InstanceSetTask, split="train")
        class TrainingSetTask(namoplan.Task):
            ...

    TrainingSetTask will require InstanceSetTask with ``split`` fixed to ``"train"``,
    and only exposes the remaining parameters of InstanceSetTask.
    """

    def __init__(self, task_to_require, **kwargs):
        super(requires, self).__init__()
        self.kwargs = kwargs
        self.task_to_require = task_to_require

    def __call__(self, task_that_requires):
        # Get all parameter objects from the underlying task
        for param_name, param_obj in self.task_to_require.get_params():
            # Check if the parameter exists in the inheriting task
            if not hasattr(task_that_requires, param_name) and param_name not in self.kwargs:
                # If not, add it to the inheriting task
                setattr(task_that_requires, param_name, param_obj)

        old_requires = task_that_requires.requires

        def requires(_self):
            yield from old_requires(_self) or []
            yield _self.clone(cls=self.task_to_require, **self.kwargs)

        task_that_requires.requires = requires

        return task_that_requires
