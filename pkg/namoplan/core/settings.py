import json
import os
import contextlib

# The global object hosting the current settings
_current_global_settings = {}


def get_setting(key, default=None, task=None):
    """
    ``namoplan`` reads every tunable value of the planning pipeline,
    the benchmark harness and the workflow tasks through this function.

    There are three ways settings could be defined.
    They are used in the following order (an earlier setting
    overrides a later one):

    1. If the currently processed (or scheduled) task has a property
       of the given name, it is used.
       This makes it possible to pin e.g. the budget of a single workflow task:

       .. code-block:: python

         class MyBenchmark(namoplan.bench.tasks.BenchmarkTask):
             step1_fraction = 0.3

    2. Settings set directly by the user with a call to
       :meth:`namoplan.set_setting` or loaded from a configuration file
       with :meth:`namoplan.core.settings.load_settings_file`
       (this is what ``namoplan --config <file>`` does).
    3. Settings specified in the ``settings.json`` in the current folder
       *or any folder above that*.

    If there is no setting defined with this name,
    either the default is returned or, if you did not supply any default, a value error is raised.

    Parameters:
        key (:obj:`str`): The name of the setting to query.
        default (optional): Returned if no setting with this name exists.
        task: (:obj:`luigi.Task`): If given, check if the task has an attribute
            with this name.
    """
    try:
        return _get_setting_implementation(key=key, task=task)
    except KeyError:
        pass

    if default is None:
        raise ValueError(f"No settings found for {key}!")
    return default


def set_setting(key, value):
    """
    Set the setting with the specified name - overriding any ``settings.json``.
    If you want to have task specific settings, create a
    parameter with the given name on your task.
    """
    _current_global_settings[key] = value


def clear_setting(key):
    """
    Clear the setting with the given key
    """
    try:
        del _current_global_settings[key]
    except KeyError:
        pass


def load_settings_file(file_name):
    """
    Load all key/value pairs of the given JSON file as if they were
    given to :meth:`set_setting`. Returns the loaded keys.
    """
    with open(file_name, "r") as f:
        loaded = json.load(f)

    if not isinstance(loaded, dict):
        raise ValueError(f"The configuration file {file_name} needs to contain a JSON object.")

    for key, value in loaded.items():
        set_setting(key, value)

    return sorted(loaded)


def _setting_file_iterator():
    path = os.getcwd()

    while True:
        json_file = os.path.join(path, "settings.json")
        if os.path.exists(json_file):
            yield json_file

        parent = os.path.split(path)[0]
        if parent == path:
            break
        path = parent


@contextlib.contextmanager
def with_new_settings():
    global _current_global_settings
    old_settings = _current_global_settings.copy()
    _current_global_settings = {}

    try:
        yield
    finally:
        _current_global_settings = old_settings.copy()


def _get_setting_implementation(key, task):
    """
    Implementation of the settings retrieval.
    Either get it from the task,
    or from the user-defined settings
    or from the setting files.
    If nothing is set, raise a KeyError.
    """
    if task:
        try:
            return getattr(task, key)
        except AttributeError:
            pass

    try:
        return _current_global_settings[key]
    except KeyError:
        pass

    for settings_file in _setting_file_iterator():
        try:
            with open(settings_file, "r") as f:
                j = json.load(f)
                return j[key]
        except KeyError:
            pass

    raise KeyError(f"No settings found for {key}!")
