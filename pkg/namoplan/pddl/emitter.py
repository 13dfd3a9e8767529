import os
from collections import OrderedDict

import cachetools
from jinja2 import Template

_TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.realpath(__file__)), "templates")


@cachetools.cached(cache={})
def _load_template(file_name):
    with open(os.path.join(_TEMPLATE_DIR, file_name), "r") as template_file:
        return Template(template_file.read())


def emit_domain(domain):
    """Write the domain as PDDL text, ``parse_domain(emit_domain(d)) == d``."""
    return _load_template("domain.pddl.jinja2").render(domain=domain) + "\n"


def emit_task(task):
    """Write the task as a PDDL problem, entities grouped by type in order of appearance."""
    objects = OrderedDict()
    for entity in task.entities:
        objects.setdefault(entity.type, []).append(entity.name)

    return _load_template("task.pddl.jinja2").render(task=task, objects=list(objects.items())) + "\n"


def emit_plan(plan):
    return "".join(f"{step}\n" for step in plan)
