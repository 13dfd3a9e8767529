import hashlib

import luigi


def wrap_parameter():
    """
    Monkey patch the luigi parameter base class to include an additional "hashed"
    argument in its constructor.

    Hashed parameters are replaced by the md5 of their value when the output
    path of a task is built. The benchmark tasks use this for their method and
    seed lists, whose values would otherwise create paths containing "[" and ",".
    """
    parameter_class = luigi.Parameter

    if getattr(parameter_class, "_namoplan_wrapped", False):
        return

    def serialize_hashed(self, x):
        return "hashed_" + hashlib.md5(str(x).encode()).hexdigest()

    old_init = parameter_class.__init__

    def __init__(self, *args, hashed=False, **kwargs):
        old_init(self, *args, **kwargs)

        if hashed:
            self.serialize_hashed = lambda x: serialize_hashed(self, x)

    parameter_class.__init__ = __init__
    parameter_class._namoplan_wrapped = True
