import json
import os

import cachetools
import numpy as np
from cachetools.keys import hashkey

from namoplan.gnn.model import HIDDEN, ModelParams, parameter_shapes
from namoplan.scenegraph import EDGE_DIM, NODE_DIM, feature_fingerprint

WEIGHT_FORMAT = "namoplan-gnn"
WEIGHT_VERSION = 1


class WeightFileError(ValueError):
    """Raised for malformed weight files or files written for another feature layout."""


def save(params, file_name):
    """Write the parameters as JSON; floats are written with full precision, so loading is lossless."""
    data = {
        "format": WEIGHT_FORMAT,
        "version": WEIGHT_VERSION,
        "fingerprint": feature_fingerprint(),
        "node_dim": NODE_DIM,
        "edge_dim": EDGE_DIM,
        "hidden": HIDDEN,
        "rounds": params.rounds,
        "tied": params.tied,
        "arrays": {name: {"shape": list(params[name].shape), "values": params[name].ravel().tolist()}
                   for name in params.names()},
    }
    directory = os.path.dirname(os.path.abspath(file_name))
    os.makedirs(directory, exist_ok=True)
    with open(file_name, "w") as f:
        json.dump(data, f, indent=1, sort_keys=True)


def load(file_name):
    """
    Raises:
        WeightFileError: for truncated or malformed files, a different feature layout
            or arrays of unexpected shape.
    """
    try:
        with open(file_name, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as ex:
        raise WeightFileError(f"Malformed weight file {file_name}: {ex}") from None

    if not isinstance(data, dict) or data.get("format") != WEIGHT_FORMAT:
        raise WeightFileError(f"{file_name} is not a weight file")
    if data.get("version") != WEIGHT_VERSION:
        raise WeightFileError(f"Unsupported weight file version {data.get('version')}")

    expected = (NODE_DIM, EDGE_DIM, HIDDEN)
    actual = (data.get("node_dim"), data.get("edge_dim"), data.get("hidden"))
    if actual != expected:
        raise WeightFileError(f"Weight file was written for (node, edge, hidden) dims {actual}, expected {expected}")
    if data.get("fingerprint") != feature_fingerprint():
        raise WeightFileError(f"Weight file was written for another feature layout "
                              f"({data.get('fingerprint')} instead of {feature_fingerprint()})")

    tied = bool(data.get("tied", True))
    if not isinstance(data.get("rounds"), int) or data["rounds"] < 1:
        raise WeightFileError(f"Invalid number of message-passing rounds {data.get('rounds')}")
    shapes = parameter_shapes(tied=tied, rounds=data["rounds"])
    arrays = data.get("arrays", {})
    if sorted(arrays) != sorted(shapes):
        raise WeightFileError(f"Weight file has arrays {sorted(arrays)}, expected {sorted(shapes)}")

    params = {}
    for name, shape in shapes.items():
        values = np.array(arrays[name]["values"], dtype=float)
        if tuple(arrays[name]["shape"]) != shape or values.size != int(np.prod(shape)):
            raise WeightFileError(f"Array {name} has shape {arrays[name]['shape']} with {values.size} values, "
                                  f"expected {list(shape)}")
        params[name] = values.reshape(shape)

    return ModelParams(params, tied=tied, rounds=data["rounds"])


def _file_key(file_name):
    return hashkey(os.path.abspath(file_name), os.path.getmtime(file_name))


@cachetools.cached(cache=cachetools.LRUCache(maxsize=8), key=_file_key)
def load_cached(file_name):
    """Load once per process, path and modification time; benchmark runs share the parameters read-only."""
    return load(file_name)
