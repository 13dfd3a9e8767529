"""
Importance predictor: a message-passing graph network over :obj:`~namoplan.scenegraph.SceneGraph`.

Node and edge features are encoded by one hidden block each, followed by three rounds of
edge update (edge, sender, receiver) and node update (node, mean of incoming edges), and a
linear decoder with a sigmoid per node. A hidden block is Linear -> ReLU -> LayerNorm.
Forward and backward passes are written out in numpy.
"""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from namoplan.scenegraph import EDGE_DIM, NODE_DIM, encode

HIDDEN = 16
ROUNDS = 3
LAYER_NORM_EPS = 1e-5
LOSS_CLAMP = 1e-12


def _block_shapes(prefix, fan_in):
    return {f"{prefix}.weight": (fan_in, HIDDEN), f"{prefix}.bias": (HIDDEN,),
            f"{prefix}.gain": (HIDDEN,), f"{prefix}.shift": (HIDDEN,)}


def _round_prefix(kind, number, tied):
    return kind if tied else f"{kind}_{number}"


def parameter_shapes(tied=True, rounds=ROUNDS):
    shapes = {}
    shapes.update(_block_shapes("node_encoder", NODE_DIM))
    shapes.update(_block_shapes("edge_encoder", EDGE_DIM))
    for number in range(1 if tied else rounds):
        shapes.update(_block_shapes(_round_prefix("edge_update", number, tied), 3 * HIDDEN))
        shapes.update(_block_shapes(_round_prefix("node_update", number, tied), 2 * HIDDEN))
    shapes["decoder.weight"] = (HIDDEN, 1)
    shapes["decoder.bias"] = (1,)
    return shapes


@dataclass
class ModelParams:
    arrays: Dict[str, np.ndarray]
    tied: bool = True
    rounds: int = ROUNDS

    def __getitem__(self, name):
        return self.arrays[name]

    def names(self):
        return sorted(self.arrays)

    def copy(self):
        return ModelParams({name: value.copy() for name, value in self.arrays.items()}, self.tied, self.rounds)

    def zeros_like(self):
        return ModelParams({name: np.zeros_like(value) for name, value in self.arrays.items()}, self.tied, self.rounds)

    def equals(self, other):
        return (self.tied == other.tied and self.rounds == other.rounds and self.names() == other.names()
                and all(np.array_equal(self.arrays[name], other.arrays[name]) for name in self.names()))

    def norm(self):
        return float(np.sqrt(sum(np.sum(value ** 2) for value in self.arrays.values())))


def init(seed, tied=True):
    """Uniform weights in +-1/sqrt(fan_in), zero biases, unit layer-norm gains."""
    rng = np.random.default_rng(seed)
    arrays = {}
    for name, shape in parameter_shapes(tied).items():
        if name.endswith(".weight"):
            limit = 1.0 / np.sqrt(shape[0])
            arrays[name] = rng.uniform(-limit, limit, size=shape)
        elif name.endswith(".gain"):
            arrays[name] = np.ones(shape)
        else:
            arrays[name] = np.zeros(shape)
    return ModelParams(arrays, tied=tied)


def sigmoid(x):
    return np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))), np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))


def _block_forward(params, prefix, x):
    z = x @ params[f"{prefix}.weight"] + params[f"{prefix}.bias"]
    a = np.maximum(z, 0.0)
    mean = a.mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt(a.var(axis=1, keepdims=True) + LAYER_NORM_EPS)
    normed = (a - mean) * inv_std
    out = normed * params[f"{prefix}.gain"] + params[f"{prefix}.shift"]
    return out, (prefix, x, z, normed, inv_std)


def _block_backward(params, cache, d_out, grads):
    prefix, x, z, normed, inv_std = cache
    grads[f"{prefix}.gain"] += (d_out * normed).sum(axis=0)
    grads[f"{prefix}.shift"] += d_out.sum(axis=0)

    d_normed = d_out * params[f"{prefix}.gain"]
    d_a = inv_std * (d_normed - d_normed.mean(axis=1, keepdims=True)
                     - normed * (d_normed * normed).mean(axis=1, keepdims=True))
    d_z = d_a * (z > 0)

    grads[f"{prefix}.weight"] += x.T @ d_z
    grads[f"{prefix}.bias"] += d_z.sum(axis=0)
    return d_z @ params[f"{prefix}.weight"].T


def _check_dims(graph):
    if graph.nodes.ndim != 2 or graph.nodes.shape[1] != NODE_DIM:
        raise ValueError(f"Node features need dimension {NODE_DIM}, got shape {graph.nodes.shape}")
    if graph.edges.ndim != 2 or graph.edges.shape[1] != EDGE_DIM:
        raise ValueError(f"Edge features need dimension {EDGE_DIM}, got shape {graph.edges.shape}")


def _forward(params, graph):
    _check_dims(graph)
    senders, receivers = graph.senders, graph.receivers
    incoming = np.bincount(receivers, minlength=graph.num_nodes).astype(float)
    share = 1.0 / np.maximum(incoming, 1.0)

    caches = []
    h, cache = _block_forward(params, "node_encoder", graph.nodes)
    caches.append(cache)
    e, cache = _block_forward(params, "edge_encoder", graph.edges)
    caches.append(cache)

    for number in range(params.rounds):
        e, cache = _block_forward(params, _round_prefix("edge_update", number, params.tied),
                                  np.concatenate([e, h[senders], h[receivers]], axis=1))
        caches.append(cache)

        aggregated = np.zeros((graph.num_nodes, HIDDEN))
        np.add.at(aggregated, receivers, e)
        aggregated *= share[:, None]

        h, cache = _block_forward(params, _round_prefix("node_update", number, params.tied),
                                  np.concatenate([h, aggregated], axis=1))
        caches.append(cache)

    logits = (h @ params["decoder.weight"] + params["decoder.bias"])[:, 0]
    return sigmoid(logits), (h, caches, share)


def forward(params, graph):
    """Importance score in (0, 1) per node of the graph."""
    scores, _ = _forward(params, graph)
    return scores


def preactivations(params, graph):
    """All ReLU inputs of a forward pass, for checks close to the ReLU kink."""
    _, (_, caches, _) = _forward(params, graph)
    return np.concatenate([cache[2].ravel() for cache in caches])


def loss(scores, labels):
    """Mean binary cross-entropy over the nodes."""
    scores = np.clip(np.asarray(scores, dtype=float), LOSS_CLAMP, 1.0 - LOSS_CLAMP)
    labels = np.asarray(labels, dtype=float)
    if scores.shape != labels.shape:
        raise ValueError(f"Got {scores.shape} scores for {labels.shape} labels")
    return float(-np.mean(labels * np.log(scores) + (1.0 - labels) * np.log(1.0 - scores)))


def loss_and_gradient(params, graph, labels):
    """Loss of one graph and its exact gradient with respect to all parameters."""
    labels = np.asarray(labels, dtype=float)
    scores, (h, caches, share) = _forward(params, graph)
    value = loss(scores, labels)

    grads = params.zeros_like().arrays
    d_logits = ((scores - labels) / len(labels))[:, None]
    grads["decoder.weight"] += h.T @ d_logits
    grads["decoder.bias"] += d_logits.sum(axis=0)
    d_h = d_logits @ params["decoder.weight"].T

    senders, receivers = graph.senders, graph.receivers
    d_e = np.zeros((graph.num_edges, HIDDEN))
    block_caches = iter(reversed(caches))
    for _ in range(params.rounds):
        d_in = _block_backward(params, next(block_caches), d_h, grads)
        d_h = d_in[:, :HIDDEN]
        d_e = d_e + d_in[:, HIDDEN:][receivers] * share[receivers][:, None]

        d_in = _block_backward(params, next(block_caches), d_e, grads)
        d_e = d_in[:, :HIDDEN]
        np.add.at(d_h, senders, d_in[:, HIDDEN:2 * HIDDEN])
        np.add.at(d_h, receivers, d_in[:, 2 * HIDDEN:])

    _block_backward(params, next(block_caches), d_e, grads)
    _block_backward(params, next(block_caches), d_h, grads)

    return value, ModelParams(grads, params.tied, params.rounds)


def gradient(params, graph, labels):
    return loss_and_gradient(params, graph, labels)[1]


def batch_loss_and_gradient(params, graphs, labels):
    """Summed loss and summed gradient over several graphs."""
    total = 0.0
    grads = params.zeros_like()
    for graph, graph_labels in zip(graphs, labels):
        value, graph_grads = loss_and_gradient(params, graph, graph_labels)
        total += value
        for name in grads.arrays:
            grads.arrays[name] += graph_grads.arrays[name]
    return total, grads


@dataclass
class GNNScorer:
    """Scores the entities of a task with trained parameters."""
    params: ModelParams
    name: str = field(default="gnn")

    def score(self, task):
        scores = forward(self.params, encode(task))
        return dict(zip(task.entity_names, (float(score) for score in scores)))
