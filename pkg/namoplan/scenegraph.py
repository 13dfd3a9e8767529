"""
Scene-graph encoding of a task for the importance predictor.

Every entity is a node with a one-hot type, the unary predicates true in the initial
state and the unary predicates of the goal. A directed edge (i, j) exists when at least
one binary predicate holds for (i, j) in the initial state or in the goal.
"""
import hashlib
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from namoplan.mazenamo.domain import mazenamo_domain, DOMAIN_NAME
from namoplan.pddl.validate import InvalidPlanError, validate_plan

TYPES = ("robot", "object", "pos")
UNARY_PREDICATES = ("isheavy", "islight", "onground", "clear", "handempty",
                    "dirisleft", "dirisright", "dirisup", "dirisdown")
BINARY_PREDICATES = ("rat", "oat", "upto", "downto", "leftto", "rightto", "upon", "holding")

# derivable from the oat edges
SKIPPED_PREDICATES = ("isempty",)

NODE_DIM = len(TYPES) + 2 * len(UNARY_PREDICATES)
EDGE_DIM = 2 * len(BINARY_PREDICATES)


class FeatureSpecError(ValueError):
    """Raised for predicates or types the feature layout has no bit for."""


def feature_fingerprint():
    """Stable hash of the feature layout, stored with model weights."""
    layout = "|".join([",".join(TYPES), ",".join(UNARY_PREDICATES), ",".join(BINARY_PREDICATES)])
    return hashlib.sha256(layout.encode()).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class SceneGraph:
    entities: Tuple[str, ...]
    nodes: np.ndarray
    senders: np.ndarray
    receivers: np.ndarray
    edges: np.ndarray

    @property
    def num_nodes(self):
        return len(self.entities)

    @property
    def num_edges(self):
        return len(self.senders)

    def node_index(self, name):
        return self.entities.index(name)

    def edge_features(self, sender, receiver):
        """Feature vector of the edge between two entity names, None if there is no such edge."""
        i, j = self.node_index(sender), self.node_index(receiver)
        for number in range(self.num_edges):
            if self.senders[number] == i and self.receivers[number] == j:
                return self.edges[number]
        return None

    def permuted(self, order):
        """The same graph with node ``order[k]`` becoming node ``k``."""
        order = np.asarray(order)
        new_index = np.empty_like(order)
        new_index[order] = np.arange(len(order))
        return SceneGraph(entities=tuple(self.entities[k] for k in order), nodes=self.nodes[order],
                          senders=new_index[self.senders], receivers=new_index[self.receivers], edges=self.edges)

    def to_record(self):
        return {
            "entities": list(self.entities),
            "nodes": self.nodes.astype(int).tolist(),
            "edges": [[int(i), int(j)] + bits for i, j, bits in
                      zip(self.senders, self.receivers, self.edges.astype(int).tolist())],
        }

    @classmethod
    def from_record(cls, record):
        nodes = np.array(record["nodes"], dtype=float).reshape(-1, NODE_DIM)
        edges = np.array(record["edges"], dtype=float).reshape(-1, 2 + EDGE_DIM)
        return cls(entities=tuple(record["entities"]), nodes=nodes,
                   senders=edges[:, 0].astype(int), receivers=edges[:, 1].astype(int), edges=edges[:, 2:])


def encode(task, domain=None):
    """
    Raises:
        FeatureSpecError: for an atom whose predicate has no feature bit.
    """
    if domain is not None:
        task.check_against(domain)

    entities = task.entity_names
    index = {name: number for number, name in enumerate(entities)}

    nodes = np.zeros((len(entities), NODE_DIM))
    for name, number in index.items():
        type_name = task.entity_types[name]
        if type_name not in TYPES:
            raise FeatureSpecError(f"Type {type_name} of {name} has no feature bit")
        nodes[number, TYPES.index(type_name)] = 1

    edge_bits = {}
    for offset, atoms in ((0, task.init), (1, task.goal)):
        for atom in atoms:
            if atom.predicate in SKIPPED_PREDICATES:
                continue
            if atom.predicate in UNARY_PREDICATES and len(atom.args) == 1:
                column = len(TYPES) + offset * len(UNARY_PREDICATES) + UNARY_PREDICATES.index(atom.predicate)
                nodes[index[atom.args[0]], column] = 1
            elif atom.predicate in BINARY_PREDICATES and len(atom.args) == 2:
                sender, receiver = index[atom.args[0]], index[atom.args[1]]
                if sender == receiver:
                    continue
                bits = edge_bits.setdefault((sender, receiver), np.zeros(EDGE_DIM))
                bits[offset * len(BINARY_PREDICATES) + BINARY_PREDICATES.index(atom.predicate)] = 1
            else:
                raise FeatureSpecError(f"Atom {atom} has no feature bit")

    pairs = sorted(edge_bits)
    return SceneGraph(entities=entities, nodes=nodes,
                      senders=np.array([i for i, _ in pairs], dtype=int),
                      receivers=np.array([j for _, j in pairs], dtype=int),
                      edges=np.array([edge_bits[pair] for pair in pairs]).reshape(-1, EDGE_DIM))


def label(task, plan, domain=None):
    """
    1 for every entity which is an argument of a plan step or appears in the goal, else 0.
    Ordered like the nodes of :func:`encode`.

    Raises:
        InvalidPlanError: if the plan does not solve the task.
    """
    if domain is None:
        if task.domain_name != DOMAIN_NAME:
            raise ValueError(f"Need the domain of task {task.name} to check its plan")
        domain = mazenamo_domain()

    validation = validate_plan(domain, task, plan)
    if not validation:
        raise InvalidPlanError(validation.message)

    important = set(task.goal_entities)
    for step in plan:
        important.update(step.args)
    return np.array([1.0 if name in important else 0.0 for name in task.entity_names])
