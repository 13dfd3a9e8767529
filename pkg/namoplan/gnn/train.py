import csv
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from namoplan.core.settings import get_setting
from namoplan.gnn.model import batch_loss_and_gradient, forward, init, loss

logger = logging.getLogger(__name__)


class EmptyDatasetError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    seed: int = 0
    step_size: float = 1e-3
    epochs: int = 500
    mini_batch: int = 8
    validation_fraction: float = 0.1
    early_stop_patience: int = 50
    untied_rounds: bool = False

    def __post_init__(self):
        if self.step_size < 0:
            raise ValueError("step_size can not be negative")
        if self.epochs < 1:
            raise ValueError("Need at least one epoch")
        if self.mini_batch < 1:
            raise ValueError("mini_batch needs to be positive")
        if not 0 <= self.validation_fraction < 1:
            raise ValueError("validation_fraction needs to be in [0, 1)")

    @classmethod
    def from_settings(cls, task=None, **overrides):
        values = {key: get_setting(key, default=getattr(cls, key), task=task)
                  for key in ("seed", "step_size", "epochs", "mini_batch", "validation_fraction",
                              "early_stop_patience", "untied_rounds")}
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class CurvePoint:
    epoch: int
    train_loss: float
    val_loss: float


class Adam:
    def __init__(self, params, step_size, beta1=0.9, beta2=0.999, eps=1e-8):
        self.step_size = step_size
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.first = params.zeros_like()
        self.second = params.zeros_like()
        self.steps = 0

    def update(self, params, grads):
        self.steps += 1
        correction1 = 1.0 - self.beta1 ** self.steps
        correction2 = 1.0 - self.beta2 ** self.steps
        for name, grad in grads.arrays.items():
            first = self.first.arrays[name]
            second = self.second.arrays[name]
            first *= self.beta1
            first += (1.0 - self.beta1) * grad
            second *= self.beta2
            second += (1.0 - self.beta2) * grad ** 2
            params.arrays[name] -= self.step_size * (first / correction1) / (np.sqrt(second / correction2) + self.eps)


def mean_loss(params, samples):
    if not samples:
        return float("nan")
    return float(np.mean([loss(forward(params, graph), labels) for graph, labels in samples]))


def split(samples, validation_fraction, rng):
    order = rng.permutation(len(samples))
    validation_size = int(round(validation_fraction * len(samples)))
    validation_size = min(validation_size, len(samples) - 1)
    validation = [samples[i] for i in sorted(order[:validation_size])]
    training = [samples[i] for i in sorted(order[validation_size:])]
    return training, validation


def train(dataset, cfg):
    """
    Adam on the mean binary cross-entropy of mini-batches of graphs.
    Returns the parameters with the best validation loss (training loss without
    a validation split) and one curve point per epoch, starting with epoch 0 before training.

    Raises:
        EmptyDatasetError: if there is nothing to train on.
    """
    samples: List[Tuple] = list(dataset)
    if not samples:
        raise EmptyDatasetError("Can not train on an empty dataset")

    rng = np.random.default_rng(cfg.seed)
    training, validation = split(samples, cfg.validation_fraction, rng)
    monitored = validation or training

    params = init(cfg.seed, tied=not cfg.untied_rounds)
    optimizer = Adam(params, cfg.step_size)

    train_loss = mean_loss(params, training)
    best_loss = mean_loss(params, monitored)
    best_params = params.copy()
    curve = [CurvePoint(0, train_loss, mean_loss(params, validation) if validation else train_loss)]
    epochs_without_improvement = 0

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(len(training))
        for start in range(0, len(training), cfg.mini_batch):
            batch = [training[i] for i in order[start:start + cfg.mini_batch]]
            _, grads = batch_loss_and_gradient(params, [graph for graph, _ in batch], [labels for _, labels in batch])
            for name in grads.arrays:
                grads.arrays[name] /= len(batch)
            optimizer.update(params, grads)

        train_loss = mean_loss(params, training)
        val_loss = mean_loss(params, validation) if validation else train_loss
        curve.append(CurvePoint(epoch, train_loss, val_loss))

        if val_loss < best_loss:
            best_loss = val_loss
            best_params = params.copy()
            epochs_without_improvement = 0
        else:
            epochs_without_improvement += 1

        if epoch % 50 == 0:
            logger.info("Epoch %d: training loss %.4f, validation loss %.4f", epoch, train_loss, val_loss)

        if epochs_without_improvement >= cfg.early_stop_patience:
            logger.info("Stopping early after epoch %d, best validation loss %.4f", epoch, best_loss)
            break

    return best_params, curve


def save_curve(curve, file_name):
    with open(file_name, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["epoch", "train_loss", "val_loss"])
        for point in curve:
            writer.writerow([point.epoch, repr(point.train_loss), repr(point.val_loss)])


def load_curve(file_name):
    with open(file_name, "r", newline="") as f:
        return [CurvePoint(int(row["epoch"]), float(row["train_loss"]), float(row["val_loss"]))
                for row in csv.DictReader(f)]
