from namoplan.gnn.model import (GNNScorer, ModelParams, batch_loss_and_gradient, forward, gradient, init, loss,
                                loss_and_gradient)
from namoplan.gnn.train import EmptyDatasetError, TrainConfig, load_curve, save_curve, train
from namoplan.gnn.weights import WeightFileError, load, load_cached, save
