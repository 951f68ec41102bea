from .features import FEATURE_DIM, FEATURE_TABLE_VERSION, featurize_pair, featurize_task
from .dream import DreamedTask, dream_tasks
from .model import (
    RecognitionModel,
    encode_dreams,
    batch_loss,
    batch_loss_and_grad,
    train_model,
    mean_dream_dl,
)

__all__ = [
    "FEATURE_DIM", "FEATURE_TABLE_VERSION", "featurize_pair", "featurize_task",
    "DreamedTask", "dream_tasks",
    "RecognitionModel", "encode_dreams", "batch_loss", "batch_loss_and_grad",
    "train_model", "mean_dream_dl",
]
