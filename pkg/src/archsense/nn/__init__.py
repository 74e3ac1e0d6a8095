"""Small from-scratch neural models with a compiled hot path.

The recurrent kernels (batched forward + backpropagation through time) exist
twice: a Cython extension and a numpy fallback, selected at import by
``backend``. Everything else (training loops, the feature-vector model,
serialization, gradient checks) is plain Python.
"""

from .backend import BACKEND, available_backends, kernels
from .gradcheck import gradient_check
from .io import load_model, save_model
from .lstm import LstmModel, TrainConfig, init_lstm, lstm_forward, lstm_train
from .mlp import MlpModel, init_mlp, mlp_forward, mlp_train, mlp_train_arrays

__all__ = [
    "BACKEND",
    "available_backends",
    "kernels",
    "gradient_check",
    "load_model",
    "save_model",
    "LstmModel",
    "TrainConfig",
    "init_lstm",
    "lstm_forward",
    "lstm_train",
    "MlpModel",
    "init_mlp",
    "mlp_forward",
    "mlp_train",
    "mlp_train_arrays",
]
