"""Binary model container: magic header, version, kind, dims, the training
config that produced the weights, then the weight arrays in declared order as
little-endian 64-bit floats. Round-trips are bit-exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .lstm import LstmModel, TrainConfig
from .mlp import MlpModel

MAGIC = b"ARSENSE\x01"
VERSION = 1
KIND_LSTM = 1
KIND_MLP = 2

_HEADER = struct.Struct("<8sII")          # magic, version, kind
_DIMS = struct.Struct("<II")              # input_dim, hidden_dim
_CFG = struct.Struct("<ddqqq")            # lr, momentum, epochs, batch, seed
_ARR_LEN = struct.Struct("<Q")


def _array_order(kind: int, model) -> list[np.ndarray]:
    if kind == KIND_LSTM:
        return [model.mu, model.sigma, model.w, model.b, model.w_out, np.array([model.b_out])]
    return [model.mu, model.sigma, model.w1, model.b1, model.w2, np.array([model.b2])]


def save_model(model, path, cfg: TrainConfig | None = None) -> None:
    if isinstance(model, LstmModel):
        kind = KIND_LSTM
    elif isinstance(model, MlpModel):
        kind = KIND_MLP
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    cfg = cfg or TrainConfig()
    arrays = _array_order(kind, model)
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise ValueError("refusing to save non-finite weights")

    blob = bytearray()
    blob += _HEADER.pack(MAGIC, VERSION, kind)
    blob += _DIMS.pack(model.input_dim, model.hidden_dim)
    blob += _CFG.pack(cfg.learning_rate, cfg.momentum, cfg.epochs, cfg.batch_size, cfg.seed)
    for a in arrays:
        flat = np.ascontiguousarray(a, dtype="<f8").ravel()
        blob += _ARR_LEN.pack(flat.size)
        blob += flat.tobytes()

    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(bytes(blob))
    tmp.replace(path)


def _expected_shapes(kind: int, input_dim: int, hidden_dim: int) -> list[tuple[int, ...]]:
    if kind == KIND_LSTM:
        return [
            (input_dim,), (input_dim,),
            (input_dim + hidden_dim, 4 * hidden_dim), (4 * hidden_dim,),
            (hidden_dim,), (1,),
        ]
    return [
        (input_dim,), (input_dim,),
        (input_dim, hidden_dim), (hidden_dim,),
        (hidden_dim,), (1,),
    ]


def load_model(path, expect_input_dim: int | None = None):
    """Read a model container; returns (model, train_config).

    Raises ValueError on bad magic, truncation, shape mismatch, or when
    expect_input_dim disagrees with the stored dimension.
    """
    data = Path(path).read_bytes()
    off = 0

    def take(n: int) -> bytes:
        nonlocal off
        if off + n > len(data):
            raise ValueError(f"truncated model file {path} (wanted {off + n} bytes, have {len(data)})")
        out = data[off : off + n]
        off += n
        return out

    magic, version, kind = _HEADER.unpack(take(_HEADER.size))
    if magic != MAGIC:
        raise ValueError(f"not a model file: bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported model version {version}")
    if kind not in (KIND_LSTM, KIND_MLP):
        raise ValueError(f"unknown model kind {kind}")
    input_dim, hidden_dim = _DIMS.unpack(take(_DIMS.size))
    if expect_input_dim is not None and input_dim != expect_input_dim:
        raise ValueError(f"model input_dim {input_dim} does not match pipeline ({expect_input_dim})")
    lr, momentum, epochs, batch, seed = _CFG.unpack(take(_CFG.size))
    cfg = TrainConfig(learning_rate=lr, momentum=momentum, epochs=int(epochs),
                      batch_size=int(batch), seed=int(seed))

    arrays = []
    for shape in _expected_shapes(kind, input_dim, hidden_dim):
        (n,) = _ARR_LEN.unpack(take(_ARR_LEN.size))
        expected = int(np.prod(shape))
        if n != expected:
            raise ValueError(f"array length {n} does not match declared dims {shape}")
        arr = np.frombuffer(take(n * 8), dtype="<f8").astype(np.float64).reshape(shape)
        arrays.append(arr)
    if off != len(data):
        raise ValueError(f"trailing bytes in model file {path}")

    mu, sigma = arrays[0], arrays[1]
    if kind == KIND_LSTM:
        model = LstmModel(w=arrays[2], b=arrays[3], w_out=arrays[4], b_out=float(arrays[5][0]),
                          mu=mu, sigma=sigma)
    else:
        model = MlpModel(w1=arrays[2], b1=arrays[3], w2=arrays[4], b2=float(arrays[5][0]),
                         mu=mu, sigma=sigma)
    return model, cfg
