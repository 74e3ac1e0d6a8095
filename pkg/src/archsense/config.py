"""Pipeline configuration: every tunable of the processing stages with its
module default, loadable from a JSON file and overridable per key.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path


@dataclass
class PipelineConfig:
    data_dir: str = "data"
    work_dir: str = "work"
    model_dir: str = "models"
    out_dir: str = "out"

    fs: float = 20.0
    smooth_window: int = 20

    filter_low: float = 0.6
    filter_high: float = 10.0
    filter_order: int = 3

    win: int = 80
    step: int = 20
    threshold: float = 0.9
    min_duration_s: float = 1.0
    max_duration_s: float = 8.0
    iou_min: float = 0.5

    stress_window_s: float = 30.0
    split_ratio: float = 0.7

    lstm_hidden: int = 32
    mlp_hidden: int = 16
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 50
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.fs <= 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        if self.smooth_window < 1:
            raise ValueError(f"smooth_window must be >= 1, got {self.smooth_window}")
        if not 0 < self.filter_low:
            raise ValueError(f"filter_low must be positive, got {self.filter_low}")
        if self.win < 1 or self.step < 1:
            raise ValueError(f"win/step must be >= 1, got {self.win}/{self.step}")
        if not 0 < self.split_ratio < 1:
            raise ValueError(f"split_ratio must be in (0, 1), got {self.split_ratio}")
        if self.min_duration_s > self.max_duration_s:
            raise ValueError("min_duration_s > max_duration_s")
        if self.learning_rate < 0 or self.epochs < 1 or self.batch_size < 1:
            raise ValueError("invalid training settings")
        if not 0 < self.threshold < 1:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")

    @classmethod
    def load(cls, config_file: str | None = None, overrides: dict | None = None) -> "PipelineConfig":
        """File values first, then explicit overrides on top of the defaults."""
        values: dict = {}
        if config_file:
            raw = json.loads(Path(config_file).read_text())
            known = {f.name for f in fields(cls)}
            unknown = set(raw) - known
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            values.update(raw)
        if overrides:
            values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @property
    def data_path(self) -> Path:
        return Path(self.data_dir)

    @property
    def work_path(self) -> Path:
        return Path(self.work_dir)

    @property
    def model_path(self) -> Path:
        return Path(self.model_dir)

    @property
    def out_path(self) -> Path:
        return Path(self.out_dir)
