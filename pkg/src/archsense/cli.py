"""Command line orchestrator. Every tunable of PipelineConfig is exposed as
--key-with-dashes; values from --config (JSON) sit between the defaults and
explicit flags. Only the data directory may also come from the environment
(ARCHSENSE_DATA_DIR).
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click

from .config import PipelineConfig
from . import pipeline


_FLAG_TYPES = {"int": int, "float": float, "str": str}


def _config_options(fn):
    fn = click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="JSON config file.")(fn)
    for f in reversed(dataclasses.fields(PipelineConfig)):
        flag = "--" + f.name.replace("_", "-")
        kwargs = {"default": None, "type": _FLAG_TYPES.get(f.type, str)}
        if f.name == "data_dir":
            kwargs["envvar"] = "ARCHSENSE_DATA_DIR"
        fn = click.option(flag, f.name, **kwargs)(fn)
    return fn


def _build_config(config_file, kwargs) -> PipelineConfig:
    names = {f.name for f in dataclasses.fields(PipelineConfig)}
    overrides = {k: v for k, v in kwargs.items() if k in names and v is not None}
    try:
        return PipelineConfig.load(config_file, overrides)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=True))


@click.group()
def main():
    """Archery wearable analytics: preprocessing, datasets, training, evaluation."""


@main.command()
@_config_options
@click.option("--sessions", default=4, type=int, show_default=True)
@click.option("--shots", default=3, type=int, show_default=True)
@click.option("--spacing-s", default=15.0, type=float, show_default=True)
@click.option("--noise-std", default=0.05, type=float, show_default=True)
def synth(config_file, sessions, shots, spacing_s, noise_std, **kwargs):
    """Generate synthetic sessions with ground truth into the data dir."""
    cfg = _build_config(config_file, kwargs)
    ids = pipeline.stage_synth(cfg, sessions, shots, spacing_s, noise_std)
    click.echo(f"wrote {len(ids)} sessions under {cfg.data_dir}")


@main.command()
@_config_options
def preprocess(config_file, **kwargs):
    """Feature channels + corrected interval series for every session."""
    cfg = _build_config(config_file, kwargs)
    done = _run(pipeline.stage_preprocess, cfg)
    click.echo(f"preprocessed {len(done)} sessions into {cfg.work_dir}")


@main.command("build-dataset")
@_config_options
def build_dataset(config_file, **kwargs):
    """Sliding-window motion dataset and per-shot stress features."""
    cfg = _build_config(config_file, kwargs)
    _echo_json(_run(pipeline.stage_build_dataset, cfg))


@main.command("train-motion")
@_config_options
def train_motion(config_file, **kwargs):
    """Train the motion model on the rebalanced window dataset."""
    cfg = _build_config(config_file, kwargs)
    _echo_json(_run(pipeline.stage_train_motion, cfg))


@main.command("train-stress")
@_config_options
def train_stress(config_file, **kwargs):
    """Train the stress model on the extracted feature vectors."""
    cfg = _build_config(config_file, kwargs)
    _echo_json(_run(pipeline.stage_train_stress, cfg))


@main.command("eval-motion")
@_config_options
def eval_motion(config_file, **kwargs):
    """Stream-level detection metrics against the annotation ground truth."""
    cfg = _build_config(config_file, kwargs)
    _echo_json(_run(pipeline.stage_eval_motion, cfg))


@main.command("eval-stress")
@_config_options
def eval_stress(config_file, **kwargs):
    """Held-out stress classification metrics."""
    cfg = _build_config(config_file, kwargs)
    _echo_json(_run(pipeline.stage_eval_stress, cfg))


@main.command()
@_config_options
def report(config_file, **kwargs):
    """Merge evaluation artifacts into report.json / report.txt."""
    cfg = _build_config(config_file, kwargs)
    _run(pipeline.stage_report, cfg)
    click.echo((cfg.out_path / "report.txt").read_text())


@main.command("label-serve")
@_config_options
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, type=int, show_default=True)
@click.option("--static-dir", default=None, type=click.Path(file_okay=False),
              help="Frontend bundle to serve at /.")
def label_serve(config_file, host, port, static_dir, **kwargs):
    """Serve the annotation API (and optionally the labeling frontend)."""
    cfg = _build_config(config_file, kwargs)
    from .server import serve

    click.echo(f"annotation API on http://{host}:{port}/api/sessions")
    serve(cfg, host, port, static_dir)


def _run(stage, cfg):
    try:
        return stage(cfg)
    except (FileNotFoundError, ValueError) as exc:
        raise click.ClickException(str(exc))


if __name__ == "__main__":
    sys.exit(main())
