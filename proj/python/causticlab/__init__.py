"""Sup-norm experiments for Lagrangian distributions near caustics."""

import json as _json
from fractions import Fraction

from ._core import (
    ConfigError,
    IntegralResult,
    ball_count,
    catalog_csv,
    catalog_types,
    cauchy_square,
    integral,
    m_alpha,
    phase,
    sharp_exponent,
    sphere_cap_count,
    sum_of_squares_count,
    verify_all,
    weighted_cauchy,
)
from . import _core


def caustic_order(type_label):
    return Fraction(*_core.caustic_order(type_label))


def threshold(type_label):
    return Fraction(*_core.threshold(type_label))


def run(config):
    """Run an experiment described by a dict (or JSON text).

    Returns (status, files, summary) where files maps report names to text.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    out = _core.execute(text)
    return out["status"], out["files"], _json.loads(out["files"]["summary.json"])


def normalize_config(config):
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_core.normalize_config(text))


__all__ = [
    "ConfigError",
    "IntegralResult",
    "ball_count",
    "catalog_csv",
    "catalog_types",
    "cauchy_square",
    "caustic_order",
    "integral",
    "m_alpha",
    "normalize_config",
    "phase",
    "run",
    "sharp_exponent",
    "sphere_cap_count",
    "sum_of_squares_count",
    "threshold",
    "verify_all",
    "weighted_cauchy",
]
