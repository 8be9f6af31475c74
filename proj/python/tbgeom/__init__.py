"""Tangent-bundle geometry with g-natural metrics: closed forms, numerical oracles and a batch verifier."""

import json

from ._core import (
    ChartMetric,
    ConfigError,
    GeometryError,
    WeightPair,
    complex_structure,
    connection,
    curvature,
    euclidean,
    family_names,
    induced_metric_components,
    isometry_residual,
    k_contact_residuals,
    metric_matrix,
    oracle_scalar_curvature,
    scalar_curvature,
    scalar_curvature_published,
    sectional,
    space_form,
)
from . import _core

__all__ = [
    "ChartMetric",
    "ConfigError",
    "GeometryError",
    "WeightPair",
    "complex_structure",
    "connection",
    "curvature",
    "euclidean",
    "family_names",
    "induced_metric_components",
    "isometry_residual",
    "k_contact_residuals",
    "list_suites",
    "metric",
    "metric_matrix",
    "oracle_scalar_curvature",
    "run",
    "scalar_curvature",
    "scalar_curvature_published",
    "sectional",
    "space_form",
    "weights",
]


def metric(spec):
    """Base metric from a dict like {"kind": "space_form", "dim": 2, "params": {"c": 1.0}}."""
    return _core._metric_from_json(json.dumps(spec))


def weights(name_or_spec, **params):
    """Weight pair by family name (with keyword parameters) or from a full spec dict."""
    if isinstance(name_or_spec, dict):
        return _core._weights_from_json(json.dumps(name_or_spec))
    return _core._named_family(name_or_spec, json.dumps(params))


def run(config, timing=True):
    """Run verification suites; returns (report dict, csv text)."""
    report, csv = _core._run(json.dumps(config), timing)
    return json.loads(report), csv


def list_suites():
    return json.loads(_core._suites())
