"""Python access to the latgrow simulation library.

Site arrays come back flat in window order (axis 0 fastest). ``grid`` reshapes
them so that ``a[x0 + W, x1 + W, ...]`` is the value at site (x0, x1, ...).
"""

import json

import numpy as np

from . import _core
from ._core import ConfigError, DomainError, InvariantError, coupling_lambda, format_log_value

__all__ = [
    "ConfigError",
    "DomainError",
    "InvariantError",
    "LABELS",
    "coexistence_scan",
    "compare_constructions",
    "config_hash",
    "coupling_lambda",
    "encapsulation",
    "estimate_shape",
    "format_log_value",
    "fpp_arrivals",
    "fpphe_sweep",
    "grid",
    "run_experiment",
    "run_fpphe",
    "run_fpphe_det",
    "run_mdla",
    "schedule",
]

LABELS = ("empty", "type1", "type2", "seed", "particle", "aggregate", "hole")


def grid(flat, dim):
    flat = np.asarray(flat)
    side = round(len(flat) ** (1.0 / dim))
    if side**dim != len(flat):
        raise ValueError("array length is not a full window")
    return flat.reshape((side,) * dim, order="F")


def _strs(config):
    return {str(k): str(v) for k, v in config.items()}


def fpp_arrivals(dim, radius, rate=1.0, t_max=float("inf"), seed=1, run_id=0):
    return grid(_core.fpp_arrivals(dim, radius, rate, t_max, seed, run_id), dim)


def estimate_shape(rate, dim, radius, t, reps, seed, margin=10, threads=1):
    return json.loads(_core.estimate_shape(rate, dim, radius, t, reps, seed, margin, threads))


def run_fpphe(dim, radius, p, lam, t_max=1000.0, seed=1, run_id=0, margin=10, seed_rule="absorb"):
    out = _core.run_fpphe(dim, radius, p, lam, t_max, seed, run_id, margin, seed_rule)
    out["labels"] = grid(out["labels"], dim)
    out["times"] = grid(out["times"], dim)
    out["outcome"] = json.loads(out["outcome"])
    return out


def fpphe_sweep(p_grid, lambda_grid, reps, dim, radius, t_max, seed, margin=10, seed_rule="absorb", threads=1):
    return json.loads(
        _core.fpphe_sweep(list(p_grid), list(lambda_grid), reps, dim, radius, t_max, seed, margin, seed_rule, threads)
    )


def run_fpphe_det(dim, radius, p, lam, t_max=None, seed=1, run_id=0, margin=10, seed_rule="absorb"):
    """``lam`` and ``t_max`` are strings like "9/10" or (num, den) pairs."""
    out = _core.run_fpphe_det(dim, radius, p, lam, t_max, seed, run_id, margin, seed_rule)
    out["labels"] = grid(out["labels"], dim)
    out["ticks"] = grid(out["ticks"], dim)
    return out


def coexistence_scan(p, lam, reps, dim, radius, seed, margin=10, threads=1):
    return json.loads(_core.coexistence_scan(p, lam, reps, dim, radius, seed, margin, threads))


def run_mdla(construction, dim, radius, mu, t_max, seed=1, run_id=0, margin=10, target_radius=None):
    out = _core.run_mdla(construction, dim, radius, mu, t_max, seed, run_id, margin, target_radius)
    out["metrics"] = json.loads(out["metrics"])
    return out


def compare_constructions(mu, dim, radius, target, reps, seed, threads=1):
    return json.loads(_core.compare_constructions(mu, dim, radius, target, reps, seed, threads))


def encapsulation(r, alpha, lam, c_hat, reps, radius, seed, threads=1):
    return json.loads(_core.encapsulation(r, alpha, lam, c_hat, reps, radius, seed, threads))


def schedule(**params):
    if "lambda" in params:
        params["lam"] = params.pop("lambda")
    return json.loads(_core.schedule(**params))


def config_hash(config):
    return _core.config_hash(_strs(config))


def run_experiment(config):
    """Run one experiment from key/value settings; returns (exit_code, log_text)."""
    return _core.run_experiment(_strs(config))
