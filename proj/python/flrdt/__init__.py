"""Lifted random duality bounds for random feasibility problems.

Thin wrappers over the C++ core; structured results come back as dicts.
"""

import json

from . import _flrdt
from ._flrdt import FlrdtError, wilson_interval

__version__ = _flrdt.__version__

__all__ = [
    "FlrdtError",
    "capacity",
    "dual_value",
    "empirical_transition",
    "feasibility_check",
    "noise_coefficients",
    "run_job",
    "validate_config",
    "wilson_interval",
]


def noise_coefficients(r, p, q, c):
    """Per-level noise standard deviations {a, b, cc} for level-r lifting parameters."""
    return json.loads(_flrdt.noise_coefficients(r, list(p), list(q), list(c)))


def dual_value(family, kappa, alpha, lift="fully_lifted", r=2):
    """Stationary dual value at one alpha; value > 0 predicts infeasibility."""
    return json.loads(_flrdt.dual_value(family, kappa, alpha, lift, r))


def capacity(family, kappa, lo, hi, lift="fully_lifted", r=2, tol_alpha=1e-3):
    """Capacity by bisection on the sign of the dual value over [lo, hi]."""
    return json.loads(_flrdt.capacity(family, kappa, lo, hi, lift, r, tol_alpha))


def empirical_transition(family, n, alpha_grid, trials, seed, kappa=0.0):
    """Feasible frequency per alpha with Wilson intervals and the 50% crossing."""
    return json.loads(_flrdt.empirical_transition(family, n, list(alpha_grid), trials, seed, kappa))


def feasibility_check(family, n, m, kappa, seed):
    """Exact feasibility verdict for one sampled perceptron instance."""
    return json.loads(_flrdt.feasibility_check(family, n, m, kappa, seed))


def validate_config(config):
    """Schema-check a job config dict and return it with defaults filled."""
    return json.loads(_flrdt.validate_config(json.dumps(config)))


def run_job(config, out_dir, format="csv"):
    """Run a CLI job from a config dict; returns (exit_code, files, message)."""
    return _flrdt.run_job(json.dumps(config), str(out_dir), format)
