"""Plug-in estimation of risk measures, hedging values and their convergence rates.

Risk measures, strategy sets, distributions and experiment configs are
given as plain dicts in the same shape as the command-line JSON configs.
"""

import json as _json

from . import _riskrates as _core
from ._riskrates import (  # noqa: F401
    ContractError,
    DomainError,
    EmptyInputError,
    Error,
    FiniteDiscrete,
    IoError,
    NumericError,
    ParameterError,
    ParseError,
    SchemaError,
    avar,
    empirical,
    fit_rate,
    oracle,
    sharpness_curve,
    sharpness_risk,
)

__all__ = [
    "ContractError", "DomainError", "EmptyInputError", "Error", "FiniteDiscrete", "IoError",
    "NumericError", "ParameterError", "ParseError", "SchemaError", "avar", "bias_report",
    "deviation_curve", "empirical", "evaluate", "fit_rate", "hedged_risk", "mean_error_curve",
    "oracle", "sample", "sharpness_curve", "sharpness_risk", "true_value",
    "unboundedness_probe", "utility_max",
]


def _dump(spec):
    return spec if isinstance(spec, str) else _json.dumps(spec)


def sample(dist, n, seed=0x5EED):
    """Draw n values from a distribution dict, e.g. {"kind": "pareto", "q": 2}."""
    return _core.sample(_dump(dist), n, seed)


def evaluate(law, spec, tol=1e-10):
    """Risk of a FiniteDiscrete law under a risk dict, e.g. {"kind": "avar", "u": 0.9}."""
    return _core.evaluate(law, _dump(spec), tol)


def hedged_risk(weights, f, g, risk, strategies, tol=1e-9):
    """inf over the strategy set of risk(f + g @ strategy). g has one row per scenario."""
    return _core.hedged_risk(weights, f, g, _dump(risk), _dump(strategies), tol)


def utility_max(weights, f, g, utility, strategies, tol=1e-9):
    """sup over the strategy set of the expected utility of f + g @ strategy."""
    return _core.utility_max(weights, f, g, _dump(utility), _dump(strategies), tol)


def unboundedness_probe(weights, f, g, risk, direction, t_max=1e4, steps=9):
    """Returns ([(t, value), ...], diverging)."""
    return _core.unboundedness_probe(weights, f, g, _dump(risk), direction, t_max, steps)


def true_value(config):
    """Returns (value, approximate) for an experiment config dict."""
    return _core.true_value(_dump(config))


def mean_error_curve(config):
    """List of (N, mean_error, std_error)."""
    return _core.mean_error_curve(_dump(config))


def deviation_curve(config):
    """List of (N, epsilon, p_hat, R)."""
    return _core.deviation_curve(_dump(config))


def bias_report(config, n):
    """Returns (mean_signed_error, std_error) at sample size n."""
    return _core.bias_report(_dump(config), n)
