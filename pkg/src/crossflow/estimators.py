"""Estimator-style wrappers for sweeps over parameter points.

Rows of ``X`` are parameter points ``(lambda1, lambda2, delta_d[, delta_s])``.
The models are not trained on data; ``fit`` only validates and records
the input width, which keeps them usable inside scikit-learn tooling
(``clone``, ``get_params``, pipelines).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import analytic
from .eds import DEFAULT_BURN_IN, burned_in, vehicle_delay_distribution
from .exceptions import NoNegativeRoot, UnsupportedDeltaS
from .micro import schedule
from .model import IntersectionParams, Policy
from .validation import check_params, check_vehicles, rows_to_params

__all__ = ["AnalyticDelayModel", "SimulatedDelayModel", "EquilibriumScheduler", "analytic_point"]

FEATURES = ("margin_fifo", "margin_fo", "p0", "expected_delay")


def analytic_point(params: IntersectionParams, policy, variant="approx1", solver="closed_form"):
    """``(margin_fifo, margin_fo, p0, expected, status)`` for one parameter point.

    ``status`` is ``"ok"``, ``"unstable"`` (FIFO margin not positive) or
    ``"unsupported"`` (``delta_s > 0``); in the latter two cases ``p0`` and
    the expectation are NaN.
    """
    policy = Policy.coerce(policy)
    m_fifo = analytic.fifo_convergence_margin(params)
    m_fo = analytic.fo_convergence_margin(params)
    try:
        if policy is Policy.FIFO:
            res = analytic.fifo_vehicle_delay(params, variant)
        else:
            res = analytic.fo_vehicle_delay(params, solver)
    except NoNegativeRoot:
        return m_fifo, m_fo, float("nan"), float("nan"), "unstable"
    except UnsupportedDeltaS:
        return m_fifo, m_fo, float("nan"), float("nan"), "unsupported"
    p0 = float(res.distribution.cdf(0.0))
    return m_fifo, m_fo, p0, float(res.expected), "ok"


class AnalyticDelayModel(TransformerMixin, BaseEstimator):
    """Closed-form steady-state delay per parameter row."""

    def __init__(self, policy="fo", variant="approx1", solver="closed_form"):
        self.policy = policy
        self.variant = variant
        self.solver = solver

    def fit(self, X, y=None):
        X = check_params(X)
        Policy.coerce(self.policy)
        self.n_features_in_ = X.shape[1]
        return self

    def _rows(self, X):
        check_is_fitted(self, "n_features_in_")
        return [
            analytic_point(p, self.policy, self.variant, self.solver) for p in rows_to_params(X)
        ]

    def transform(self, X):
        """Columns ``margin_fifo, margin_fo, p0, expected_delay``; NaN where undefined."""
        return np.array([r[:4] for r in self._rows(X)], dtype=float).reshape(-1, 4)

    def predict(self, X):
        return self.transform(X)[:, 3]

    def status(self, X) -> list[str]:
        return [r[4] for r in self._rows(X)]

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)


class SimulatedDelayModel(BaseEstimator):
    """Event-driven Monte Carlo estimate of the mean vehicle delay per row.

    Every row is simulated with the same ``seed``, so neighbouring
    parameter points share random numbers and curves come out smooth.
    """

    def __init__(self, policy="fo", particles=10000, burn_in=DEFAULT_BURN_IN, steps=500,
                 seed=0, thin=1, n_jobs=1):
        self.policy = policy
        self.particles = particles
        self.burn_in = burn_in
        self.steps = steps
        self.seed = seed
        self.thin = thin
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        X = check_params(X)
        Policy.coerce(self.policy)
        if self.particles < 2 or self.steps < 1 or self.burn_in < 0:
            raise ValueError("need particles >= 2, steps >= 1 and burn_in >= 0")
        self.n_features_in_ = X.shape[1]
        return self

    def sample(self, params: IntersectionParams):
        ens = burned_in(self.policy, params, self.particles, self.burn_in, self.seed, self.n_jobs)
        return vehicle_delay_distribution(
            ens, self.policy, params, self.steps, self.thin, self.n_jobs
        )

    def transform(self, X):
        """Columns ``p0, expected_delay, stderr`` from the simulation."""
        check_is_fitted(self, "n_features_in_")
        rows = []
        for p in rows_to_params(X):
            s = self.sample(p)
            rows.append((float(s.distribution.cdf(0.0)), s.mean, s.stderr))
        return np.array(rows, dtype=float).reshape(-1, 3)

    def predict(self, X):
        return self.transform(X)[:, 1]


class EquilibriumScheduler(TransformerMixin, BaseEstimator):
    """Map ``(desired_time, lane)`` rows to equilibrium passing times."""

    def __init__(self, policy="fifo", delta_d=2.0, delta_s=0.0):
        self.policy = policy
        self.delta_d = delta_d
        self.delta_s = delta_s

    def fit(self, V=None, y=None):
        Policy.coerce(self.policy)
        # rates play no part in a fixed sequence; placeholders keep validation happy
        self.params_ = IntersectionParams(1.0, 1.0, self.delta_d, self.delta_s)
        return self

    def transform(self, V):
        check_is_fitted(self, "params_")
        V = check_vehicles(V)
        vehicles = [(t, int(s)) for t, s in V]
        return schedule(vehicles, self.params_, self.policy).passing_times
