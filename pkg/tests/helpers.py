"""Shared random generators for parameter points and vehicle sequences."""
import numpy as np

from crossflow.model import IntersectionParams


def random_sequence(rng, params, n):
    """``n`` Poisson arrivals starting at time 0 as ``(desired_time, lane)`` pairs."""
    gaps = rng.exponential(1.0 / params.lambda_total, n)
    gaps[0] = 0.0
    lanes = np.where(rng.random(n) < params.lane_prob(1), 1, 2)
    return list(zip(np.cumsum(gaps), lanes.tolist()))


def random_params(rng, ds_zero=False):
    l1, l2 = rng.uniform(0.05, 1.0, 2)
    dd = rng.uniform(0.5, 3.0)
    ds = 0.0 if ds_zero else rng.uniform(0.0, 1.5)
    return IntersectionParams(l1, l2, dd, ds)
