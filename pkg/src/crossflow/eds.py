"""Event-driven simulation: propagate a particle ensemble through the maps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from .maps import advance
from .model import IntersectionParams, ParticleStreams, Policy, sample_arrivals

__all__ = [
    "ParticleEnsemble",
    "EmpiricalDistribution",
    "LaneDelaySample",
    "VehicleDelaySample",
    "ProbeResult",
    "propagate",
    "lane_delay_distribution",
    "vehicle_delay_distribution",
    "divergence_probe",
    "stationarity_gap",
    "zebra_fraction",
    "dkw_epsilon",
    "burned_in",
    "sup_distance",
]

DEFAULT_BURN_IN = 1000


@dataclass(frozen=True)
class ParticleEnsemble:
    t1: np.ndarray
    t2: np.ndarray
    streams: ParticleStreams = field(repr=False)
    step_count: int = 0

    @classmethod
    def initial(cls, n: int, params: IntersectionParams, seed: int = 0) -> "ParticleEnsemble":
        """``n`` particles in the empty-intersection state."""
        if n < 1:
            raise ValueError("an ensemble needs at least one particle")
        start = np.full(n, params.floor)
        return cls(start, start.copy(), ParticleStreams(seed, n))

    def __len__(self) -> int:
        return self.t1.size

    @property
    def joint(self) -> np.ndarray:
        return np.column_stack([self.t1, self.t2])


def _run_chunk(t1, t2, streams, policy, params, steps, collect, thin, windows):
    t1 = t1.copy()
    t2 = t2.copy()
    kept = []
    total = np.zeros_like(t1)
    # per-particle running sums of T1 + T2, one row per window; kept
    # per particle so the result does not depend on how particles are chunked
    track = np.zeros((windows, t1.size))
    for k in range(steps):
        gaps, lanes = sample_arrivals(streams, params)
        t1, t2, _, delay = advance(t1, t2, gaps, lanes, policy, params)
        if collect:
            total += delay
            if k % thin == 0:
                kept.append(delay)
        if windows:
            track[k * windows // steps] += t1 + t2
    return t1, t2, streams, kept, total, track


def _chunks(n: int, n_jobs: int):
    n_jobs = max(1, min(n_jobs, n))
    bounds = np.linspace(0, n, n_jobs + 1).astype(int)
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def _propagate(ensemble, policy, params, steps, n_jobs, collect=False, thin=1, windows=0):
    policy = Policy.coerce(policy)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if windows and steps < windows:
        raise ValueError("need at least one step per window")
    parts = _chunks(len(ensemble), n_jobs)
    jobs = (
        delayed(_run_chunk)(
            ensemble.t1[sl], ensemble.t2[sl], ensemble.streams.subset(sl),
            policy, params, steps, collect, thin, windows,
        )
        for sl in parts
    )
    if len(parts) == 1:
        results = [fn(*args, **kw) for fn, args, kw in jobs]
    else:
        results = Parallel(n_jobs=len(parts), prefer="threads")(jobs)
    t1 = np.concatenate([r[0] for r in results])
    t2 = np.concatenate([r[1] for r in results])
    streams = ensemble.streams.subset(slice(None))
    streams._state = np.concatenate([r[2]._state for r in results])
    out = ParticleEnsemble(t1, t2, streams, ensemble.step_count + steps)
    track = np.concatenate([r[5] for r in results], axis=1) if windows else None
    if not collect:
        return out, None, None, track
    # rows are events, columns particles; reassemble in particle order
    kept = np.concatenate([np.array(r[3]).reshape(len(r[3]), -1) for r in results], axis=1)
    totals = np.concatenate([r[4] for r in results])
    return out, kept, totals, track


def _window_sizes(steps: int, windows: int) -> np.ndarray:
    k = np.arange(steps) * windows // steps
    return np.bincount(k, minlength=windows)


def propagate(
    ensemble: ParticleEnsemble,
    policy,
    params: IntersectionParams,
    steps: int,
    n_jobs: int = 1,
) -> ParticleEnsemble:
    """Advance every particle by ``steps`` arrivals.

    Each particle owns its random stream, so the result does not depend
    on ``n_jobs``.
    """
    out, *_ = _propagate(ensemble, policy, params, steps, n_jobs)
    return out


class EmpiricalDistribution:
    """Right-continuous empirical CDF, optionally of a defective variable.

    ``n_total`` may exceed the number of samples: the remaining mass sits
    at ``+inf``, so the CDF tops out at ``len(samples) / n_total``.
    """

    def __init__(self, samples, n_total: int | None = None, atom_locations=()):
        self.samples = np.sort(np.asarray(samples, dtype=float).ravel())
        self.n_total = self.samples.size if n_total is None else int(n_total)
        if self.n_total < max(self.samples.size, 1):
            raise ValueError("n_total must cover every sample")
        self.atom_locations = tuple(float(a) for a in atom_locations)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def total_mass(self) -> float:
        return self.samples.size / self.n_total

    def cdf(self, t, left: bool = False):
        side = "left" if left else "right"
        return np.searchsorted(self.samples, t, side=side) / self.n_total

    @property
    def atoms(self) -> dict[float, float]:
        """Mass sitting exactly on each of ``atom_locations``."""
        return {a: float(self.cdf(a) - self.cdf(a, left=True)) for a in self.atom_locations}

    def mean(self) -> float:
        return float(self.samples.mean())

    def quantile(self, q):
        return np.quantile(self.samples, q)


def sup_distance(empirical: EmpiricalDistribution, reference) -> float:
    """``sup_t |F_emp(t) - F_ref(t)|`` for a reference with ``cdf(t, left=...)``.

    Between sample points the empirical CDF is flat and the reference is
    monotone, so checking both one-sided limits at every sample point and
    every reference atom is exact.
    """
    atoms = [loc for loc, _ in getattr(reference, "atoms", ())]
    points = np.unique(np.concatenate([empirical.samples, np.asarray(atoms, dtype=float)]))
    if points.size == 0:
        return 0.0
    right = np.abs(empirical.cdf(points) - reference.cdf(points))
    left = np.abs(empirical.cdf(points, left=True) - reference.cdf(points, left=True))
    tail = abs(empirical.total_mass - float(reference.cdf(np.inf)))
    return float(max(right.max(), left.max(), tail))


def dkw_epsilon(n: int, confidence: float = 0.99) -> float:
    """Half-width of the DKW band for ``n`` samples."""
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))


@dataclass(frozen=True)
class LaneDelaySample:
    """Dominant-lane delays: ``lanes[i]`` holds ``T^i`` for particles where lane i leads."""

    lanes: tuple
    joint: np.ndarray

    def lane(self, k: int) -> EmpiricalDistribution:
        return self.lanes[k - 1]


def lane_delay_distribution(ensemble: ParticleEnsemble, params: IntersectionParams | None = None):
    """Split the ensemble by which lane carries the larger delay.

    Ties go to lane 1; they have probability zero once the ensemble has
    left its initial state.
    """
    atoms = (0.0,) if params is None else (0.0, params.delta_d)
    lead1 = ensemble.t1 >= ensemble.t2
    n = len(ensemble)
    lanes = (
        EmpiricalDistribution(ensemble.t1[lead1], n, atoms),
        EmpiricalDistribution(ensemble.t2[~lead1], n, atoms),
    )
    return LaneDelaySample(lanes, ensemble.joint)


@dataclass(frozen=True)
class ProbeResult:
    converged: bool
    slope: float
    p_value: float
    window_means: np.ndarray

    @property
    def verdict(self) -> str:
        return "converged" if self.converged else f"diverging(slope={self.slope:.6g})"


def _probe_verdict(track, steps, start, threshold, alpha) -> ProbeResult:
    windows = track.shape[0]
    sizes = _window_sizes(steps, windows)
    means = track.mean(axis=1) / sizes
    edges = np.concatenate([[0], np.cumsum(sizes)])
    centers = start + 0.5 * (edges[:-1] + edges[1:])
    fit = stats.linregress(centers, means)
    slope = float(fit.slope)
    if not np.isfinite(fit.pvalue):
        # a perfectly flat track (e.g. no traffic interaction at all)
        p_one_sided = 1.0 if slope <= 0 else 0.0
    else:
        p_one_sided = fit.pvalue / 2 if slope > 0 else 1.0 - fit.pvalue / 2
    diverging = slope > threshold and p_one_sided < alpha
    return ProbeResult(not diverging, slope, float(p_one_sided), means)


@dataclass(frozen=True)
class VehicleDelaySample:
    distribution: EmpiricalDistribution
    particle_means: np.ndarray
    ensemble: ParticleEnsemble
    probe: ProbeResult | None = None

    @property
    def mean(self) -> float:
        return float(self.particle_means.mean())

    @property
    def stderr(self) -> float:
        """Monte Carlo standard error of ``mean`` across independent particles."""
        return float(self.particle_means.std(ddof=1) / math.sqrt(self.particle_means.size))


def vehicle_delay_distribution(
    ensemble: ParticleEnsemble,
    policy,
    params: IntersectionParams,
    steps: int,
    thin: int = 1,
    n_jobs: int = 1,
    windows: int = 5,
    threshold: float = 1e-3,
    alpha: float = 0.01,
) -> VehicleDelaySample:
    """Collect per-arrival vehicle delays over ``steps`` further events.

    Every ``thin``-th event enters the distribution; all events enter the
    per-particle means. With ``windows >= 3`` the same run also yields a
    divergence verdict (see :func:`divergence_probe`).
    """
    if steps < 1:
        raise ValueError("need at least one step to collect delays")
    if thin < 1:
        raise ValueError("thin must be >= 1")
    windows = windows if windows >= 3 and steps >= windows else 0
    out, kept, totals, track = _propagate(
        ensemble, policy, params, steps, n_jobs, True, thin, windows
    )
    dist = EmpiricalDistribution(kept, atom_locations=(0.0, params.delta_d))
    probe = None
    if windows:
        probe = _probe_verdict(track, steps, ensemble.step_count, threshold, alpha)
    return VehicleDelaySample(dist, totals / steps, out, probe)


def divergence_probe(
    policy,
    params: IntersectionParams,
    windows: int = 5,
    window: int = 400,
    particles: int = 2000,
    burn_in: int = DEFAULT_BURN_IN,
    seed: int = 0,
    threshold: float = 1e-3,
    alpha: float = 0.01,
    n_jobs: int = 1,
) -> ProbeResult:
    """Regress the ensemble-mean total delay ``T1 + T2`` on the event index.

    The chain is declared diverging when the slope over ``windows``
    consecutive post-burn-in windows exceeds ``threshold`` seconds per
    event and is significantly positive at level ``alpha``.
    """
    if windows < 3:
        raise ValueError("need at least three windows to fit a slope")
    ens = propagate(ParticleEnsemble.initial(particles, params, seed), policy, params, burn_in, n_jobs)
    steps = windows * window
    _, _, _, track = _propagate(ens, policy, params, steps, n_jobs, windows=windows)
    return _probe_verdict(track, steps, burn_in, threshold, alpha)


def stationarity_gap(
    ensemble: ParticleEnsemble,
    policy,
    params: IntersectionParams,
    lag: int,
    confidence: float = 0.99,
):
    """Largest sup-norm change of the lane CDFs over ``lag`` further events.

    Returns ``(distance, bound, later_ensemble)`` with ``bound`` twice the
    DKW half-width.
    """
    later = propagate(ensemble, policy, params, lag)
    first = lane_delay_distribution(ensemble, params)
    second = lane_delay_distribution(later, params)
    distance = 0.0
    for a, b in zip(first.lanes, second.lanes):
        pts = np.unique(np.concatenate([a.samples, b.samples]))
        if pts.size:
            distance = max(distance, float(np.abs(a.cdf(pts) - b.cdf(pts)).max()))
    return distance, 2 * dkw_epsilon(len(ensemble), confidence), later


def zebra_fraction(joint, params: IntersectionParams, eps: float = 1e-6) -> float:
    """Share of states on the FIFO stripes.

    A state is on-stripe when a lane sits at the clamp or
    ``|T1 - T2| = delta_d + n * delta_s`` for some integer ``n >= 0``.
    """
    joint = np.asarray(joint, dtype=float)
    t1, t2 = joint[:, 0], joint[:, 1]
    clamped = np.minimum(t1, t2) <= params.floor + eps
    excess = np.abs(t1 - t2) - params.delta_d
    if params.delta_s > 0:
        n = np.maximum(np.round(excess / params.delta_s), 0)
        on_line = np.abs(excess - n * params.delta_s) <= eps
    else:
        on_line = np.abs(excess) <= eps
    return float(np.mean(clamped | on_line))


def burned_in(policy, params, particles, steps=DEFAULT_BURN_IN, seed=0, n_jobs=1):
    """A fresh ensemble advanced through ``steps`` warm-up events."""
    return propagate(ParticleEnsemble.initial(particles, params, seed), policy, params, steps, n_jobs)
