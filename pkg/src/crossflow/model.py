"""Parameters, lane-delay state, arrival sampling and the conflict graph."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import NegativeGap, NonPositiveRate

__all__ = [
    "Policy",
    "IntersectionParams",
    "DelayState",
    "ArrivalEvent",
    "ConflictGraph",
    "ParticleStreams",
    "validate",
    "sample_arrival",
    "sample_arrivals",
]


class Policy(str, enum.Enum):
    FIFO = "fifo"
    FO = "fo"

    @classmethod
    def coerce(cls, value: "Policy | str") -> "Policy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown policy {value!r}; expected 'fifo' or 'fo'") from None


@dataclass(frozen=True)
class IntersectionParams:
    """Arrival rates (1/s) of the two lanes and the two temporal gaps (s).

    ``delta_d`` separates consecutive crossings from conflicting lanes,
    ``delta_s`` consecutive crossings from the same lane.
    """

    lambda1: float
    lambda2: float
    delta_d: float
    delta_s: float = 0.0

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "delta_d", "delta_s"):
            object.__setattr__(self, name, float(getattr(self, name)))
        validate(self)

    @classmethod
    def from_density(cls, lam: float, ratio: float, delta_d: float, delta_s: float = 0.0):
        """Build from total density ``lam`` and ratio ``r = lambda1 / lambda2``."""
        if not lam > 0:
            raise NonPositiveRate(f"total density must be positive, got {lam}")
        if not ratio > 0:
            raise NonPositiveRate(f"density ratio must be positive, got {ratio}")
        lambda2 = lam / (1.0 + ratio)
        return cls(lam - lambda2, lambda2, delta_d, delta_s)

    @property
    def lambda_total(self) -> float:
        return self.lambda1 + self.lambda2

    @property
    def ratio(self) -> float:
        return self.lambda1 / self.lambda2

    def rate(self, lane: int) -> float:
        return self.lambda1 if lane == 1 else self.lambda2

    def lane_prob(self, lane: int) -> float:
        if lane not in (1, 2):
            raise ValueError(f"lane must be 1 or 2, got {lane}")
        p1 = self.lambda1 / self.lambda_total
        # computed as a complement so the two probabilities sum to exactly 1
        return p1 if lane == 1 else 1.0 - p1

    @property
    def floor(self) -> float:
        """Lower clamp for lane delays.

        Equals ``-delta_d`` whenever ``delta_s <= delta_d``. A larger
        same-lane gap needs a deeper floor, otherwise the clamp would
        erase history that still constrains the next same-lane vehicle.
        """
        return -max(self.delta_d, self.delta_s)

    def swapped(self) -> "IntersectionParams":
        return IntersectionParams(self.lambda2, self.lambda1, self.delta_d, self.delta_s)

    def as_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "delta_d": self.delta_d,
            "delta_s": self.delta_s,
        }


def validate(params: IntersectionParams) -> IntersectionParams:
    """Check parameter ranges, returning ``params`` unchanged when valid."""
    for name in ("lambda1", "lambda2"):
        value = getattr(params, name)
        if not (value > 0 and math.isfinite(value)):
            raise NonPositiveRate(f"{name} must be a positive finite rate, got {value}")
    for name in ("delta_d", "delta_s"):
        value = getattr(params, name)
        if not (value >= 0 and math.isfinite(value)):
            raise NegativeGap(f"{name} must be a non-negative finite gap, got {value}")
    return params


@dataclass(frozen=True)
class DelayState:
    """Lane-delay vector ``(T1, T2)``, clamped from below at ``floor`` on construction."""

    t1: float
    t2: float
    floor: float = field(default=-math.inf, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "t1", max(float(self.t1), self.floor))
        object.__setattr__(self, "t2", max(float(self.t2), self.floor))

    @classmethod
    def empty(cls, params: IntersectionParams) -> "DelayState":
        """The no-traffic state: both lanes at the clamp."""
        return cls(params.floor, params.floor, floor=params.floor)

    def swapped(self) -> "DelayState":
        return DelayState(self.t2, self.t1, floor=self.floor)

    def __getitem__(self, lane: int) -> float:
        if lane == 1:
            return self.t1
        if lane == 2:
            return self.t2
        raise IndexError(lane)

    def as_tuple(self) -> tuple[float, float]:
        return (self.t1, self.t2)


@dataclass(frozen=True)
class ArrivalEvent:
    gap: float
    lane: int

    def __post_init__(self):
        if not self.gap >= 0:
            raise NegativeGap(f"inter-arrival gap must be >= 0, got {self.gap}")
        if self.lane not in (1, 2):
            raise ValueError(f"lane must be 1 or 2, got {self.lane}")


@dataclass(frozen=True)
class ConflictGraph:
    """Incoming lanes ``1..lane_count`` and the unordered lane pairs that conflict."""

    lane_count: int
    conflicts: frozenset = frozenset()

    def __post_init__(self):
        pairs = set()
        for pair in self.conflicts:
            a, b = tuple(pair)
            if a == b:
                raise ValueError(f"lane {a} cannot conflict with itself")
            for lane in (a, b):
                if not 1 <= lane <= self.lane_count:
                    raise ValueError(f"lane {lane} outside 1..{self.lane_count}")
            pairs.add(frozenset((a, b)))
        object.__setattr__(self, "conflicts", frozenset(pairs))

    @classmethod
    def two_lane(cls) -> "ConflictGraph":
        return cls(2, frozenset({frozenset((1, 2))}))

    @classmethod
    def complete(cls, lane_count: int) -> "ConflictGraph":
        pairs = frozenset(frozenset(p) for p in combinations(range(1, lane_count + 1), 2))
        return cls(lane_count, pairs)

    def conflict(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.conflicts


_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 array arithmetic wraps modulo 2**64
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class ParticleStreams:
    """Independent splitmix64 streams, one per particle.

    Stream ``p`` depends only on ``(seed, p)``, so any partition of the
    particles across workers reproduces the same draws.
    """

    def __init__(self, seed: int, n: int, offset: int = 0):
        if n < 1:
            raise ValueError("need at least one stream")
        self.seed = int(seed)
        key = _mix64(np.array([self.seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))
        index = np.arange(offset, offset + n, dtype=np.uint64) + np.uint64(1)
        self._state = _mix64(key ^ _mix64(index * _GAMMA))

    def __len__(self) -> int:
        return self._state.size

    def subset(self, sl: slice) -> "ParticleStreams":
        out = object.__new__(ParticleStreams)
        out.seed = self.seed
        out._state = self._state[sl].copy()
        return out

    def uniform(self) -> np.ndarray:
        """One draw in ``[0, 1)`` from every stream."""
        self._state = self._state + _GAMMA
        return (_mix64(self._state) >> np.uint64(11)).astype(np.float64) * _INV53


def sample_arrivals(streams: ParticleStreams, params: IntersectionParams):
    """Draw one arrival per stream: exponential gaps and lane labels (1 or 2)."""
    gaps = -np.log1p(-streams.uniform()) / params.lambda_total
    lanes = np.where(streams.uniform() < params.lane_prob(1), 1, 2).astype(np.int8)
    return gaps, lanes


def sample_arrival(rng, params: IntersectionParams) -> ArrivalEvent:
    """Draw the next arrival from a ``numpy.random.Generator`` or a single-particle stream."""
    if isinstance(rng, ParticleStreams):
        gaps, lanes = sample_arrivals(rng, params)
        return ArrivalEvent(float(gaps[0]), int(lanes[0]))
    gap = rng.exponential(1.0 / params.lambda_total)
    lane = 1 if rng.random() < params.lane_prob(1) else 2
    return ArrivalEvent(float(gap), lane)
