"""Microscopic equilibria on explicit vehicle sequences.

These are the ground truth for the event-driven transition maps: each
policy is evaluated vehicle by vehicle, and lane delays are read off the
resulting passing times.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import UnsortedInput
from .model import ConflictGraph, DelayState, IntersectionParams, Policy

__all__ = [
    "VehicleArrival",
    "EquilibriumSchedule",
    "fifo_schedule",
    "fo_schedule",
    "schedule",
    "lane_delays",
    "lane_delay_path",
    "vehicle_delays",
    "delay_increments",
    "check_feasible",
]


class VehicleArrival(NamedTuple):
    desired_time: float
    lane: int


@dataclass(frozen=True)
class EquilibriumSchedule:
    """Final passing times, plus every intermediate equilibrium when recorded.

    ``history[i]`` holds the equilibrium among the first ``i + 1``
    vehicles. FIFO never revises earlier vehicles, so its history is
    implied by the final times.
    """

    policy: Policy
    passing_times: np.ndarray
    history: tuple | None = None

    def __len__(self) -> int:
        return self.passing_times.size

    def at(self, count: int) -> np.ndarray:
        """Equilibrium passing times once ``count`` vehicles have arrived."""
        if not 1 <= count <= len(self):
            raise IndexError(f"count must lie in 1..{len(self)}, got {count}")
        if self.policy is Policy.FIFO:
            return self.passing_times[:count]
        if self.history is None:
            raise ValueError("FO schedule was computed without record=True")
        return self.history[count - 1]


def _as_vehicles(vehicles) -> list[VehicleArrival]:
    out = [VehicleArrival(float(t), int(s)) for t, s in vehicles]
    for a, b in zip(out, out[1:]):
        if b.desired_time < a.desired_time:
            raise UnsortedInput(
                f"desired times must be non-decreasing, got {a.desired_time} then {b.desired_time}"
            )
    return out


def _gap(graph: ConflictGraph, params: IntersectionParams, a: int, b: int):
    if a == b:
        return params.delta_s
    if graph.conflict(a, b):
        return params.delta_d
    return None


def _earliest(lane, base, lane_max, graph, params):
    t = base
    for other, latest in lane_max.items():
        gap = _gap(graph, params, other, lane)
        if gap is not None and latest + gap > t:
            t = latest + gap
    return t


def _graph_for(vehicles, graph):
    if graph is None:
        graph = ConflictGraph.two_lane()
    for v in vehicles:
        if not 1 <= v.lane <= graph.lane_count:
            raise ValueError(f"lane {v.lane} is not a node of the conflict graph")
    return graph


def fifo_schedule(
    vehicles: Sequence, params: IntersectionParams, graph: ConflictGraph | None = None
) -> EquilibriumSchedule:
    """Each vehicle passes after every earlier conflicting or same-lane vehicle."""
    vehicles = _as_vehicles(vehicles)
    graph = _graph_for(vehicles, graph)
    lane_max: dict[int, float] = {}
    times = np.empty(len(vehicles))
    for i, v in enumerate(vehicles):
        t = _earliest(v.lane, v.desired_time, lane_max, graph, params)
        times[i] = t
        lane_max[v.lane] = max(lane_max.get(v.lane, -np.inf), t)
    return EquilibriumSchedule(Policy.FIFO, times)


def fo_schedule(
    vehicles: Sequence,
    params: IntersectionParams,
    graph: ConflictGraph | None = None,
    record: bool = True,
) -> EquilibriumSchedule:
    """Flexible order: re-rank all vehicles by earliest time at every arrival.

    A new vehicle first gets its earliest time behind its own lane; all
    vehicles are then sorted by their current times (ties go to the
    smaller index) and re-timed in that order.
    """
    vehicles = _as_vehicles(vehicles)
    graph = _graph_for(vehicles, graph)
    lanes = [v.lane for v in vehicles]
    times: list[float] = []
    history = []
    for i, v in enumerate(vehicles):
        ego = [times[j] for j in range(i) if lanes[j] == v.lane]
        earliest = max([v.desired_time] + [t + params.delta_s for t in ego])
        current = times + [earliest]
        order = sorted(range(i + 1), key=lambda k: (current[k], k))
        updated = [0.0] * (i + 1)
        lane_max: dict[int, float] = {}
        for k in order:
            t = _earliest(lanes[k], current[k], lane_max, graph, params)
            updated[k] = t
            lane_max[lanes[k]] = max(lane_max.get(lanes[k], -np.inf), t)
        times = updated
        if record:
            history.append(np.array(times))
    return EquilibriumSchedule(Policy.FO, np.array(times), tuple(history) if record else None)


def schedule(vehicles, params, policy, graph=None) -> EquilibriumSchedule:
    if Policy.coerce(policy) is Policy.FIFO:
        return fifo_schedule(vehicles, params, graph)
    return fo_schedule(vehicles, params, graph)


def lane_delays(
    sched: EquilibriumSchedule, vehicles: Sequence, params: IntersectionParams, count: int
) -> DelayState:
    """Latest passing time per lane minus the newest desired time.

    ``count`` is the number of vehicles included (1-based). A lane with
    no vehicle yet sits at the clamp.
    """
    vehicles = _as_vehicles(vehicles)
    times = sched.at(count)
    newest = vehicles[count - 1].desired_time
    delays = {}
    for lane in (1, 2):
        lane_times = [times[j] for j in range(count) if vehicles[j].lane == lane]
        delays[lane] = max(lane_times) - newest if lane_times else params.floor
    return DelayState(delays[1], delays[2], floor=params.floor)


def lane_delay_path(
    sched: EquilibriumSchedule, vehicles: Sequence, params: IntersectionParams
) -> np.ndarray:
    """``lane_delays`` after every arrival, as an ``(n, 2)`` array."""
    vehicles = _as_vehicles(vehicles)
    lanes = np.array([v.lane for v in vehicles])
    out = np.empty((len(vehicles), 2))
    for i, v in enumerate(vehicles):
        times = sched.at(i + 1)
        for col, lane in enumerate((1, 2)):
            mask = lanes[: i + 1] == lane
            latest = times[mask].max() - v.desired_time if mask.any() else params.floor
            out[i, col] = max(latest, params.floor)
    return out


def vehicle_delays(sched: EquilibriumSchedule, vehicles: Sequence) -> np.ndarray:
    vehicles = _as_vehicles(vehicles)
    desired = np.array([v.desired_time for v in vehicles])
    return sched.passing_times - desired


def delay_increments(sched: EquilibriumSchedule, vehicles: Sequence) -> np.ndarray:
    """Total delay added by each arrival, counting every vehicle it pushes.

    The increments telescope: their sum equals the sum of final vehicle
    delays.
    """
    vehicles = _as_vehicles(vehicles)
    out = np.empty(len(vehicles))
    previous = np.empty(0)
    for i, v in enumerate(vehicles):
        current = sched.at(i + 1)
        out[i] = float(np.sum(current[:i] - previous)) + current[i] - v.desired_time
        previous = current
    return out


def check_feasible(
    sched: EquilibriumSchedule,
    vehicles: Sequence,
    params: IntersectionParams,
    graph: ConflictGraph | None = None,
    tol: float = 1e-9,
) -> bool:
    """True when every gap requirement and ``t >= t_desired`` hold within ``tol``."""
    vehicles = _as_vehicles(vehicles)
    graph = _graph_for(vehicles, graph)
    t = sched.passing_times
    for i, vi in enumerate(vehicles):
        if t[i] < vi.desired_time - tol:
            return False
        for j in range(i):
            gap = _gap(graph, params, vehicles[j].lane, vi.lane)
            if gap is not None and abs(t[i] - t[j]) < gap - tol:
                return False
    return True
