"""Event-driven lane-delay dynamics for FIFO and FO.

A new vehicle in lane ``s`` arrives ``x`` seconds after the previous one.
For the ego lane ``s`` and the other lane ``s*`` write, relative to the
new vehicle's desired time::

    S = T[s]  + delta_s - x      earliest time behind the ego lane
    u = T[s*] - x                last vehicle of the other lane
    D = u + delta_d              earliest time behind the other lane

FIFO always queues the newcomer behind both lanes. FO lets it go ahead of
the other lane's last vehicle when it is ready strictly earlier
(``max(S, 0) < u``); that vehicle then yields by ``delta_d`` if needed.

Region numbers follow the usual tables for lane-1 arrivals (1-4 FIFO,
1-8 FO); lane-2 arrivals are handled by swapping the lanes. Off the
reachable support the tables leave gaps. Here every input falls into
exactly one region, with values given by the max-expressions above.
These coincide with the table rows wherever those rows apply.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NoRegionMatched
from .model import ArrivalEvent, DelayState, IntersectionParams, Policy

__all__ = [
    "MapRegion",
    "advance",
    "fifo_step",
    "fo_step",
    "step",
    "vehicle_delay_increment",
]

_REGION_COUNT = {Policy.FIFO: 4, Policy.FO: 8}


@dataclass(frozen=True)
class MapRegion:
    policy: Policy
    index: int

    def __post_init__(self):
        top = _REGION_COUNT[self.policy]
        if not 1 <= self.index <= top:
            raise ValueError(f"{self.policy.value} regions are 1..{top}, got {self.index}")


def advance(t1, t2, gaps, lanes, policy, params: IntersectionParams):
    """Apply one arrival to arrays of states.

    Returns ``(t1_next, t2_next, region, delay)`` where ``delay`` is the
    vehicle delay introduced by the arrival: the newcomer's own delay plus
    how far it pushes the other lane beyond where that lane would have
    drifted anyway (both measured above the clamp).
    """
    policy = Policy.coerce(policy)
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    x = np.asarray(gaps, dtype=float)
    ego_is_1 = np.asarray(lanes) == 1
    floor = params.floor
    dd, ds = params.delta_d, params.delta_s

    ego = np.where(ego_is_1, t1, t2)
    other = np.where(ego_is_1, t2, t1)
    S = ego + ds - x
    u = other - x
    D = u + dd
    drift = np.maximum(u, floor)

    region = np.where(
        (S < 0) & (D < 0), 1, np.where(D < 0, 2, np.where(other < ego, 3, 4))
    ).astype(np.int8)
    ego_next = np.maximum(np.maximum(S, D), 0.0)
    other_next = drift

    if policy is Policy.FO:
        earliest = np.maximum(S, 0.0)
        ahead = earliest < u
        fo_region = np.where(
            S < 0, np.where(u < dd, 5, 7), np.where(u < S + dd, 6, 8)
        ).astype(np.int8)
        region = np.where(ahead, fo_region, region)
        ego_next = np.where(ahead, earliest, ego_next)
        other_next = np.where(ahead, np.maximum(u, earliest + dd), other_next)

    # NaN inputs fail every comparison above and land in no consistent region
    bad = ~(np.isfinite(ego_next) & np.isfinite(other_next))
    if np.any(bad):
        idx = int(np.flatnonzero(bad)[0])
        raise NoRegionMatched(
            f"no region for state ({t1.flat[idx]}, {t2.flat[idx]}) and gap {x.flat[idx]}"
        )
    other_next = np.maximum(other_next, floor)
    delay = ego_next + np.maximum(other_next - drift, 0.0)
    t1_next = np.where(ego_is_1, ego_next, other_next)
    t2_next = np.where(ego_is_1, other_next, ego_next)
    return t1_next, t2_next, region, delay


def step(state: DelayState, event: ArrivalEvent, params: IntersectionParams, policy):
    policy = Policy.coerce(policy)
    t1, t2, region, _ = advance(
        [state.t1], [state.t2], [event.gap], [event.lane], policy, params
    )
    nxt = DelayState(float(t1[0]), float(t2[0]), floor=params.floor)
    return nxt, MapRegion(policy, int(region[0]))


def fifo_step(state: DelayState, event: ArrivalEvent, params: IntersectionParams):
    """One FIFO transition; returns the new state and the region that fired."""
    return step(state, event, params, Policy.FIFO)


def fo_step(state: DelayState, event: ArrivalEvent, params: IntersectionParams):
    """One FO transition; returns the new state and the region that fired."""
    return step(state, event, params, Policy.FO)


def vehicle_delay_increment(
    before: DelayState, after: DelayState, event: ArrivalEvent, params: IntersectionParams
) -> float:
    """Delay introduced by ``event`` given the states on either side of it.

    The ego term is the newcomer's own delay; the cross term counts only a
    push above ``max(T - x, floor)``, so a lane resting on the clamp does
    not register phantom delay.
    """
    ego, other = (1, 2) if event.lane == 1 else (2, 1)
    own = max(after[ego], 0.0)
    drift = max(before[other] - event.gap, params.floor)
    return own + max(after[other] - drift, 0.0)
