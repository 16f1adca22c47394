"""Delay distributions at a two-lane unmanaged intersection.

Closed-form steady states (``crossflow.analytic``), event-driven Monte
Carlo over the lane-delay maps (``crossflow.eds``, ``crossflow.maps``) and
a vehicle-level equilibrium oracle (``crossflow.micro``).
"""
from .analytic import (
    SteadyStateDistribution,
    fifo_vehicle_delay,
    fo_constants,
    fo_vehicle_delay,
    solve_characteristic_root,
)
from .eds import ParticleEnsemble, divergence_probe, propagate, vehicle_delay_distribution
from .estimators import AnalyticDelayModel, EquilibriumScheduler, SimulatedDelayModel
from .exceptions import CrossflowError
from .maps import advance, fifo_step, fo_step
from .model import ArrivalEvent, DelayState, IntersectionParams, Policy

__version__ = "0.1.0"

__all__ = [
    "AnalyticDelayModel",
    "ArrivalEvent",
    "CrossflowError",
    "DelayState",
    "EquilibriumScheduler",
    "IntersectionParams",
    "ParticleEnsemble",
    "Policy",
    "SimulatedDelayModel",
    "SteadyStateDistribution",
    "advance",
    "divergence_probe",
    "fifo_step",
    "fifo_vehicle_delay",
    "fo_constants",
    "fo_step",
    "fo_vehicle_delay",
    "propagate",
    "solve_characteristic_root",
    "vehicle_delay_distribution",
]
