"""Closed-form steady states for a zero same-lane gap.

Lane ``i`` "leads" when its delay is the larger one; ``G_i`` is the
(defective) distribution of the leading delay restricted to that event.
Under both policies the non-leading lane sits exactly ``delta_d`` behind,
so ``G_1`` and ``G_2`` determine the joint steady state.

Notation: ``lam = lambda1 + lambda2``, ``y = exp(-lam * dd)`` and
``y_i = exp(-lambda_i * dd)``. The index ``i*`` is the other lane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import NoNegativeRoot, UnsupportedDeltaS
from .model import IntersectionParams

__all__ = [
    "Segment",
    "SteadyStateDistribution",
    "CharacteristicRoot",
    "DelayResult",
    "FOConstants",
    "fifo_convergence_margin",
    "fo_convergence_margin",
    "fifo_critical_density",
    "characteristic_function",
    "solve_characteristic_root",
    "e_lambda",
    "fifo_ghat0",
    "fifo_lane_distribution",
    "fifo_vehicle_delay",
    "fo_constants",
    "fo_lane_distribution",
    "fo_vehicle_delay",
    "fo_delay_from_lanes",
]

_SERIES_CUTOFF = 1e-8


# ---------------------------------------------------------------------------
# symbolic distributions


def _int_exp(rate: float, length: float) -> float:
    """``int_0^length exp(rate * s) ds`` without cancellation."""
    if length == 0:
        return 0.0
    if math.isinf(length):
        if rate >= 0:
            return math.inf
        return -1.0 / rate
    z = rate * length
    if abs(z) < 1e-12:
        return length * (1.0 + 0.5 * z)
    return math.expm1(z) / rate


def _int_s_exp(rate: float, length: float) -> float:
    """``int_0^length s * exp(rate * s) ds``."""
    if length == 0:
        return 0.0
    if math.isinf(length):
        if rate >= 0:
            return math.inf
        return 1.0 / rate**2
    z = rate * length
    if abs(z) < 1e-4:
        # Taylor series of (e^z (z - 1) + 1) / z^2
        return length**2 * (0.5 + z / 3.0 + z * z / 8.0 + z**3 / 30.0)
    return (math.exp(z) * (z - 1.0) + 1.0) / rate**2


@dataclass(frozen=True)
class Segment:
    """Density ``sum(coef * exp(rate * (t - lo)))`` on ``[lo, hi)``."""

    lo: float
    hi: float
    terms: tuple

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"empty segment [{self.lo}, {self.hi})")
        object.__setattr__(self, "terms", tuple((float(c), float(r)) for c, r in self.terms))

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def mass_upto(self, t) -> np.ndarray:
        s = np.clip(np.asarray(t, dtype=float) - self.lo, 0.0, self.length)
        out = np.zeros_like(s)
        for coef, rate in self.terms:
            if rate == 0:
                out += coef * s
            else:
                with np.errstate(over="ignore", invalid="ignore"):
                    part = coef * np.expm1(rate * s) / rate
                if math.isinf(self.hi) and rate < 0:
                    part = np.where(np.isinf(s), -coef / rate, part)
                out += part
        return out

    def density(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        inside = (t >= self.lo) & (t < self.hi)
        s = np.where(inside, t - self.lo, 0.0)
        out = np.zeros_like(s)
        for coef, rate in self.terms:
            out += coef * np.exp(rate * s)
        return np.where(inside, out, 0.0)

    def mass(self) -> float:
        return sum(c * _int_exp(r, self.length) for c, r in self.terms)

    def first_moment(self) -> float:
        return sum(
            c * (self.lo * _int_exp(r, self.length) + _int_s_exp(r, self.length))
            for c, r in self.terms
        )

    def laplace(self, s: float) -> float:
        scale = math.exp(-s * self.lo)
        return scale * sum(c * _int_exp(r - s, self.length) for c, r in self.terms)


class SteadyStateDistribution:
    """Point masses plus exponential-sum densities on disjoint intervals.

    The lane distributions ``G_i`` are defective (their mass is the
    probability that lane ``i`` leads); sums of them and the vehicle-delay
    law have unit mass.
    """

    def __init__(self, atoms=(), segments=()):
        merged: dict[float, float] = {}
        for loc, mass in atoms:
            merged[float(loc)] = merged.get(float(loc), 0.0) + float(mass)
        self.atoms = tuple(sorted(merged.items()))
        self.segments = tuple(sorted(segments, key=lambda seg: seg.lo))

    def __repr__(self) -> str:
        return (
            f"SteadyStateDistribution(atoms={list(self.atoms)}, "
            f"segments={len(self.segments)}, mass={self.total_mass:.6g})"
        )

    def __add__(self, other: "SteadyStateDistribution") -> "SteadyStateDistribution":
        if not isinstance(other, SteadyStateDistribution):
            return NotImplemented
        return SteadyStateDistribution(self.atoms + other.atoms, self.segments + other.segments)

    def atom_mass(self, loc: float) -> float:
        return dict(self.atoms).get(float(loc), 0.0)

    def cdf(self, t, left: bool = False):
        """``P(X <= t)``, or ``P(X < t)`` when ``left`` is true."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for loc, mass in self.atoms:
            out += mass * ((t > loc) if left else (t >= loc))
        for seg in self.segments:
            out += seg.mass_upto(t)
        return out if out.ndim else float(out)

    def pdf(self, t):
        """Density of the continuous part (atoms excluded)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for seg in self.segments:
            out += seg.density(t)
        return out if out.ndim else float(out)

    @property
    def total_mass(self) -> float:
        return sum(m for _, m in self.atoms) + sum(seg.mass() for seg in self.segments)

    def mean(self) -> float:
        """``int t dF(t)``; for a defective law this is not normalized."""
        return sum(loc * m for loc, m in self.atoms) + sum(
            seg.first_moment() for seg in self.segments
        )

    def laplace(self, s: float) -> float:
        """``int exp(-s t) dF(t)``."""
        return sum(m * math.exp(-s * loc) for loc, m in self.atoms) + sum(
            seg.laplace(s) for seg in self.segments
        )

    @property
    def support_max(self) -> float:
        ends = [loc for loc, m in self.atoms if m > 0] + [seg.hi for seg in self.segments]
        return max(ends) if ends else 0.0


class DelayResult(NamedTuple):
    distribution: SteadyStateDistribution
    expected: float


# ---------------------------------------------------------------------------
# convergence conditions


def fifo_convergence_margin(params: IntersectionParams) -> float:
    """``lam - (2 l1 l2 dd + (l1^2 + l2^2) ds)``; nonnegative when FIFO may converge."""
    l1, l2 = params.lambda1, params.lambda2
    return params.lambda_total - (2 * l1 * l2 * params.delta_d + (l1**2 + l2**2) * params.delta_s)


def fo_convergence_margin(params: IntersectionParams) -> float:
    l1, l2, dd = params.lambda1, params.lambda2, params.delta_d
    y1, y2 = math.exp(-l1 * dd), math.exp(-l2 * dd)
    load = l1 * l2 * (y1 + y2) * dd + (l1**2 + l2**2 + l1 * l2 * (2 - y1 - y2)) * params.delta_s
    return params.lambda_total - load


def fifo_critical_density(r: float, delta_d: float) -> float:
    """Total density at which the FIFO margin vanishes for ratio ``r`` and ``delta_s = 0``."""
    if not r > 0:
        raise ValueError(f"ratio must be positive, got {r}")
    if not delta_d > 0:
        raise ValueError(f"delta_d must be positive, got {delta_d}")
    return (1 + r) ** 2 / (2 * delta_d * r)


# ---------------------------------------------------------------------------
# characteristic root


@dataclass(frozen=True)
class CharacteristicRoot:
    a: float
    residual: float


def characteristic_function(a, params: IntersectionParams):
    """``(a - l1)(a - l2) - l1 l2 exp(-2 a dd)``, written to avoid cancellation near 0."""
    l1, l2 = params.lambda1, params.lambda2
    a = np.asarray(a, dtype=float)
    out = a * a - a * (l1 + l2) - l1 * l2 * np.expm1(-2.0 * a * params.delta_d)
    return out if out.ndim else float(out)


def _require_zero_ds(params: IntersectionParams):
    if params.delta_s != 0:
        raise UnsupportedDeltaS(
            f"closed forms need delta_s = 0, got delta_s = {params.delta_s}"
        )


def solve_characteristic_root(params: IntersectionParams) -> CharacteristicRoot:
    """The unique negative root, by bisection then one Newton polish."""
    _require_zero_ds(params)
    if fifo_convergence_margin(params) <= 0:
        raise NoNegativeRoot(
            f"FIFO margin is {fifo_convergence_margin(params):.6g} <= 0; the tail root merges with 0"
        )
    h = lambda a: characteristic_function(a, params)  # noqa: E731
    hi = -1e-12
    lo = -10.0 * params.lambda_total
    # h > 0 just left of 0 under a positive margin, h -> -inf as a -> -inf
    while h(lo) > 0:
        lo *= 2.0
        if lo < -1e12:
            raise NoNegativeRoot("no sign change found for the characteristic equation")
    if h(hi) <= 0:
        raise NoNegativeRoot("root too close to 0 to isolate")
    while hi - lo > 1e-14 * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            hi = mid
        else:
            lo = mid
        if mid in (lo, hi) and hi - lo <= 2 * np.spacing(abs(mid)):
            break
    a = 0.5 * (lo + hi)
    l1, l2, dd = params.lambda1, params.lambda2, params.delta_d
    slope = 2 * a - (l1 + l2) + 2 * dd * l1 * l2 * math.exp(-2 * a * dd)
    if slope != 0:
        polished = a - h(a) / slope
        if polished < 0 and abs(h(polished)) <= abs(h(a)):
            a = polished
    return CharacteristicRoot(a, h(a))


# ---------------------------------------------------------------------------
# FIFO


def e_lambda(lam: float, delta_d: float) -> float:
    """``int_0^dd t d(exp(lam t))``; the removable singularity at 0 uses the series."""
    if delta_d < 0:
        raise ValueError(f"delta_d must be >= 0, got {delta_d}")
    if abs(lam) < _SERIES_CUTOFF:
        return lam * delta_d**2 / 2.0
    z = lam * delta_d
    if abs(z) < 1e-2:
        # dd * sum_{n>=2} (n - 1) z^(n-1) / n!, cancellation-free
        return delta_d * sum((n - 1) * z ** (n - 1) / math.factorial(n) for n in range(2, 10))
    return (z * math.exp(z) - math.expm1(z)) / lam


def _normalize_variant(variant) -> str:
    key = str(variant).lower().replace(" ", "").replace("_", "")
    if key in ("approx1", "1"):
        return "approx1"
    if key in ("approx2", "2"):
        return "approx2"
    raise ValueError(f"unknown FIFO approximation {variant!r}; use 'approx1' or 'approx2'")


def _approx1(li, lj, a, dd):
    lam = li + lj
    y = math.exp(-lam * dd)
    yi = math.exp(-li * dd)
    B = lam**2 * (
        a * a * y * (y - yi) * (1 - yi)
        + a * (a - lam) * yi
        + (a - li) * lam * y * y * (yi - 1)
        + (2 * a - lam) * lam * y * yi * (1 - yi)
        + (a - lam) * li * y * yi**2
        + li * lj * yi
        + li**2 * y * y * yi
        - a * li * y * y
    )
    num = a * li * y * ((li - a) * li * (y * y - 1) + (a - lam) * yi * (lj + li * y))
    return num / B


def _approx2(li, lj, a, dd):
    lam = li + lj
    y = math.exp(-lam * dd)
    yi = math.exp(-li * dd)
    ea = math.exp(a * dd)
    num = a * li * y * ea * (li + lj * yi - a * ea)
    den = lam * (a * lam * ea - a * a * ea * ea + li * lj * (y - 1))
    return num / den


def fifo_ghat0(params: IntersectionParams, variant="approx1", root: CharacteristicRoot | None = None):
    """Point masses ``(g1(0), g2(0))`` of the approximate FIFO steady state.

    ``approx1`` keeps the global point-mass balance and drops the density
    jump condition at ``delta_d``; ``approx2`` does the opposite.
    """
    kind = _normalize_variant(variant)
    if params.delta_d == 0 and params.delta_s == 0:
        # no gap to respect: nobody is ever delayed
        return params.lane_prob(1), params.lane_prob(2)
    root = root or solve_characteristic_root(params)
    f = _approx1 if kind == "approx1" else _approx2
    l1, l2, dd = params.lambda1, params.lambda2, params.delta_d
    return f(l1, l2, root.a, dd), f(l2, l1, root.a, dd)


def _fifo_lane(g0, lam_i, lam_other, lam, a, dd):
    M = lam_i / lam
    at_dd = g0 * math.exp(lam_other * dd)
    segments = []
    if dd > 0:
        segments.append(Segment(0.0, dd, ((g0 * lam_other, lam_other),)))
    segments.append(Segment(dd, math.inf, ((a * (at_dd - M), a),)))
    return SteadyStateDistribution([(0.0, g0)], segments)


def fifo_lane_distribution(params: IntersectionParams, variant="approx1"):
    """``(G_1, G_2)``: exponential growth on ``[0, dd]``, tail at rate ``a`` toward ``l_i / lam``."""
    if params.delta_d == 0 and params.delta_s == 0:
        g1, g2 = fifo_ghat0(params, variant)
        return SteadyStateDistribution([(0.0, g1)]), SteadyStateDistribution([(0.0, g2)])
    root = solve_characteristic_root(params)
    g1, g2 = fifo_ghat0(params, variant, root)
    l1, l2, lam, dd = params.lambda1, params.lambda2, params.lambda_total, params.delta_d
    return (
        _fifo_lane(g1, l1, l2, lam, root.a, dd),
        _fifo_lane(g2, l2, l1, lam, root.a, dd),
    )


def fifo_vehicle_delay(params: IntersectionParams, variant="approx1") -> DelayResult:
    """Vehicle delay ``P_d = G_1 + G_2`` and its closed-form mean."""
    if params.delta_d == 0 and params.delta_s == 0:
        G1, G2 = fifo_lane_distribution(params, variant)
        return DelayResult(G1 + G2, 0.0)
    root = solve_characteristic_root(params)
    g1, g2 = fifo_ghat0(params, variant, root)
    G1, G2 = fifo_lane_distribution(params, variant)
    dist = G1 + G2
    l1, l2, dd, a = params.lambda1, params.lambda2, params.delta_d, root.a
    p_dd = g1 * math.exp(l2 * dd) + g2 * math.exp(l1 * dd)
    expected = g1 * e_lambda(l2, dd) + g2 * e_lambda(l1, dd) - (a * dd - 1) * (p_dd - 1) / a
    return DelayResult(dist, expected)


# ---------------------------------------------------------------------------
# FO


@dataclass(frozen=True)
class FOConstants:
    """Per-lane constants, each a pair indexed ``[lane - 1]``.

    ``c`` is the density coefficient on ``(0, dd)``, ``ghat0`` and
    ``ghat_dd`` the point masses at 0 and ``dd``, ``M`` the total mass and
    ``I`` the Laplace transform at ``lam``.
    """

    c: tuple
    ghat0: tuple
    ghat_dd: tuple
    M: tuple
    I: tuple  # noqa: E741
    solver: str = "closed_form"


def _fo_closed_form(params: IntersectionParams) -> FOConstants:
    l1, l2, lam, dd = params.lambda1, params.lambda2, params.lambda_total, params.delta_d
    rates = (l1, l2)
    y = math.exp(-lam * dd)
    ys = (math.exp(-l1 * dd), math.exp(-l2 * dd))
    den = lam**2 * (1 + y * ys[0] + y * ys[1] - y - y * y)
    c, g0 = [], []
    for i in (0, 1):
        li, lj = rates[i], rates[1 - i]
        yj = ys[1 - i]
        c.append(li * lj * (li * y * y + li * yj + lj * y - li * y * y * yj) / den)
        g0.append(c[i] / lj)
    M = (l1 / lam, l2 / lam)
    # point mass at dd from region 5 as (l_i/lam)(M_i* - I_i*), with
    # I_i = g0_i + c_i (1 - y_i) / l_i + gdd_i y; a 2x2 linear system in gdd
    base = [g0[i] + c[i] * (1 - ys[i]) / rates[i] for i in (0, 1)]
    A = np.array([[1.0, l1 / lam * y], [l2 / lam * y, 1.0]])
    b = np.array([l1 / lam * (M[1] - base[1]), l2 / lam * (M[0] - base[0])])
    gdd = np.linalg.solve(A, b)
    I = tuple(base[i] + gdd[i] * y for i in (0, 1))  # noqa: E741
    return FOConstants(tuple(c), tuple(g0), (float(gdd[0]), float(gdd[1])), M, I)


def _fo_balance(params: IntersectionParams) -> FOConstants:
    """Solve the point-mass balance with the yield mass on the pushed lane.

    A region-5 arrival in lane ``i`` leaves lane ``i*`` leading at
    exactly ``dd``, so ``gdd_i* = (l_i / lam)(M_i* - I_i*)``. This is
    what the transition map does; the closed form instead books that
    mass under lane ``i`` and agrees only when ``l1 == l2``.
    """
    l1, l2, lam, dd = params.lambda1, params.lambda2, params.lambda_total, params.delta_d
    rates = (l1, l2)
    y = math.exp(-lam * dd)
    ys = (math.exp(-l1 * dd), math.exp(-l2 * dd))
    # unknowns: [g0_1, gdd_1, g0_2, gdd_2]
    Mrow, Irow = [], []
    for i in (0, 1):
        li, lj = rates[i], rates[1 - i]
        m = np.zeros(4)
        m[2 * i] = math.exp(lj * dd)
        m[2 * i + 1] = 1.0
        v = np.zeros(4)
        v[2 * i] = 1 + lj * (1 - ys[i]) / li
        v[2 * i + 1] = y
        Mrow.append(m)
        Irow.append(v)
    rows, rhs = [], []
    for i in (0, 1):
        j = 1 - i
        e = np.zeros(4)
        e[2 * i] = 1.0
        rows.append(e - rates[i] / lam * (Irow[i] + y * Irow[j]))
        rhs.append(0.0)
        e = np.zeros(4)
        e[2 * i + 1] = 1.0
        rows.append(e - rates[j] / lam * (Mrow[i] - Irow[i]))
        rhs.append(0.0)
    rows.append(Mrow[0] + Mrow[1])
    rhs.append(1.0)
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    g0 = (float(sol[0]), float(sol[2]))
    gdd = (float(sol[1]), float(sol[3]))
    c = (g0[0] * l2, g0[1] * l1)
    M = tuple(float(Mrow[i] @ sol) for i in (0, 1))
    I = tuple(float(Irow[i] @ sol) for i in (0, 1))  # noqa: E741
    return FOConstants(c, g0, gdd, M, I, solver="balance")


_FO_SOLVERS = {"closed_form": _fo_closed_form, "balance": _fo_balance}


def fo_constants(params: IntersectionParams, solver: str = "closed_form") -> FOConstants:
    """Steady-state constants of FO with ``delta_s = 0``.

    ``solver="closed_form"`` evaluates the published closed form
    (``M_i = l_i / lam``). ``solver="balance"`` solves the point-mass
    balance equations consistently with the transition map; the two agree
    for symmetric rates.
    """
    _require_zero_ds(params)
    try:
        return _FO_SOLVERS[solver](params)
    except KeyError:
        raise ValueError(f"unknown solver {solver!r}; use one of {sorted(_FO_SOLVERS)}") from None


def _fo_lane(g0, gdd, c, lam_other, dd):
    if dd == 0:
        return SteadyStateDistribution([(0.0, g0 + gdd)])
    return SteadyStateDistribution(
        [(0.0, g0), (dd, gdd)], [Segment(0.0, dd, ((c, lam_other),))]
    )


def fo_lane_distribution(params: IntersectionParams, solver: str = "closed_form"):
    """``(G_1, G_2)`` with atoms at 0 and ``dd`` and an exponential density between."""
    k = fo_constants(params, solver)
    l1, l2, dd = params.lambda1, params.lambda2, params.delta_d
    return (
        _fo_lane(k.ghat0[0], k.ghat_dd[0], k.c[0], l2, dd),
        _fo_lane(k.ghat0[1], k.ghat_dd[1], k.c[1], l1, dd),
    )


def fo_vehicle_delay(params: IntersectionParams, solver: str = "closed_form") -> DelayResult:
    """FO vehicle-delay law on ``[0, dd]``.

    The closed form is evaluated term by term. With ``solver="balance"``
    the law is assembled from the balanced lane distributions by
    :func:`fo_delay_from_lanes`.
    """
    if solver != "closed_form":
        lanes = fo_lane_distribution(params, solver)
        dist = fo_delay_from_lanes(lanes, params)
        return DelayResult(dist, dist.mean())
    k = fo_constants(params, solver)
    l1, l2, lam, dd = params.lambda1, params.lambda2, params.lambda_total, params.delta_d
    c1, c2 = k.c
    y1, y2 = math.exp(-l1 * dd), math.exp(-l2 * dd)
    cross = 2 * l1 * l2 / lam**2
    k21 = c2 / (l2 * y1)
    k12 = c1 / (l1 * y2)
    p0 = c2 / l1 + c1 / l2
    expected = (
        c2 / l1 * e_lambda(l1, dd)
        + c1 / l2 * e_lambda(l2, dd)
        - k21 * e_lambda(-l1, dd)
        - k12 * e_lambda(-l2, dd)
        + (k21 + k12 - cross) * e_lambda(-lam, dd)
    )
    if dd == 0:
        return DelayResult(SteadyStateDistribution([(0.0, p0)]), expected)
    # derivative of the CDF on (0, dd)
    terms = (
        (c2, l1),
        (c1, l2),
        (cross * lam - (k21 + k12) * lam, -lam),
        (k21 * l1, -l1),
        (k12 * l2, -l2),
    )
    dist = SteadyStateDistribution([(0.0, p0)], [Segment(0.0, dd, terms)])
    return DelayResult(dist, expected)


def fo_delay_from_lanes(lanes, params: IntersectionParams) -> SteadyStateDistribution:
    """Vehicle-delay law implied by FO lane distributions with ``delta_s = 0``.

    Each lane law must consist of atoms at 0 and ``dd`` and one segment on
    ``[0, dd)`` with a single exponential term. A newcomer facing lead
    delay ``tau`` either queues behind its own lane (delay
    ``max(tau - x, 0)``), behind the other lane (``max(tau + dd - x, 0)``)
    or, when ``x < tau``, passes first and pushes the other lane by
    ``dd - tau + x``. Integrating over ``x ~ Exp(lam)`` gives ``P_d`` on
    ``[0, dd)`` as a sum of exponentials in ``t``.
    """
    _require_zero_ds(params)
    lam, dd = params.lambda_total, params.delta_d
    rates = (params.lambda1, params.lambda2)
    y = math.exp(-lam * dd)
    acc: dict[float, float] = {}

    def add(coef, rate):
        acc[rate] = acc.get(rate, 0.0) + coef

    for j, G in enumerate(lanes):
        w_same = rates[j] / lam
        w_cross = rates[1 - j] / lam
        m0 = G.atom_mass(0.0)
        mD = G.atom_mass(dd) if dd > 0 else 0.0
        # queueing behind the own lane
        add(w_same * m0, 0.0)
        add(w_same * mD * y, lam)
        # queueing behind, or jumping ahead of, the other lane
        add(w_cross * m0 * y, lam)
        add(w_cross * mD * y * y, lam)
        add(w_cross * mD, 0.0)
        add(-w_cross * mD, -lam)
        for seg in G.segments:
            if len(seg.terms) != 1 or seg.lo != 0.0 or seg.hi != dd:
                raise ValueError("lane law must have one exponential segment on [0, dd)")
            C, rho = seg.terms[0]
            d = rho - lam
            add(w_same * C / rho, rho)
            add(-w_same * C / rho, 0.0)
            add(w_same * C * math.exp(d * dd) / d, lam)
            add(-w_same * C / d, rho)
            eD = math.exp(rho * dd)
            add(w_cross * C * math.expm1(d * dd) / d * y, lam)
            add(w_cross * C * eD / rho, 0.0)
            add(-w_cross * C * eD / rho, -rho)
            add(-w_cross * C * eD / d, -lam)
            add(w_cross * C * eD / d, -rho)
    p0 = sum(acc.values())
    if dd == 0:
        return SteadyStateDistribution([(0.0, p0)])
    terms = tuple((coef * rate, rate) for rate, coef in sorted(acc.items()) if rate != 0.0)
    return SteadyStateDistribution([(0.0, p0)], [Segment(0.0, dd, terms)])
