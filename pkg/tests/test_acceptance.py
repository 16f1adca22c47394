"""Acceptance criteria, one test each.

Every test prints a ``PASS``/``FAIL`` line with the measured quantities;
the lines are repeated in the terminal summary.
"""
import io

import numpy as np
import pytest

from crossflow import analytic as A
from crossflow.cli import run
from crossflow.eds import (
    burned_in,
    divergence_probe,
    lane_delay_distribution,
    sup_distance,
    vehicle_delay_distribution,
    zebra_fraction,
)
from crossflow.micro import lane_delay_path, schedule
from crossflow.maps import advance
from crossflow.model import IntersectionParams

from .helpers import random_params, random_sequence

RESULTS = []
FIG6 = IntersectionParams(0.3, 0.5, 2.0, 0.0)
JOBS = 4


def verdict(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title} | {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _map_path(veh, p, policy):
    t1 = np.array([p.floor])
    t2 = np.array([p.floor])
    prev = veh[0][0]
    out = []
    for t0, s in veh:
        t1, t2, _, _ = advance(t1, t2, [t0 - prev], [s], policy, p)
        prev = t0
        out.append((t1[0], t2[0]))
    return np.array(out)


def test_criterion_01_map_matches_equilibrium_oracle():
    rng = np.random.default_rng(2024)
    worst = {"fifo": 0.0, "fo": 0.0}
    bad = {"fifo": 0, "fo": 0}
    for _ in range(1000):
        p = random_params(rng)
        veh = random_sequence(rng, p, 50)
        for policy in worst:
            err = np.abs(_map_path(veh, p, policy) - lane_delay_path(schedule(veh, p, policy), veh, p)).max()
            worst[policy] = max(worst[policy], err)
            bad[policy] += err > 1e-9
    # context only: FO without a same-lane gap
    fo_flat = 0.0
    for _ in range(200):
        p = random_params(rng, ds_zero=True)
        veh = random_sequence(rng, p, 50)
        err = np.abs(_map_path(veh, p, "fo") - lane_delay_path(schedule(veh, p, "fo"), veh, p)).max()
        fo_flat = max(fo_flat, err)
    ok = max(worst.values()) <= 1e-9
    verdict(1, "lane-delay maps equal oracle", ok,
            f"max err FIFO {worst['fifo']:.3g}, FO {worst['fo']:.3g}; "
            f"sequences over 1e-9: FIFO {bad['fifo']}/1000, FO {bad['fo']}/1000; "
            f"FO with delta_s = 0: {fo_flat:.3g}")


@pytest.fixture(scope="module")
def fo_fig6_run():
    ens = burned_in("fo", FIG6, 100_000, 1000, seed=11, n_jobs=JOBS)
    sample = vehicle_delay_distribution(ens, "fo", FIG6, 500, thin=25, n_jobs=JOBS)
    return ens, sample


def test_criterion_02_fo_exactness(fo_fig6_run):
    ens, sample = fo_fig6_run
    vehicle = sup_distance(sample.distribution, A.fo_vehicle_delay(FIG6).distribution)
    lanes = lane_delay_distribution(ens, FIG6)
    ref = A.fo_lane_distribution(FIG6)
    lane_d = max(sup_distance(lanes.lane(k), ref[k - 1]) for k in (1, 2))
    k = A.fo_constants(FIG6)
    atom_d = max(
        max(abs(lanes.lane(i + 1).atoms[0.0] - k.ghat0[i]), abs(lanes.lane(i + 1).atoms[2.0] - k.ghat_dd[i]))
        for i in (0, 1)
    )
    ok = vehicle <= 0.02 and lane_d <= 0.02 and atom_d <= 0.01
    verdict(2, "FO closed form vs simulation at (0.3, 0.5, 2, 0)", ok,
            f"vehicle sup {vehicle:.4f} (<=0.02), lane sup {lane_d:.4f} (<=0.02), "
            f"atom diff {atom_d:.4f} (<=0.01)")


def test_criterion_03_point_values():
    p = IntersectionParams.from_density(1.0, 0.5, 2.0)
    fo = A.fo_vehicle_delay(p)
    fifo = A.fifo_vehicle_delay(p, "approx1")
    vals = (fo.distribution.cdf(0.0), fo.expected, fifo.distribution.cdf(0.0), fifo.expected)
    ok = (abs(vals[0] - 0.339548) <= 1e-4 and abs(vals[1] - 0.719980) <= 1e-3
          and abs(vals[2] - 0.113735) <= 1e-3 and abs(vals[3] - 8.681) <= 0.01)
    verdict(3, "point values at lambda=1, r=0.5, dd=2", ok,
            "FO P0 {:.6f} E {:.6f}; FIFO P0 {:.6f} E {:.4f}".format(*vals))


def test_criterion_04_mass_identities():
    worst_m, worst_fo, min_atom, stable = 0.0, 0.0, np.inf, 0
    for lam in (0.25, 0.5, 0.75, 1.0):
        for r in (0.25, 0.5, 0.75, 1.0):
            for dd in (0.5, 1.0, 2.0, 3.0):
                p = IntersectionParams.from_density(lam, r, dd)
                lanes = [A.fo_lane_distribution(p)]
                if A.fifo_convergence_margin(p) > 0:
                    lanes.append(A.fifo_lane_distribution(p))
                    stable += 1
                for G in lanes:
                    for i in (0, 1):
                        worst_m = max(worst_m, abs(G[i].cdf(np.inf) - p.rate(i + 1) / p.lambda_total))
                        min_atom = min(min_atom, *(m for _, m in G[i].atoms))
                fo = A.fo_vehicle_delay(p).distribution
                worst_fo = max(worst_fo, abs(fo.cdf(dd) - 1.0))
                min_atom = min(min_atom, *(m for _, m in fo.atoms))
    ok = worst_m <= 1e-9 and worst_fo <= 1e-9 and min_atom >= 0
    verdict(4, "mass identities on 4x4x4 grid", ok,
            f"max |G_i(inf) - l_i/l| {worst_m:.2g}, max |FO P(dd) - 1| {worst_fo:.2g}, "
            f"min atom {min_atom:.3g}; FIFO stable at {stable}/64 points")


def test_criterion_05_characteristic_root():
    rng = np.random.default_rng(5)
    worst, neg, n = 0.0, True, 0
    while n < 50:
        p = IntersectionParams(*rng.uniform(0.05, 1.0, 2), rng.uniform(0.5, 3.0))
        if A.fifo_convergence_margin(p) <= 0:
            continue
        root = A.solve_characteristic_root(p)
        neg &= root.a < 0
        worst = max(worst, abs(A.characteristic_function(root.a, p)))
        n += 1
    a = A.solve_characteristic_root(FIG6).a
    ok = neg and worst <= 1e-12 and -0.28 < a < -0.25
    verdict(5, "characteristic root", ok, f"all negative {neg}, max |h(a)| {worst:.2g}, a(0.3,0.5,2) {a:.6f}")


def test_criterion_06_approximation_ordering():
    ens = burned_in("fifo", FIG6, 100_000, 1000, seed=12, n_jobs=JOBS)
    s = vehicle_delay_distribution(ens, "fifo", FIG6, 500, thin=25, n_jobs=JOBS)
    a1 = A.fifo_vehicle_delay(FIG6, "approx1")
    a2 = A.fifo_vehicle_delay(FIG6, "approx2")
    d1 = sup_distance(s.distribution, a1.distribution)
    d2 = sup_distance(s.distribution, a2.distribution)
    bound = s.mean + 2 * s.stderr
    ok = d1 <= d2 and a1.expected <= bound and a2.expected <= bound
    verdict(6, "Approx1 closer than Approx2, both underestimate", ok,
            f"sup Approx1 {d1:.4f} <= Approx2 {d2:.4f}: {d1 <= d2}; "
            f"E Approx1 {a1.expected:.4f}, Approx2 {a2.expected:.4f}, "
            f"simulation {s.mean:.4f} + 2 SE = {bound:.4f}")


def test_criterion_07_stability_boundary():
    low = divergence_probe("fifo", IntersectionParams.from_density(1.0, 0.5, 2.0), seed=3, n_jobs=JOBS)
    high = divergence_probe("fifo", IntersectionParams.from_density(1.2, 0.5, 2.0), seed=3, n_jobs=JOBS)
    ok = low.converged and not high.converged
    verdict(7, "FIFO stability boundary at r=0.5, dd=2", ok,
            f"lambda=1.0 {low.verdict} (p={low.p_value:.3g}); "
            f"lambda=1.2 {high.verdict} (p={high.p_value:.3g})")


def test_criterion_08_zebra_support():
    p = IntersectionParams(0.1, 0.5, 2.0, 1.0)
    fifo = zebra_fraction(burned_in("fifo", p, 10_000, 2000, seed=8).joint, p)
    fo = zebra_fraction(burned_in("fo", p, 10_000, 2000, seed=8).joint, p)
    ok = fifo >= 0.99 and 1 - fo > 0.10
    verdict(8, "zebra support at (0.1, 0.5, 2, 1)", ok,
            f"FIFO on-stripe {fifo:.4f} (>=0.99); FO off-stripe {1 - fo:.4f} (>0.10)")


def test_criterion_09_trends():
    grid = np.arange(0.0, 4.0 + 1e-9, 0.25)
    fo, fifo = [], []
    support_ok = True
    for dd in grid:
        p = IntersectionParams.from_density(1.0, 0.5, float(dd))
        res = A.fo_vehicle_delay(p)
        fo.append(res.expected)
        support_ok &= res.distribution.support_max <= dd + 1e-12 and abs(res.distribution.cdf(dd) - 1) <= 1e-9
        fifo.append(A.fifo_vehicle_delay(p).expected if A.fifo_convergence_margin(p) > 0 else np.nan)
    fo, fifo = np.array(fo), np.array(fifo)
    stable = ~np.isnan(fifo)
    mono = bool(np.all(np.diff(fo) >= 0) and np.all(np.diff(fifo[stable]) >= 0))
    below = bool(np.all(fo[stable] <= fifo[stable]))
    ok = mono and below and support_ok
    verdict(9, "trends over dd = 0:0.25:4", ok,
            f"nondecreasing {mono}, FO <= FIFO on {stable.sum()} stable points {below}, "
            f"FO support in [0, dd] {support_ok}")


def test_criterion_10_determinism(tmp_path):
    argv = ["simulate", "--policy", "fifo", "--lambda1", "0.3", "--lambda2", "0.5", "--delta-d", "2",
            "--particles", "5000", "--steps", "100", "--burn-in", "200", "--seed", "9"]
    dumps = []
    for name, jobs in (("a", 1), ("b", 1), ("c", 4)):
        out = tmp_path / name
        assert run(argv + ["--jobs", str(jobs), "--out", str(out)], stdout=io.StringIO()) == 0
        dumps.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    ok = dumps[0] == dumps[1] == dumps[2]
    verdict(10, "simulate is byte-identical across runs and worker counts", ok,
            f"files {sorted(dumps[0])}, identical {ok}")
