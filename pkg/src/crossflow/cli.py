"""Command-line front end: analyze | simulate | sweep | compare.

Scalar results go to stdout (``key,value`` rows or one JSON document).
With ``--out DIR`` the tables are also written there: ``cdf.csv``,
``lanes.csv``, ``joint.csv``, ``sweep.csv`` and ``compare.csv`` in CSV
mode, ``report.json`` in JSON mode.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analytic
from .eds import (
    DEFAULT_BURN_IN,
    EmpiricalDistribution,
    burned_in,
    dkw_epsilon,
    lane_delay_distribution,
    sup_distance,
    vehicle_delay_distribution,
    zebra_fraction,
)
from .estimators import analytic_point
from .exceptions import CrossflowError, NoNegativeRoot, Unstable, UnsupportedDeltaS
from .model import IntersectionParams, Policy

SWEEP_COLUMNS = (
    "policy", "lambda1", "lambda2", "delta_d", "delta_s",
    "margin_fifo", "margin_fo", "p0", "expected_delay", "status",
)
AXES = ("lambda", "ratio", "lambda1", "lambda2", "delta_d", "delta_s")
MAX_KEPT_SAMPLES = 2_000_000

DEFAULTS = {
    "policy": "fo",
    "delta_d": 2.0,
    "delta_s": 0.0,
    "particles": 10000,
    "steps": 500,
    "burn_in": DEFAULT_BURN_IN,
    "format": "csv",
    "jobs": 1,
    "variant": "approx1",
    "solver": "closed_form",
}
CONFIG_KEYS = {
    "policy", "lambda1", "lambda2", "lambda", "ratio", "delta_d", "delta_s", "particles",
    "steps", "burn_in", "seed", "grid", "out", "format", "jobs", "variant", "solver", "vary",
}


class UsageError(CrossflowError, ValueError):
    pass


# ---------------------------------------------------------------------------
# formatting


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".9g")


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return float(format(v, ".9g")) if math.isfinite(v) else None
    return value


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(report) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# configuration


def parse_grid(spec: str) -> np.ndarray:
    """``start:step:stop`` with ``stop`` included when it lies on the grid."""
    try:
        start, step, stop = (float(v) for v in str(spec).split(":"))
    except ValueError:
        raise UsageError(f"grid must look like start:step:stop, got {spec!r}") from None
    if not step > 0:
        raise UsageError(f"grid step must be positive, got {step}")
    if stop < start:
        raise UsageError(f"empty grid {spec!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(n), 12)


def _load_config(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a JSON object")
    out = {}
    for key, value in raw.items():
        norm = key.lstrip("-").replace("-", "_")
        if norm not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        out[norm] = value
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, the config file, the command line and ``CROSSFLOW_SEED``."""
    cli = {k: v for k, v in vars(args).items() if v is not None and k not in ("command", "config")}
    if "lam" in cli:
        cli["lambda"] = cli.pop("lam")
    cfg = _load_config(args.config) if args.config else {}
    # a rate pair given on the command line replaces whichever pair the file used
    if {"lambda1", "lambda2"} & cli.keys() or {"lambda", "ratio"} & cli.keys():
        for key in ("lambda1", "lambda2", "lambda", "ratio"):
            cfg.pop(key, None)
    conf = {**DEFAULTS, **cfg, **cli}
    if "seed" not in conf:
        env = os.environ.get("CROSSFLOW_SEED")
        try:
            conf["seed"] = int(env) if env not in (None, "") else 0
        except ValueError:
            raise UsageError(f"CROSSFLOW_SEED must be an integer, got {env!r}") from None
    conf["seed"] = int(conf["seed"])
    for key in ("particles", "steps", "burn_in", "jobs"):
        conf[key] = int(conf[key])
    if conf["particles"] < 2 or conf["steps"] < 1 or conf["burn_in"] < 0 or conf["jobs"] < 1:
        raise UsageError("need particles >= 2, steps >= 1, burn-in >= 0 and jobs >= 1")
    if conf["format"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {conf['format']!r}")
    return conf


def base_rates(conf) -> dict:
    pair = [k in conf for k in ("lambda1", "lambda2")]
    dens = [k in conf for k in ("lambda", "ratio")]
    if any(pair) and any(dens):
        raise UsageError("give either --lambda1/--lambda2 or --lambda/--ratio, not both")
    if all(pair):
        l1, l2 = float(conf["lambda1"]), float(conf["lambda2"])
        return {"lambda1": l1, "lambda2": l2}
    if all(dens):
        return {"lambda": float(conf["lambda"]), "ratio": float(conf["ratio"])}
    raise UsageError("rates missing: give --lambda1 and --lambda2, or --lambda and --ratio")


def make_params(rates: dict, delta_d, delta_s) -> IntersectionParams:
    if "lambda1" in rates:
        return IntersectionParams(rates["lambda1"], rates["lambda2"], delta_d, delta_s)
    return IntersectionParams.from_density(rates["lambda"], rates["ratio"], delta_d, delta_s)


def params_from(conf) -> IntersectionParams:
    return make_params(base_rates(conf), float(conf["delta_d"]), float(conf["delta_s"]))


def cdf_grid(conf, params: IntersectionParams) -> np.ndarray:
    if conf.get("grid"):
        return parse_grid(conf["grid"])
    stop = 4 * params.delta_d if params.delta_d > 0 else 10.0
    return parse_grid(f"0:{stop / 80!r}:{stop!r}")


# ---------------------------------------------------------------------------
# commands


def _analytic(params, policy, conf, variant=None):
    if policy is Policy.FIFO:
        try:
            return analytic.fifo_vehicle_delay(params, variant or conf["variant"])
        except NoNegativeRoot:
            raise Unstable(
                f"FIFO does not converge: margin {analytic.fifo_convergence_margin(params):.6g} "
                f"<= 0 (critical total density for this ratio and delta_d is "
                f"{analytic.fifo_critical_density(params.ratio, params.delta_d):.6g})"
            ) from None
    return analytic.fo_vehicle_delay(params, variant or conf["solver"])


def _params_report(params):
    return {**params.as_dict(), "lambda": params.lambda_total, "ratio": params.ratio}


def cmd_analyze(conf) -> dict:
    params = params_from(conf)
    policy = Policy.coerce(conf["policy"])
    report = {
        "command": "analyze",
        "policy": policy.value,
        "params": _params_report(params),
        "margin_fifo": analytic.fifo_convergence_margin(params),
        "margin_fo": analytic.fo_convergence_margin(params),
    }
    if params.delta_s != 0:
        raise UnsupportedDeltaS(
            f"closed-form distributions need delta_s = 0 (got {params.delta_s}); "
            "use 'simulate' instead"
        )
    res = _analytic(params, policy, conf)
    if policy is Policy.FIFO:
        root = analytic.solve_characteristic_root(params)
        g = analytic.fifo_ghat0(params, conf["variant"], root)
        report.update(variant=conf["variant"], root=root.a, root_residual=root.residual,
                      ghat1_0=g[0], ghat2_0=g[1])
    else:
        k = analytic.fo_constants(params, conf["solver"])
        report.update(solver=conf["solver"], c1=k.c[0], c2=k.c[1],
                      ghat1_0=k.ghat0[0], ghat2_0=k.ghat0[1],
                      ghat1_dd=k.ghat_dd[0], ghat2_dd=k.ghat_dd[1], M1=k.M[0], M2=k.M[1])
    t = cdf_grid(conf, params)
    report.update(p0=float(res.distribution.cdf(0.0)), expected_delay=res.expected)
    report["tables"] = {
        "cdf.csv": (("t", "P_analytic", "P_eds"),
                    [(ti, pi, None) for ti, pi in zip(t, res.distribution.cdf(t))]),
    }
    return report


def _thin(conf) -> int:
    return max(1, math.ceil(conf["particles"] * conf["steps"] / MAX_KEPT_SAMPLES))


def _simulate(params, policy, conf):
    ens = burned_in(policy, params, conf["particles"], conf["burn_in"], conf["seed"], conf["jobs"])
    sample = vehicle_delay_distribution(ens, policy, params, conf["steps"], _thin(conf), conf["jobs"])
    lanes = lane_delay_distribution(sample.ensemble, params)
    return sample, lanes


def _lane_analytic(params, policy, conf):
    if params.delta_s != 0:
        return None
    try:
        if policy is Policy.FIFO:
            return analytic.fifo_lane_distribution(params, conf["variant"])
        return analytic.fo_lane_distribution(params, conf["solver"])
    except NoNegativeRoot:
        return None


def cmd_simulate(conf) -> dict:
    params = params_from(conf)
    policy = Policy.coerce(conf["policy"])
    sample, lanes = _simulate(params, policy, conf)
    emp = sample.distribution
    probe = sample.probe
    report = {
        "command": "simulate",
        "policy": policy.value,
        "params": _params_report(params),
        "particles": conf["particles"],
        "burn_in": conf["burn_in"],
        "steps": conf["steps"],
        "seed": conf["seed"],
        "expected_delay": sample.mean,
        "stderr": sample.stderr,
        "p0": float(emp.cdf(0.0)),
        "atom_dd": emp.atoms[params.delta_d] if params.delta_d > 0 else None,
        "lane1_share": lanes.lane(1).total_mass,
        "stripe_share": zebra_fraction(lanes.joint, params),
        "verdict": probe.verdict if probe else "undetermined",
        "slope": probe.slope if probe else None,
    }
    t = cdf_grid(conf, params)
    try:
        reference = None if params.delta_s != 0 else _analytic(params, policy, conf).distribution
    except Unstable:
        reference = None
    p_an = reference.cdf(t) if reference is not None else [None] * t.size
    lane_ref = _lane_analytic(params, policy, conf)
    lane_rows = []
    for i, ti in enumerate(t):
        row = [ti]
        for k in (1, 2):
            row.append(None if lane_ref is None else float(lane_ref[k - 1].cdf(ti)))
            row.append(float(lanes.lane(k).cdf(ti)))
        lane_rows.append(row)
    joint = lanes.joint
    report["tables"] = {
        "cdf.csv": (("t", "P_analytic", "P_eds"),
                    [(ti, pa, pe) for ti, pa, pe in zip(t, p_an, emp.cdf(t))]),
        "lanes.csv": (("t", "G1_analytic", "G1_eds", "G2_analytic", "G2_eds"), lane_rows),
        "joint.csv": (("particle", "t1", "t2"),
                      [(i, joint[i, 0], joint[i, 1]) for i in range(joint.shape[0])]),
    }
    return report


def _sweep_axes(conf):
    specs = conf.get("vary") or ["delta_d"]
    if isinstance(specs, str):
        specs = [specs]
    axes = []
    for spec in specs:
        name, _, rng = str(spec).partition("=")
        name = name.strip().replace("-", "_")
        if name not in AXES:
            raise UsageError(f"cannot sweep {name!r}; choose from {', '.join(AXES)}")
        rng = rng or conf.get("grid")
        if not rng:
            raise UsageError(f"no range for sweep axis {name!r}: use --vary {name}=start:step:stop")
        axes.append((name, parse_grid(rng)))
    if len({name for name, _ in axes}) != len(axes):
        raise UsageError("each sweep axis may appear once")
    return axes


def _rates_with(rates: dict, name: str, value: float) -> dict:
    if name in ("lambda", "ratio"):
        if "lambda1" in rates:
            rates = {"lambda": rates["lambda1"] + rates["lambda2"],
                     "ratio": rates["lambda1"] / rates["lambda2"]}
    elif "lambda" in rates:
        lam, r = rates["lambda"], rates["ratio"]
        l2 = lam / (1 + r)
        rates = {"lambda1": lam - l2, "lambda2": l2}
    return {**rates, name: value}


def cmd_sweep(conf) -> dict:
    axes = _sweep_axes(conf)
    rates0 = base_rates(conf)
    policies = [Policy.coerce(conf["policy"])] if conf.get("policy_given") else [Policy.FIFO, Policy.FO]
    rows = []
    for values in itertools.product(*(grid for _, grid in axes)):
        rates = dict(rates0)
        gaps = {"delta_d": float(conf["delta_d"]), "delta_s": float(conf["delta_s"])}
        for (name, _), v in zip(axes, values):
            if name in gaps:
                gaps[name] = float(v)
            else:
                rates = _rates_with(rates, name, float(v))
        try:
            params = make_params(rates, gaps["delta_d"], gaps["delta_s"])
        except CrossflowError as exc:
            for policy in policies:
                rows.append((policy.value, None, None, gaps["delta_d"], gaps["delta_s"],
                             None, None, None, None, f"invalid: {exc}"))
            continue
        for policy in policies:
            m_fifo, m_fo, p0, ed, status = analytic_point(params, policy, conf["variant"], conf["solver"])
            rows.append((policy.value, params.lambda1, params.lambda2, params.delta_d,
                         params.delta_s, m_fifo, m_fo, p0, ed, status))
    report = {
        "command": "sweep",
        "axes": [name for name, _ in axes],
        "rows": len(rows),
        "unstable_rows": sum(r[-1] == "unstable" for r in rows),
        "tables": {"sweep.csv": (SWEEP_COLUMNS, rows)},
    }
    return report


def cmd_compare(conf) -> dict:
    params = params_from(conf)
    policy = Policy.coerce(conf["policy"])
    if params.delta_s != 0:
        raise UnsupportedDeltaS("compare needs delta_s = 0")
    variants = ("approx1", "approx2") if policy is Policy.FIFO else ("closed_form", "balance")
    results = {v: _analytic(params, policy, conf, v) for v in variants}
    sample, lanes = _simulate(params, policy, conf)
    emp = sample.distribution
    band = dkw_epsilon(conf["particles"])
    rows = []
    for v in variants:
        dist, expected = results[v]
        row = {
            "variant": v,
            "sup_distance": sup_distance(emp, dist),
            "atom0_analytic": dist.atom_mass(0.0),
            "atom0_eds": emp.atoms[0.0],
            "expected_analytic": expected,
            "expected_eds": sample.mean,
            "expected_diff": expected - sample.mean,
            "eds_stderr": sample.stderr,
            "dkw_band": band,
        }
        if policy is Policy.FO:
            ref = analytic.fo_lane_distribution(params, v)
            row["lane_sup_distance"] = max(sup_distance(lanes.lane(k), ref[k - 1]) for k in (1, 2))
            row["lane_atom_max_diff"] = max(
                abs(lanes.lane(k).atoms[loc] - ref[k - 1].atom_mass(loc))
                for k in (1, 2) for loc in (0.0, params.delta_d)
            )
        else:
            ref = analytic.fifo_lane_distribution(params, v)
            row["lane_sup_distance"] = max(sup_distance(lanes.lane(k), ref[k - 1]) for k in (1, 2))
            row["lane_atom_max_diff"] = max(
                abs(lanes.lane(k).atoms[0.0] - ref[k - 1].atom_mass(0.0)) for k in (1, 2)
            )
        rows.append(row)
    t = cdf_grid(conf, params)
    header = tuple(rows[0])
    report = {
        "command": "compare",
        "policy": policy.value,
        "params": _params_report(params),
        "particles": conf["particles"],
        "seed": conf["seed"],
        "verdict": sample.probe.verdict if sample.probe else "undetermined",
        "comparisons": rows,
        "tables": {
            "compare.csv": (header, [tuple(r.values()) for r in rows]),
            "cdf.csv": (("t", "P_analytic", "P_eds"),
                        list(zip(t, results[variants[0]].distribution.cdf(t), emp.cdf(t)))),
        },
    }
    for v in variants[1:]:
        report["tables"][f"cdf_{v}.csv"] = (
            ("t", "P_analytic", "P_eds"),
            list(zip(t, results[v].distribution.cdf(t), emp.cdf(t))),
        )
    return report


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


# ---------------------------------------------------------------------------
# output


def _scalars(report) -> list[tuple[str, object]]:
    out = []
    for key, value in report.items():
        if key == "tables":
            continue
        if isinstance(value, dict):
            out.extend((f"{key}.{k}", v) for k, v in value.items())
        elif isinstance(value, list):
            for i, item in enumerate(value):
                if isinstance(item, dict):
                    out.extend((f"{key}[{i}].{k}", v) for k, v in item.items())
                else:
                    out.append((f"{key}[{i}]", item))
        else:
            out.append((key, value))
    return out


def render(report, fmt_name: str) -> dict[str, str]:
    """File name -> text for everything the command produces."""
    if fmt_name == "json":
        doc = {k: v for k, v in report.items() if k != "tables"}
        doc["tables"] = {
            name: [dict(zip(header, row)) for row in rows]
            for name, (header, rows) in report["tables"].items()
        }
        return {"report.json": json_text(doc)}
    files = {name: csv_text(header, rows) for name, (header, rows) in report["tables"].items()}
    files["summary.csv"] = csv_text(("key", "value"), _scalars(report))
    return files


def emit(report, conf, stdout) -> None:
    files = render(report, conf["format"])
    if conf.get("out"):
        out = Path(conf["out"])
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text)
    if conf["format"] == "json":
        stdout.write(files["report.json"])
    elif report["command"] == "sweep" and not conf.get("out"):
        stdout.write(files["sweep.csv"])
    else:
        stdout.write(files["summary.csv"])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--policy", choices=("fifo", "fo"))
    g.add_argument("--lambda1", type=float)
    g.add_argument("--lambda2", type=float)
    g.add_argument("--lambda", dest="lam", type=float, help="total arrival rate (1/s)")
    g.add_argument("--ratio", type=float, help="lambda1 / lambda2")
    g.add_argument("--delta-d", dest="delta_d", type=float, help="conflicting-lane gap (s)")
    g.add_argument("--delta-s", dest="delta_s", type=float, help="same-lane gap (s)")
    g.add_argument("--variant", choices=("approx1", "approx2"), help="FIFO approximation")
    g.add_argument("--solver", choices=("closed_form", "balance"), help="FO constants")
    s = common.add_argument_group("simulation")
    s.add_argument("--particles", type=int)
    s.add_argument("--steps", type=int, help="post-burn-in events")
    s.add_argument("--burn-in", dest="burn_in", type=int)
    s.add_argument("--seed", type=int, help="defaults to $CROSSFLOW_SEED, then 0")
    s.add_argument("--jobs", type=int, help="worker threads; results do not depend on it")
    o = common.add_argument_group("output")
    o.add_argument("--grid", help="start:step:stop")
    o.add_argument("--out", help="directory for output files")
    o.add_argument("--config", help="JSON file with the same keys as the flags")
    o.add_argument("--format", choices=("csv", "json"))

    parser = argparse.ArgumentParser(prog="crossflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="closed-form steady state")
    sub.add_parser("simulate", parents=[common], help="event-driven simulation")
    sw = sub.add_parser("sweep", parents=[common], help="analytic sweep over parameter axes")
    sw.add_argument("--vary", action="append",
                    help=f"axis[=start:step:stop], axis in {{{','.join(AXES)}}}; repeatable")
    sub.add_parser("compare", parents=[common], help="analytic versus simulation")
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        conf = resolve(args)
        conf["policy_given"] = args.policy is not None or "policy" in (
            _load_config(args.config) if args.config else {}
        )
        report = COMMANDS[args.command](conf)
        emit(report, conf, stdout)
    except (CrossflowError, ValueError, OSError) as exc:
        print(f"crossflow {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
