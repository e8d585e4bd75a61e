"""Command-line front end: ``solve``, ``sweep``, ``verify`` and ``report``.

Every command writes ``manifest.json`` (status ``running``) before doing any
numerical work and rewrites it with the final status afterwards.  The exit
status is 0 iff every asserted verdict passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .config import ConfigError, ExperimentConfig, load_config
from .exact import exact_solution_library
from .experiment import (
    SweepError,
    all_verdicts,
    initial_data,
    run_sweep,
    trajectory_csv_name,
)
from .gevrey import ConstantRadius, GevreyParams, l2_norm
from .inequalities import (
    EnsembleSpec,
    certify_cancellation,
    certify_elementary_exp,
    certify_lattice_triangle,
    certify_pressure_bound,
    certify_pressure_difference,
    certify_scalar_gevrey,
    certify_trilinear_bound,
)
from .lattice import TruncatedLattice
from .solver import SolverConfig, integrate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EXACT_DIMS = {"taylor_green_2d": 2, "beltrami_3d": 3}
EXACT_RTOL = 1e-8
SUITES = ("lemma2", "triangle", "exp", "cancellation", "trilinear", "pressure")


def _out_dir(arg: str | None, default: str) -> Path:
    path = Path(arg) if arg else io.output_root() / default
    path.mkdir(parents=True, exist_ok=True)
    return path


def _finish(out: Path, man: dict, status: str, wall0: float, **extra) -> None:
    man.update(status=status, wall_time=time.perf_counter() - wall0, **extra)
    io.write_json(out / "manifest.json", man)


# --- solve

def _cmd_solve(args) -> int:
    wall0 = time.perf_counter()
    params = GevreyParams(args.s, args.r, args.tau)
    exact = None
    if args.exact:
        if args.exact not in EXACT_DIMS:
            print(f"error: unknown exact solution {args.exact!r}", file=sys.stderr)
            return EXIT_USAGE
        lat = TruncatedLattice(EXACT_DIMS[args.exact], args.N)
        exact = exact_solution_library(args.exact, lat)
        a, seed = exact.initial, None
    else:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
        lat, params, seed = cfg.lattice, cfg.params, cfg.seed
        a = initial_data(cfg)
    config = SolverConfig(nu=args.nu, lattice=lat, dt=args.dt, T=args.T, params=params,
                          schedule=ConstantRadius(params.tau),
                          checkpoint_stride=args.checkpoint_stride)
    out = _out_dir(args.out, f"solve_{config.hash()}")
    man = io.manifest(config.to_dict(), seed, "running", exact=args.exact)
    io.write_json(out / "manifest.json", man)

    traj = integrate(config, a)
    traj.write_csv(out / trajectory_csv_name(args.nu))
    io.write_json(out / "checkpoints.json",
                  [{"t": t, "field": io.field_to_dict(f)} for t, f in traj.checkpoints])
    verdicts = {"completed": traj.status == "completed"}
    extra = {}
    if exact is not None and traj.status == "completed":
        t_end = float(traj.times[-1])
        ref = exact.velocity(t_end, args.nu)
        err = l2_norm(traj.final - ref) / l2_norm(ref)
        extra["closed_form_rel_error"] = err
        verdicts["closed_form"] = err <= EXACT_RTOL
    ok = all(verdicts.values())
    _finish(out, man, traj.status, wall0, verdicts=verdicts, **extra)
    print(f"solve: status={traj.status} steps={len(traj.times) - 1} "
          + " ".join(f"{k}={v:.3e}" for k, v in extra.items()))
    for name, passed in verdicts.items():
        print(f"  {name}: {'pass' if passed else 'FAIL'}")
    print(f"  output: {out}")
    return EXIT_OK if ok else EXIT_FAIL


# --- sweep

def _cmd_sweep(args) -> int:
    wall0 = time.perf_counter()
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    out = _out_dir(args.out or cfg.output_dir, "sweep")
    man = io.manifest(cfg.to_dict(), cfg.seed, "running")
    io.write_json(out / "manifest.json", man)
    try:
        res = run_sweep(cfg, workers=args.workers)
    except SweepError as exc:
        _finish(out, man, "failed", wall0, error=str(exc))
        print(f"sweep failed: {exc}", file=sys.stderr)
        return EXIT_FAIL

    res.euler.write_csv(out / trajectory_csv_name(0.0))
    for nu, tr in res.trajectories.items():
        tr.write_csv(out / trajectory_csv_name(nu))
    io.write_sweep_csv(out / "sweep.csv", res.rows)

    verdicts = all_verdicts(res)
    wanted = set(cfg.asserts) if cfg.asserts is not None else {v.name for v in verdicts}
    unknown = wanted - {v.name for v in verdicts}
    asserted = [v for v in verdicts if v.name in wanted]
    ok = not unknown and all(v.passed for v in asserted)
    report = {
        "velocity_fit": res.velocity_fit._asdict() if res.velocity_fit else None,
        "pressure_fit": res.pressure_fit._asdict() if res.pressure_fit else None,
        "verdicts": [{"name": v.name, "passed": v.passed, "asserted": v.name in wanted,
                      "data": _stringify_keys(v.data)} for v in verdicts],
        "unknown_asserts": sorted(unknown),
        "rows": res.rows,
        "schedule": res.schedule.to_dict(),
        "theorem_regime": cfg.params.theorem_regime(cfg.dim),
    }
    io.write_json(out / "report.json", report)
    _finish(out, man, "completed", wall0, constants=res.constants.to_dict(),
            schedule=res.schedule.to_dict(), passed=ok)

    print(_sweep_table(res.rows))
    if res.velocity_fit:
        print(f"velocity slope {res.velocity_fit.slope:.4f}  "
              f"pressure slope {res.pressure_fit.slope:.4f}")
    for v in verdicts:
        tag = "pass" if v.passed else "FAIL"
        print(f"  {v.name}: {tag}{'' if v.name in wanted else ' (not asserted)'}")
    for name in sorted(unknown):
        print(f"  {name}: FAIL (unknown assert)")
    print(f"  output: {out}")
    return EXIT_OK if ok else EXIT_FAIL


def _stringify_keys(d):
    if isinstance(d, dict):
        return {str(k): _stringify_keys(v) for k, v in d.items()}
    return d


def _sweep_table(rows) -> str:
    head = f"{'nu':>12} {'|w|_G(r-1)':>14} {'|p~|_G(r)':>14} {'|w|_L2':>14} {'M_T':>12}"
    lines = [head]
    for r in rows:
        lines.append(f"{r['nu']:12.4e} {r['w_gevrey_rm1']:14.6e} {r['p_gevrey_r']:14.6e} "
                     f"{r['w_l2']:14.6e} {r['M_T']:12.4e}")
    return "\n".join(lines)


# --- verify

def _suite_reports(suite: str, args) -> list:
    seed = args.seed if args.seed is not None else 0
    if suite == "lemma2":
        ss = [args.s] if args.s is not None else [1.0, 1.5, 2.0, 3.0]
        return [certify_scalar_gevrey(s) for s in ss]
    if suite == "triangle":
        return [certify_lattice_triangle(args.N or 10, dim=args.dim or 3)]
    if suite == "exp":
        return [certify_elementary_exp()]
    if suite == "cancellation":
        spec = EnsembleSpec(args.dim or 3, args.N or 6, args.n_samples or 100, seed)
        return [certify_cancellation(spec, GevreyParams(2, 5, 0.2))]
    if suite == "trilinear":
        spec = EnsembleSpec(args.dim or 3, args.N or 6, args.n_samples or 200, seed)
        return [certify_trilinear_bound(spec, GevreyParams(2, 5, 0.2))]
    if suite == "pressure":
        spec = EnsembleSpec(args.dim or 2, args.N or 8, args.n_samples or 200, seed)
        params = GevreyParams(args.s or 2.0, 5, 0.5)
        return [certify_pressure_bound(spec, params), certify_pressure_difference(spec, params)]
    raise ValueError(suite)


def _cmd_verify(args) -> int:
    wall0 = time.perf_counter()
    suites = SUITES if args.suite == "all" else (args.suite,)
    out = _out_dir(args.out, "verify")
    man = io.manifest({k: v for k, v in vars(args).items() if k != "func"},
                      args.seed, "running")
    io.write_json(out / "manifest.json", man)
    ok = True
    for suite in suites:
        reports = _suite_reports(suite, args)
        io.write_json(out / f"report_{suite}.json", [r.to_dict() for r in reports])
        for r in reports:
            ok &= r.passed
            print(f"{r.id:>20}  sup={r.sup_ratio:.6e}  threshold={r.threshold:g}  {r.verdict}")
    _finish(out, man, "completed", wall0, passed=ok)
    print(f"  output: {out}")
    return EXIT_OK if ok else EXIT_FAIL


# --- report

def _cmd_report(args) -> int:
    d = Path(args.dir)
    if not (d / "manifest.json").exists():
        print(f"error: {d} has no manifest.json", file=sys.stderr)
        return EXIT_USAGE
    man = json.loads((d / "manifest.json").read_text())
    print(f"run: {d}  status={man.get('status')}  seed={man.get('seed')}  "
          f"version={man.get('code_version')}  wall={man.get('wall_time') or 0:.1f}s")
    if (d / "sweep.csv").exists():
        header, data = io.read_csv(d / "sweep.csv")
        rows = [dict(zip(header, row)) for row in np.atleast_2d(data)]
        print(_sweep_table(rows))
    if (d / "report.json").exists():
        rep = json.loads((d / "report.json").read_text())
        for key in ("velocity_fit", "pressure_fit"):
            if rep.get(key):
                f = rep[key]
                print(f"{key}: slope={f['slope']:.4f} residual={f['residual']:.3e} "
                      f"points={f['n_points']}")
        for v in rep.get("verdicts", []):
            print(f"  {v['name']}: {'pass' if v['passed'] else 'FAIL'}")
    for path in sorted(d.glob("report_*.json")):
        for r in json.loads(path.read_text()):
            print(f"{r['id']:>20}  sup={r['sup_ratio']:.6e}  {r['verdict']}")
    for path in sorted(d.glob("norms_*.csv")):
        header, data = io.read_csv(path)
        data = np.atleast_2d(data)
        col = {h: data[:, i] for i, h in enumerate(header)}
        print(f"{path.name}: t_end={col['t'][-1]:.4g} l2 {col['l2'][0]:.6e} -> {col['l2'][-1]:.6e} "
              f"max G_r={col['gevrey_r'].max():.6e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gevrey-ns", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="integrate one trajectory")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--exact", choices=sorted(EXACT_DIMS))
    src.add_argument("--config")
    s.add_argument("--nu", type=float, default=0.01)
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--N", type=int, default=4)
    s.add_argument("--s", type=float, default=2.0)
    s.add_argument("--r", type=float, default=5.0)
    s.add_argument("--tau", type=float, default=0.5)
    s.add_argument("--checkpoint-stride", type=int, default=0)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_solve)

    w = sub.add_parser("sweep", help="viscosity sweep against the Euler run")
    w.add_argument("--config", required=True)
    w.add_argument("--seed", type=int)
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--out")
    w.set_defaults(func=_cmd_sweep)

    v = sub.add_parser("verify", help="run inequality certificates")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--s", type=float)
    v.add_argument("--N", type=int)
    v.add_argument("--dim", type=int, choices=(2, 3))
    v.add_argument("--n-samples", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--out")
    v.set_defaults(func=_cmd_verify)

    r = sub.add_parser("report", help="summarise a run directory")
    r.add_argument("--dir", required=True)
    r.set_defaults(func=_cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
