"""Viscosity sweeps: Euler vs Navier-Stokes differences, rate fits and budget checks."""

from __future__ import annotations

import logging
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .config import ExperimentConfig
from .exact import exact_solution_library
from .gevrey import (
    AprioriConstants,
    ConstantRadius,
    GevreyParams,
    RadiusSchedule,
    apriori_growth_bound,
    gevrey_norm,
    l2_norm,
    measure_constants,
    sobolev_norm,
)
from .lattice import SpectralVectorField, random_divfree_field
from .solver import SolverConfig, TrajectoryRecord, integrate, recover_pressure

log = logging.getLogger(__name__)


class SweepError(RuntimeError):
    """A constituent run stopped on the blowup guard or overflowed."""


class RateFit(NamedTuple):
    slope: float
    intercept: float
    residual: float
    n_points: int


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    data: dict = field(default_factory=dict)


@dataclass(eq=False)
class SweepResult:
    config: ExperimentConfig
    rows: list
    velocity_fit: RateFit | None
    pressure_fit: RateFit | None
    schedule: object
    constants: AprioriConstants
    initial: SpectralVectorField
    euler: TrajectoryRecord
    trajectories: dict
    wall_time: float = 0.0

    @property
    def nus(self) -> np.ndarray:
        return np.array([row["nu"] for row in self.rows])

    def column(self, key: str) -> np.ndarray:
        return np.array([row[key] for row in self.rows])


def initial_data(cfg: ExperimentConfig) -> SpectralVectorField:
    init = cfg.initial
    if "exact" in init:
        return exact_solution_library(init["exact"], cfg.lattice).initial
    if init.get("generator", "random_gevrey") != "random_gevrey":
        raise ValueError(f"unknown generator {init['generator']!r}")
    decay = tuple(init.get("decay", (2 * cfg.tau0, cfg.s, cfg.r + 1)))
    return random_divfree_field(cfg.lattice, decay, seed=init.get("seed", 0),
                                amplitude=init.get("amplitude", 1.0))


def _solver_config(cfg: ExperimentConfig, nu: float, schedule) -> SolverConfig:
    return SolverConfig(nu=nu, lattice=cfg.lattice, dt=cfg.dt, T=cfg.T, params=cfg.params,
                        schedule=schedule, checkpoint_stride=cfg.checkpoint_stride, M=cfg.M)


def _run(args):
    config, a = args
    return integrate(config, a)


def _require_completed(traj: TrajectoryRecord, nu: float) -> None:
    if traj.status != "completed":
        raise SweepError(f"run at nu={nu:g} terminated with status {traj.status!r} "
                         f"at t={traj.times[-1]:.6g}")


def build_schedule(cfg: ExperimentConfig, a: SpectralVectorField, workers: int = 1):
    """Radius schedule and the constants it was built from.

    The pilot source integrates Euler once with the radius frozen at tau0;
    because tau(t) <= tau0, the Gevrey maximum measured there bounds the one
    along the shrinking radius.
    """
    src = cfg.schedule["source"]
    C = float(cfg.schedule.get("C", 1.0))
    if src == "frozen":
        consts = AprioriConstants(sobolev_norm(a, cfg.r), gevrey_norm(a, cfg.params), 0.0)
        return ConstantRadius(cfg.tau0), consts, None
    if src == "configured":
        sched = RadiusSchedule(cfg.tau0, float(cfg.schedule["C1"]), float(cfg.schedule["C2"]))
        consts = AprioriConstants(sched.C1 / C, max(sched.C2 / C - sched.C1 / C, 0.0), 0.0)
        return sched, consts, None
    pilot = integrate(_solver_config(cfg, 0.0, ConstantRadius(cfg.tau0)), a)
    _require_completed(pilot, 0.0)
    consts = measure_constants(pilot)
    return RadiusSchedule.from_constants(cfg.tau0, consts, C), consts, pilot


def run_sweep(cfg: ExperimentConfig, workers: int = 1, keep_trajectories: bool = True) -> SweepResult:
    """Euler once, Navier-Stokes per viscosity, differences evaluated at T.

    All runs share one time grid and integrator.  Rows come out ordered by
    decreasing viscosity regardless of ``workers``.
    """
    wall0 = time.perf_counter()
    a = initial_data(cfg)
    schedule, consts, _ = build_schedule(cfg, a, workers)
    tau_T = float(schedule(cfg.T))
    p = cfg.params.with_tau(tau_T)
    p_rm1 = GevreyParams(cfg.s, cfg.r - 1, tau_T)

    jobs = [(_solver_config(cfg, nu, schedule), a) for nu in (0.0,) + cfg.nus]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            trajs = list(ex.map(_run, jobs))
    else:
        trajs = [_run(j) for j in jobs]
    for (job, _), tr in zip(jobs, trajs):
        _require_completed(tr, job.nu)

    euler, ns = trajs[0], trajs[1:]
    u_T = euler.final
    p_T = recover_pressure(u_T, cfg.M)
    G_T = max(float(np.max(tr.gevrey_r)) for tr in trajs)

    rows = []
    for nu, tr in zip(cfg.nus, ns):
        w = tr.final - u_T
        p_tilde = recover_pressure(tr.final, cfg.M) - p_T
        w_g = gevrey_norm(w, p_rm1)
        p_g = gevrey_norm(p_tilde, p)
        rows.append({
            "nu": nu,
            "t_final": float(tr.times[-1]),
            "w_gevrey_rm1": w_g,
            "p_gevrey_r": p_g,
            "w_l2": l2_norm(w),
            "M_T": float(tr.dissipation_cum[-1]),
            "sup_gevrey_r": float(np.max(tr.gevrey_r)),
            "pressure_constant": p_g / (G_T * w_g) if w_g > 0 else 0.0,
        })

    vfit = pfit = None
    if len(rows) >= 3:
        vfit = fit_rate(rows, "w_gevrey_rm1")
        pfit = fit_rate(rows, "p_gevrey_r")
    return SweepResult(
        config=cfg, rows=rows, velocity_fit=vfit, pressure_fit=pfit, schedule=schedule,
        constants=consts, initial=a, euler=euler,
        trajectories=dict(zip(cfg.nus, ns)) if keep_trajectories else {},
        wall_time=time.perf_counter() - wall0,
    )


def fit_rate(rows, key: str = "w_gevrey_rm1") -> RateFit:
    """Least-squares slope of log(row[key]) against log(row['nu']).

    Rows whose value is zero are dropped with a warning (the Euler limit of
    an exact solution gives such rows).
    """
    nus = np.array([r["nu"] for r in rows], dtype=float)
    vals = np.array([r[key] for r in rows], dtype=float)
    keep = vals > 0
    if not np.all(keep):
        warnings.warn(f"fit_rate: dropping {int((~keep).sum())} row(s) with zero {key}")
    if keep.sum() < 3:
        raise ValueError("fit_rate needs at least 3 rows with positive norms")
    x, y = np.log(nus[keep]), np.log(vals[keep])
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    return RateFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))), int(keep.sum()))


def check_dissipation_budget(result: SweepResult, factor: float = 2.0) -> Verdict:
    """M_T(nu) must stay within ``factor`` across the viscosity list."""
    m = {row["nu"]: row["M_T"] for row in result.rows if row["nu"] > 0 and row["M_T"] > 0}
    if not m:
        return Verdict("dissipation_budget", False, {"reason": "no positive dissipation rows"})
    vals = np.array(list(m.values()))
    ratio = float(vals.max() / vals.min())
    return Verdict("dissipation_budget", ratio < factor,
                   {"M_T": m, "max_over_min": ratio, "factor": factor,
                    "sup_M_T": float(vals.max())})


def default_envelope(result: SweepResult, C: float = 1.0):
    """A(t) majorant built from the initial data and the largest measured H^r norm."""
    a = result.initial
    cfg = result.config
    runs = [result.euler] + list(result.trajectories.values())
    consts = AprioriConstants(max(float(np.max(tr.h_r)) for tr in runs),
                              result.constants.G_T, 0.0)
    a_norms = (gevrey_norm(a, cfg.params), sobolev_norm(a, cfg.r))
    return lambda t: apriori_growth_bound(t, a_norms, consts, C)


def check_uniform_gevrey_bound(result: SweepResult, envelope=None, factor: float = 1.5) -> Verdict:
    """Gevrey norm along tau(t) stays under the envelope and varies < ``factor`` across nu."""
    if not result.trajectories:
        raise ValueError("sweep was run without keeping trajectories")
    envelope = envelope or default_envelope(result)
    sups, worst = {}, 0.0
    for nu, tr in result.trajectories.items():
        sups[nu] = float(np.max(tr.gevrey_r))
        worst = max(worst, float(np.max(tr.gevrey_r / envelope(tr.times))))
    vals = np.array(list(sups.values()))
    variation = float(vals.max() / vals.min())
    under = worst <= 1.0
    return Verdict("uniform_gevrey_bound", bool(under and variation < factor),
                   {"sup_by_nu": sups, "variation": variation, "factor": factor,
                    "max_ratio_to_envelope": worst, "under_envelope": under})


def check_monotone(result: SweepResult, key: str = "w_gevrey_rm1") -> Verdict:
    vals = result.column(key)
    ok = bool(np.all(np.diff(vals) < 0))
    return Verdict(f"monotone_{key}", ok, {key: vals.tolist()})


def check_slope(fit: RateFit | None, name: str, minimum: float = 0.45) -> Verdict:
    if fit is None:
        return Verdict(name, False, {"reason": "fewer than 3 rows"})
    return Verdict(name, fit.slope >= minimum, {"slope": fit.slope, "minimum": minimum,
                                                "residual": fit.residual})


def all_verdicts(result: SweepResult) -> list[Verdict]:
    out = [check_monotone(result), check_dissipation_budget(result),
           check_uniform_gevrey_bound(result)]
    if len(result.rows) >= 3:
        out += [check_slope(result.velocity_fit, "velocity_slope"),
                check_slope(result.pressure_fit, "pressure_slope")]
    return out


def trajectory_csv_name(nu: float) -> str:
    from .io import nu_tag
    return f"norms_{nu_tag(nu)}.csv"


def sqrt_nu_reference(nus) -> np.ndarray:
    """The C sqrt(nu) upper-bound shape, for plotting against measured norms."""
    return np.sqrt(np.asarray(nus, dtype=float))


def closed_form_w_l2(cfg: ExperimentConfig) -> dict:
    """|w(T)|_L2 = (1 - exp(-lambda nu T)) |u0|_L2 for an exact-solution config."""
    ex = exact_solution_library(cfg.initial["exact"], cfg.lattice)
    u0 = l2_norm(ex.initial)
    return {nu: (1 - math.exp(-ex.eigenvalue * nu * cfg.T)) * u0 for nu in cfg.nus}
