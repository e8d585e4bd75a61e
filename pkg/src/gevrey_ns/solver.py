"""Galerkin-truncated Navier-Stokes / Euler integration and pressure recovery.

The truncated system is

    du/dt + nu A u + chi_N P[(u.grad)u] = 0,

with A = |k|^2 on divergence-free modes.  Time stepping uses the
integrating-factor RK4 scheme: the viscous part is absorbed exactly by
exp(-nu |k|^2 t) and classical RK4 is applied to the transformed
nonlinearity.  With ``nu = 0`` this is plain RK4.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .gevrey import ConstantRadius, GevreyParams, RadiusSchedule, sobolev_weight
from .lattice import (
    FieldOverflowError,
    SpectralScalarField,
    SpectralVectorField,
    TruncatedLattice,
    _leray,
)
from .spectral import _advection_fft, _check_grid

log = logging.getLogger(__name__)

NORM_COLUMNS = ("t", "tau", "l2", "h_r", "gevrey_r", "gevrey_r_plus_1", "dissipation_cum")


@dataclass(frozen=True)
class SolverConfig:
    """One Navier-Stokes (``nu > 0``) or Euler (``nu == 0``) run.

    ``params`` supplies ``s``, ``r`` and the initial radius ``tau0``
    (``params.tau``); ``schedule`` defaults to a radius frozen at ``tau0``.
    ``blowup_guard`` of ``None`` means ten times the initial H^r norm.
    ``checkpoint_stride`` of 0 keeps only the initial and final fields.
    """

    nu: float
    lattice: TruncatedLattice
    dt: float
    T: float
    params: GevreyParams = GevreyParams(2.0, 5.0, 0.5)
    schedule: RadiusSchedule | ConstantRadius | None = None
    integrator: str = "if_rk4"
    blowup_guard: float | None = None
    checkpoint_stride: int = 0
    nonlinear: bool = True
    M: int | None = None

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("viscosity must be nonnegative")
        if not (self.dt > 0 and self.T > 0):
            raise ValueError("dt and T must be positive")
        if self.dt > self.T:
            raise ValueError("dt must not exceed T")
        if self.integrator != "if_rk4":
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.checkpoint_stride < 0:
            raise ValueError("checkpoint stride must be >= 0")
        _check_grid(self.lattice, self.M)

    @property
    def is_euler(self) -> bool:
        return self.nu == 0

    @property
    def radius(self):
        return self.schedule if self.schedule is not None else ConstantRadius(self.params.tau)

    @property
    def n_steps(self) -> int:
        # final time is hit exactly; dt is shrunk slightly if T/dt is not integral
        return int(np.ceil(self.T / self.dt - 1e-9))

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "dim": self.lattice.dim,
            "N": self.lattice.N,
            "dt": self.dt,
            "T": self.T,
            "s": self.params.s,
            "r": self.params.r,
            "tau0": self.params.tau,
            "schedule": self.radius.to_dict(),
            "integrator": self.integrator,
            "blowup_guard": self.blowup_guard,
            "checkpoint_stride": self.checkpoint_stride,
            "nonlinear": self.nonlinear,
            "M": self.M if self.M is not None else self.lattice.padded_size(),
        }

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(eq=False)
class TrajectoryRecord:
    config: SolverConfig
    config_hash: str
    times: np.ndarray
    tau: np.ndarray
    l2: np.ndarray
    h_r: np.ndarray
    gevrey_r: np.ndarray
    gevrey_r_plus_1: np.ndarray
    dissipation_cum: np.ndarray
    checkpoints: list = field(default_factory=list)
    final: SpectralVectorField | None = None
    status: str = "completed"
    wall_time: float = 0.0

    def norm_table(self) -> np.ndarray:
        return np.column_stack([self.times, self.tau, self.l2, self.h_r, self.gevrey_r,
                                self.gevrey_r_plus_1, self.dissipation_cum])

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(NORM_COLUMNS)
            for row in self.norm_table():
                w.writerow([f"{x:.17g}" for x in row])


class _NormRecorder:
    """Per-step norm evaluation with the static weights cached."""

    def __init__(self, lattice: TruncatedLattice, params: GevreyParams):
        kabs = lattice.kabs
        safe = np.where(kabs > 0, kabs, 1.0)
        nz = kabs > 0
        self.hr_w = sobolev_weight(lattice, params.r)
        self.pow_r = np.where(nz, safe ** (2 * params.r), 0.0)
        self.pow_r1 = np.where(nz, safe ** (2 * params.r + 2), 0.0)
        self.root = safe ** (1.0 / params.s)

    def __call__(self, c: np.ndarray, tau: float):
        p = np.sum(np.abs(c) ** 2, axis=0)
        with np.errstate(over="ignore"):
            e = np.exp(2 * tau * self.root)
        if not np.all(np.isfinite(e)):
            raise FieldOverflowError(f"Gevrey weight overflows at tau={tau}")
        gw = e * p
        return (
            np.sqrt(np.sum(p.ravel())),
            np.sqrt(np.sum((self.hr_w * p).ravel())),
            np.sqrt(np.sum((self.pow_r * gw).ravel())),
            np.sqrt(np.sum((self.pow_r1 * gw).ravel())),
        )


def _projected_advection(c: np.ndarray, lattice: TruncatedLattice, M: int) -> np.ndarray:
    """P[(u.grad)u] with the mean removed (it vanishes analytically, not in roundoff)."""
    out = _leray(_advection_fft(c, c, lattice, M), lattice)
    out[(slice(None),) + (lattice.N,) * lattice.dim] = 0.0
    return out


class _Stepper:
    def __init__(self, lattice: TruncatedLattice, nu: float, dt: float,
                 nonlinear: bool = True, M: int | None = None):
        self.lattice = lattice
        self.dt = dt
        self.nonlinear = nonlinear
        self.M = _check_grid(lattice, M)
        self.E = np.exp(-nu * lattice.k2 * dt)
        self.E2 = np.exp(-nu * lattice.k2 * dt / 2)

    def N(self, c: np.ndarray) -> np.ndarray:
        if not self.nonlinear:
            return np.zeros_like(c)
        return -_projected_advection(c, self.lattice, self.M)

    def __call__(self, c: np.ndarray) -> np.ndarray:
        dt, E, E2 = self.dt, self.E, self.E2
        k1 = self.N(c)
        k2 = self.N(E2 * (c + 0.5 * dt * k1))
        k3 = self.N(E2 * c + 0.5 * dt * k2)
        k4 = self.N(E * c + dt * E2 * k3)
        return E * c + (dt / 6.0) * (E * k1 + 2.0 * E2 * (k2 + k3) + k4)


def stokes_operator(f: SpectralVectorField) -> SpectralVectorField:
    """A = -P Delta, i.e. multiplication by |k|^2 followed by Leray projection."""
    return SpectralVectorField(f.lattice, _leray(f.lattice.k2 * f.coeffs, f.lattice), True)


def rhs(u: SpectralVectorField, nu: float, M: int | None = None) -> SpectralVectorField:
    """-nu A u - chi_N P[(u.grad)u] on the lattice."""
    lat = u.lattice
    out = -nu * lat.k2 * u.coeffs - _projected_advection(u.coeffs, lat, _check_grid(lat, M))
    if not np.all(np.isfinite(out)):
        raise FieldOverflowError("non-finite right-hand side")
    return SpectralVectorField(lat, out, True)


def step_if_rk4(u: SpectralVectorField, nu: float, dt: float, *, nonlinear: bool = True,
                M: int | None = None) -> SpectralVectorField:
    """Advance one integrating-factor RK4 step of size ``dt``."""
    out = _Stepper(u.lattice, nu, dt, nonlinear, M)(u.coeffs)
    if not np.all(np.isfinite(out)):
        raise FieldOverflowError("non-finite coefficients after step")
    return SpectralVectorField(u.lattice, out, True)


def integrate(config: SolverConfig, a: SpectralVectorField) -> TrajectoryRecord:
    """Time-step ``a`` to ``config.T``, recording norms every step.

    A run that exceeds the H^r guard or overflows stops early and says so in
    ``status``; it never fails silently.
    """
    if a.lattice != config.lattice:
        raise ValueError("initial data must live on the configured lattice")
    wall0 = time.perf_counter()
    lat = config.lattice
    n = config.n_steps
    dt = config.T / n
    stepper = _Stepper(lat, config.nu, dt, config.nonlinear, config.M)
    record = _NormRecorder(lat, config.params)
    radius = config.radius

    times, taus, rows = [], [], []
    checkpoints = []
    c = np.array(a.coeffs)
    status = "completed"
    guard = None

    def observe(step, c):
        t = step * dt if step < n else config.T
        tau = float(radius(t))
        rows.append(record(c, tau))
        times.append(t)
        taus.append(tau)
        return t

    observe(0, c)
    guard = config.blowup_guard if config.blowup_guard is not None else 10.0 * rows[0][1]
    checkpoints.append((0.0, a))
    for step in range(1, n + 1):
        c = stepper(c)
        if not np.all(np.isfinite(c)):
            status = "overflow"
            break
        try:
            t = observe(step, c)
        except FieldOverflowError:
            status = "overflow"
            break
        if config.checkpoint_stride and step % config.checkpoint_stride == 0 and step < n:
            checkpoints.append((t, SpectralVectorField(lat, c, True)))
        if rows[-1][1] > guard:
            status = "blowup_guard"
            log.warning("H^r norm %.3g exceeded guard %.3g at t=%.4g", rows[-1][1], guard, t)
            break

    final = SpectralVectorField(lat, c, True) if status != "overflow" else None
    if final is not None and (not checkpoints or checkpoints[-1][0] != times[-1]):
        checkpoints.append((times[-1], final))

    arr = np.array(rows)
    times = np.array(times)
    g1 = arr[:, 3]
    integrand = config.nu * g1**2
    diss = np.concatenate([[0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(times))])
    return TrajectoryRecord(
        config=config,
        config_hash=config.hash(),
        times=times,
        tau=np.array(taus),
        l2=arr[:, 0],
        h_r=arr[:, 1],
        gevrey_r=arr[:, 2],
        gevrey_r_plus_1=g1,
        dissipation_cum=diss,
        checkpoints=checkpoints,
        final=final,
        status=status,
        wall_time=time.perf_counter() - wall0,
    )


def recover_pressure(u: SpectralVectorField, M: int | None = None) -> SpectralScalarField:
    """Zero-mean pressure solving -Delta p = div((u.grad)u) exactly on the lattice."""
    lat = u.lattice
    adv = _advection_fft(u.coeffs, u.coeffs, lat, _check_grid(lat, M))
    div = np.sum(1j * lat.k * adv, axis=0)
    return SpectralScalarField(lat, div * lat.inv_k2)


def pressure_bound_check(u: SpectralVectorField, p: SpectralScalarField, params: GevreyParams) -> float:
    """|p|_{G^s_{r+1,tau}} / |u|^2_{G^s_{r,tau}}; zero when ``u`` vanishes."""
    from .gevrey import gevrey_norm

    un = gevrey_norm(u, params)
    pn = gevrey_norm(p, GevreyParams(params.s, params.r + 1, params.tau))
    if un == 0:
        if pn != 0:
            raise ZeroDivisionError("nonzero pressure for a vanishing velocity")
        return 0.0
    return pn / un**2
