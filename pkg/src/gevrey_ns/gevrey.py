"""Sobolev and Gevrey norms, the shrinking radius schedule and a priori constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import FieldOverflowError, TruncatedLattice


@dataclass(frozen=True)
class GevreyParams:
    """Gevrey index ``s >= 1``, Sobolev order ``r`` and radius ``tau >= 0``."""

    s: float
    r: float
    tau: float = 0.0

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"Gevrey index s must be >= 1, got {self.s}")
        if self.tau < 0:
            raise ValueError(f"radius tau must be >= 0, got {self.tau}")

    def theorem_regime(self, dim: int) -> bool:
        """True when the parameters meet the r > 9/2 hypothesis in 3D."""
        return dim == 3 and self.r > 4.5

    def with_tau(self, tau: float) -> "GevreyParams":
        return GevreyParams(self.s, self.r, tau)


def _power_sum(f) -> np.ndarray:
    p = np.abs(f.coeffs) ** 2
    if p.ndim > f.lattice.dim:
        p = p.sum(axis=0)
    return p


def _weighted_norm(power: np.ndarray, weight: np.ndarray) -> float:
    # C-order flattening fixes the reduction order
    return math.sqrt(float(np.sum((weight * power).ravel())))


def l2_norm(f) -> float:
    return _weighted_norm(_power_sum(f), 1.0)


def sobolev_weight(lattice: TruncatedLattice, r: float) -> np.ndarray:
    return (1.0 + lattice.k2) ** r


def sobolev_norm(f, r: float) -> float:
    """Inhomogeneous H^r norm with weight (1 + |k|^2)^r."""
    return _weighted_norm(_power_sum(f), sobolev_weight(f.lattice, r))


def gevrey_weight(lattice: TruncatedLattice, params: GevreyParams) -> np.ndarray:
    """|k|^(2r) exp(2 tau |k|^(1/s)), zero at k = 0."""
    kabs = lattice.kabs
    safe = np.where(kabs > 0, kabs, 1.0)
    with np.errstate(over="ignore"):
        w = np.where(kabs > 0, safe ** (2 * params.r) * np.exp(2 * params.tau * safe ** (1 / params.s)), 0.0)
    if not np.all(np.isfinite(w)):
        raise FieldOverflowError(
            f"Gevrey weight overflows at tau={params.tau}, s={params.s}, N={lattice.N}")
    return w


def gevrey_norm(f, params: GevreyParams) -> float:
    return _weighted_norm(_power_sum(f), gevrey_weight(f.lattice, params))


def homogeneous_sobolev_norm(f, r: float) -> float:
    return gevrey_norm(f, GevreyParams(1.0, r, 0.0))


@dataclass(frozen=True)
class RadiusSchedule:
    """tau(t) = 1 / (exp(C1 t)/tau0 + (C2/C1)(exp(C1 t) - 1))."""

    tau0: float
    C1: float
    C2: float

    def __post_init__(self):
        if not (self.tau0 > 0 and self.C1 > 0 and self.C2 > 0):
            raise ValueError("RadiusSchedule needs tau0, C1, C2 > 0")

    @classmethod
    def from_constants(cls, tau0: float, consts: "AprioriConstants", C: float = 1.0):
        """Schedule solving tau' + C tau C_T + C tau^2 (C_T + G_T) = 0."""
        return cls(tau0, C * consts.C_T, C * (consts.C_T + consts.G_T))

    def __call__(self, t):
        return tau_at(self, t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            e = np.exp(self.C1 * t)
            tau = tau_at(self, t)
            return -e * (self.C1 / self.tau0 + self.C2) * tau**2

    def to_dict(self) -> dict:
        return {"kind": "closed_form", "tau0": self.tau0, "C1": self.C1, "C2": self.C2}


@dataclass(frozen=True)
class ConstantRadius:
    """Radius frozen at ``tau0``; used for pilot runs and ablations."""

    tau0: float

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.tau0) if np.ndim(t) else float(self.tau0)

    def derivative(self, t):
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0

    def to_dict(self) -> dict:
        return {"kind": "constant", "tau0": self.tau0}


def tau_at(sched: RadiusSchedule, t):
    """Radius at time ``t`` (scalar or array, ``t >= 0``)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be nonnegative")
    with np.errstate(over="ignore"):
        e = np.exp(sched.C1 * t_arr)
        out = 1.0 / (e / sched.tau0 + (sched.C2 / sched.C1) * (e - 1.0))
    return float(out) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class AprioriConstants:
    """Measured or configured stand-ins for C_T, G_T and M_T."""

    C_T: float
    G_T: float
    M_T: float
    provenance: str = "configured"
    source_hash: str | None = None

    def __post_init__(self):
        if min(self.C_T, self.G_T, self.M_T) < 0:
            raise ValueError("a priori constants must be nonnegative")
        if self.provenance not in ("configured", "measured"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance == "measured" and not self.source_hash:
            raise ValueError("measured constants must carry the run hash they came from")

    def to_dict(self) -> dict:
        return {"C_T": self.C_T, "G_T": self.G_T, "M_T": self.M_T,
                "provenance": self.provenance, "source_hash": self.source_hash}


def tau_ode_residual(sched: RadiusSchedule, t, consts: AprioriConstants, C: float = 1.0):
    """tau' + C tau C_T + C tau^2 C_T + C tau^2 G_T along the closed-form schedule."""
    tau = np.asarray(tau_at(sched, t))
    res = sched.derivative(t) + C * tau * consts.C_T + C * tau**2 * (consts.C_T + consts.G_T)
    return float(res) if np.ndim(t) == 0 else res


def measure_constants(traj, sched=None) -> AprioriConstants:
    """C_T = max H^r norm, G_T = max Gevrey norm along the radius, M_T = dissipation.

    ``sched`` (optional) must be the radius the trajectory was recorded with.
    """
    if len(traj.times) == 0:
        raise ValueError("empty trajectory")
    if sched is not None and not np.allclose(np.asarray(sched(traj.times)), traj.tau,
                                             rtol=1e-14, atol=0):
        raise ValueError("trajectory norms were recorded with a different radius schedule")
    return AprioriConstants(
        C_T=float(np.max(traj.h_r)),
        G_T=float(np.max(traj.gevrey_r)),
        M_T=float(traj.dissipation_cum[-1]),
        provenance="measured",
        source_hash=traj.config_hash,
    )


def apriori_growth_bound(t, a_norms, consts: AprioriConstants, C: float = 1.0):
    """exp(C C_T t) (|a|_G + C |a|_{H^r}^2 t) with ``a_norms = (|a|_G, |a|_{H^r})``."""
    a_gevrey, a_hr = a_norms
    t = np.asarray(t, dtype=float)
    out = np.exp(C * consts.C_T * t) * (a_gevrey + C * a_hr**2 * t)
    return float(out) if out.ndim == 0 else out
