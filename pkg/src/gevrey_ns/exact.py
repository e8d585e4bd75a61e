"""Closed-form Navier-Stokes solutions used as regression oracles.

Both flows have a nonlinear term that is a pure gradient, so the velocity
only decays by the heat factor ``exp(-nu lambda t)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import SpectralScalarField, SpectralVectorField, TruncatedLattice


@dataclass(frozen=True, eq=False)
class ExactSolution:
    name: str
    initial: SpectralVectorField
    eigenvalue: float
    pressure0: SpectralScalarField | None = None
    pressure_rate: float = 0.0

    def velocity(self, t: float, nu: float) -> SpectralVectorField:
        return self.initial * float(np.exp(-nu * self.eigenvalue * t))

    def pressure(self, t: float, nu: float) -> SpectralScalarField:
        if self.pressure0 is None:
            raise NotImplementedError(f"no closed-form pressure registered for {self.name}")
        return self.pressure0 * float(np.exp(-nu * self.pressure_rate * t))


def _taylor_green_2d(lattice: TruncatedLattice) -> ExactSolution:
    if lattice.dim != 2:
        raise ValueError("taylor_green_2d needs a 2D lattice")
    # u0 = (cos x1 sin x2, -sin x1 cos x2)
    modes = {}
    for a in (-1, 1):
        for b in (-1, 1):
            modes[(a, b)] = np.array([-0.25j * b, 0.25j * a])
    c = np.zeros((2,) + lattice.shape, dtype=complex)
    for k, amp in modes.items():
        c[(slice(None),) + lattice.index(k)] = amp
    u0 = SpectralVectorField(lattice, c)

    # p0 = -(cos 2x1 + cos 2x2)/4, representable once N >= 2
    p = np.zeros(lattice.shape, dtype=complex)
    if lattice.N >= 2:
        for k in [(2, 0), (-2, 0), (0, 2), (0, -2)]:
            p[lattice.index(k)] = -0.125
    return ExactSolution("taylor_green_2d", u0, 2.0, SpectralScalarField(lattice, p), 4.0)


def _beltrami_3d(lattice: TruncatedLattice) -> ExactSolution:
    if lattice.dim != 3:
        raise ValueError("beltrami_3d needs a 3D lattice")
    # ABC flow with A = B = C = 1: (sin z + cos y, sin x + cos z, sin y + cos x),
    # curl u = u and -Delta u = u
    c = np.zeros((3,) + lattice.shape, dtype=complex)

    def add(comp, axis, kind):
        for sign in (1, -1):
            k = [0, 0, 0]
            k[axis] = sign
            val = 0.5 if kind == "cos" else -0.5j * sign
            c[(comp,) + lattice.index(k)] += val

    add(0, 2, "sin"), add(0, 1, "cos")
    add(1, 0, "sin"), add(1, 2, "cos")
    add(2, 1, "sin"), add(2, 0, "cos")
    return ExactSolution("beltrami_3d", SpectralVectorField(lattice, c), 1.0)


_LIBRARY = {"taylor_green_2d": _taylor_green_2d, "beltrami_3d": _beltrami_3d}


def exact_solution_library(name: str, lattice: TruncatedLattice) -> ExactSolution:
    """Initial field and closed-form evolution for a named exact solution."""
    try:
        builder = _LIBRARY[name]
    except KeyError:
        raise ValueError(f"unknown exact solution {name!r}; choose from {sorted(_LIBRARY)}") from None
    return builder(lattice)
