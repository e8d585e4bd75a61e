"""Stokes eigenbasis on the lattice and the trilinear form b(u, v, w) = <u.grad v, w>.

Basis elements are the real fields

    (e_j - k_j k / |k|^2) cos(k.x)   and   (e_j - k_j k / |k|^2) sin(k.x)

for ``k`` in the half lattice.  They are eigenfunctions of the Stokes
operator with eigenvalue |k|^2 (not normalised, and for fixed ``k`` the
``dim`` choices of ``j`` span only a ``dim - 1`` dimensional space).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .lattice import SpectralVectorField, TruncatedLattice, inner
from .spectral import convolve_advection_exact


class BasisIndex(NamedTuple):
    k: tuple
    j: int
    kind: str  # "cos" or "sin"


def basis_element(lattice: TruncatedLattice, idx: BasisIndex) -> SpectralVectorField:
    k = np.asarray(idx.k, dtype=float)
    vec = -k[idx.j] * k / (k @ k)
    vec[idx.j] += 1.0
    # cos(k.x) -> 1/2 at +-k;  sin(k.x) -> -i/2 at +k, +i/2 at -k
    amp = 0.5 * vec if idx.kind == "cos" else -0.5j * vec
    return SpectralVectorField.from_modes(lattice, {tuple(idx.k): amp})


@dataclass(frozen=True)
class GalerkinSystem:
    lattice: TruncatedLattice

    @cached_property
    def basis(self) -> list[BasisIndex]:
        return [BasisIndex(k, j, kind)
                for k in self.lattice.half_wavevectors()
                for j in range(self.lattice.dim)
                for kind in ("cos", "sin")]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.array([float(np.dot(b.k, b.k)) for b in self.basis])

    def element(self, i: int) -> SpectralVectorField:
        return basis_element(self.lattice, self.basis[i])

    def b(self, a: int, b: int, c: int) -> float:
        return trilinear_b(self.basis[a], self.basis[b], self.basis[c], self.lattice)

    def tensor(self) -> np.ndarray:
        """B[a, b, c] = b(w_a, w_b, w_c) for every basis triple."""
        elems = [self.element(i) for i in range(len(self.basis))]
        n = len(elems)
        C = np.conj(np.stack([e.coeffs for e in elems]).reshape(n, -1))
        out = np.empty((n, n, n))
        for a in range(n):
            for b in range(n):
                adv = convolve_advection_exact(elems[a], elems[b]).coeffs
                out[a, b] = (C @ adv.ravel()).real
        return out


def trilinear_b(a_idx: BasisIndex, b_idx: BasisIndex, c_idx: BasisIndex,
                lattice: TruncatedLattice) -> float:
    """<w_a . grad w_b, w_c> evaluated with the exact convolution."""
    wa, wb, wc = (basis_element(lattice, i) for i in (a_idx, b_idx, c_idx))
    return inner(convolve_advection_exact(wa, wb), wc).real
