"""Physical-space evaluation and the two advection engines.

``convolve_advection_exact`` is the direct double sum over the lattice and
serves as the oracle.  ``advection_fft`` evaluates the same product on a
zero-padded grid with ``M >= 3N + 1`` points per axis; with that padding no
alias of a retained mode falls back inside the box, so both agree to
roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .lattice import (
    SpectralScalarField,
    SpectralVectorField,
    TruncatedLattice,
    _flip,
)


class ConfigurationError(ValueError):
    """Inconsistent grid or solver configuration."""


@dataclass(frozen=True, eq=False)
class PhysicalGrid:
    """Real samples of a field on an ``M^dim`` tensor grid over (-pi, pi)^dim.

    Sample ``n`` along an axis sits at ``x = -pi + 2 pi n / M``.
    """

    M: int
    values: np.ndarray

    @property
    def x(self) -> np.ndarray:
        return -np.pi + 2.0 * np.pi * np.arange(self.M) / self.M


def _check_grid(lattice: TruncatedLattice, M: int | None) -> int:
    if M is None:
        return lattice.padded_size()
    if M < 3 * lattice.N + 1:
        raise ConfigurationError(
            f"padded grid M={M} is below 3N+1={3 * lattice.N + 1}; quadratic products would alias")
    return int(M)


def _phase(lattice: TruncatedLattice, M: int, half: bool) -> np.ndarray:
    # the grid starts at -pi, so mode k picks up exp(-i pi k) = (-1)^k
    sign = np.where(np.arange(-lattice.N, lattice.N + 1) % 2 == 0, 1.0, -1.0)
    grids = np.meshgrid(*([sign] * lattice.dim), indexing="ij")
    ph = np.prod(grids, axis=0)
    return ph[..., lattice.N:] if half else ph


def _to_grid(c: np.ndarray, lattice: TruncatedLattice, M: int) -> np.ndarray:
    """Real physical samples of centred coefficients ``c`` (leading axes kept)."""
    N, d = lattice.N, lattice.dim
    lead = c.shape[:-d]
    kidx = np.arange(-N, N + 1) % M
    E = np.zeros(lead + (M,) * (d - 1) + (M // 2 + 1,), dtype=complex)
    index = np.ix_(*([kidx] * (d - 1) + [np.arange(N + 1)]))
    E[(Ellipsis,) + index] = c[..., N:] * _phase(lattice, M, half=True)
    axes = tuple(range(-d, 0))
    return sfft.irfftn(E, s=(M,) * d, axes=axes) * float(M) ** d


def _from_grid(values: np.ndarray, lattice: TruncatedLattice, M: int) -> np.ndarray:
    """Centred lattice coefficients of real samples, truncated to the box."""
    N, d = lattice.N, lattice.dim
    axes = tuple(range(-d, 0))
    R = sfft.rfftn(values, axes=axes) / float(M) ** d
    kidx = np.arange(-N, N + 1) % M
    index = np.ix_(*([kidx] * (d - 1) + [np.arange(N + 1)]))
    half = R[(Ellipsis,) + index] * _phase(lattice, M, half=True)
    out = np.zeros(values.shape[:-d] + lattice.shape, dtype=complex)
    out[..., N:] = half
    mirrored = np.conj(_flip(out, d))
    out[..., :N] = mirrored[..., :N]
    return out


def to_physical(f, M: int | None = None) -> PhysicalGrid:
    """Sample a vector or scalar field on an ``M``-point grid (default: padded size)."""
    M = _check_grid(f.lattice, M)
    return PhysicalGrid(M, _to_grid(f.coeffs, f.lattice, M))


def to_physical_complex(f, M: int | None = None) -> np.ndarray:
    """Complex inverse transform without assuming Hermitian symmetry.

    Used to check reality: a valid field has negligible imaginary part.
    """
    lat = f.lattice
    M = _check_grid(lat, M)
    d, N = lat.dim, lat.N
    kidx = np.arange(-N, N + 1) % M
    E = np.zeros(f.coeffs.shape[:-d] + (M,) * d, dtype=complex)
    E[(Ellipsis,) + np.ix_(*([kidx] * d))] = f.coeffs * _phase(lat, M, half=False)
    return sfft.ifftn(E, axes=tuple(range(-d, 0))) * float(M) ** d


def from_physical(lattice: TruncatedLattice, grid: PhysicalGrid, divergence_free=True):
    """Project physical samples onto the lattice (vector if values has a component axis)."""
    c = _from_grid(np.asarray(grid.values, dtype=float), lattice, grid.M)
    if c.ndim == lattice.dim:
        return SpectralScalarField(lattice, c)
    return SpectralVectorField(lattice, c, divergence_free)


def _advection_fft(u: np.ndarray, v: np.ndarray, lattice: TruncatedLattice, M: int) -> np.ndarray:
    d = lattice.dim
    grad_v = 1j * lattice.k[:, None] * v[None, :]  # [i, j] -> d_i v_j
    phys = _to_grid(np.concatenate([u, grad_v.reshape((d * d,) + lattice.shape)]), lattice, M)
    uu = phys[:d]
    dv = phys[d:].reshape((d, d) + phys.shape[1:])
    adv = np.einsum("i...,ij...->j...", uu, dv)
    return _from_grid(adv, lattice, M)


def advection_fft(u: SpectralVectorField, v: SpectralVectorField | None = None,
                  M: int | None = None) -> SpectralVectorField:
    """Coefficients of (u.grad)v on the lattice via the zero-padded grid.

    ``v`` defaults to ``u``.  Raises ``ConfigurationError`` when ``M < 3N+1``.
    """
    v = u if v is None else v
    if v.lattice != u.lattice:
        raise ValueError("fields must live on the same lattice")
    M = _check_grid(u.lattice, M)
    return SpectralVectorField(u.lattice, _advection_fft(u.coeffs, v.coeffs, u.lattice, M),
                               divergence_free=False)


def _advection_exact(u: np.ndarray, v: np.ndarray, lattice: TruncatedLattice) -> np.ndarray:
    N, d = lattice.N, lattice.dim
    side = lattice.side
    # G[l] = i m_l v_m, so result_k = sum_j sum_l u_j^l G[l]_{k-j}
    G = 1j * lattice.k[:, None] * v[None, :]
    out = np.zeros_like(v)
    for j in lattice.wavevectors():
        uj = u[(slice(None),) + tuple(c + N for c in j)]
        if not np.any(uj):
            continue
        # k = m + j must stay inside the box: m ranges over the overlap
        src = tuple(slice(max(0, -c), side - max(0, c)) for c in j)
        dst = tuple(slice(max(0, c), side - max(0, -c)) for c in j)
        out[(slice(None),) + dst] += np.tensordot(uj, G[(slice(None), slice(None)) + src], axes=1)
    return out


def convolve_advection_exact(u: SpectralVectorField, v: SpectralVectorField) -> SpectralVectorField:
    """Coefficients of (u.grad)v restricted to the lattice by direct convolution.

    result_k = i sum_j [u_j . (k - j)] v_{k-j}; cost O(|lattice|^2).
    """
    if v.lattice != u.lattice:
        raise ValueError("fields must live on the same lattice")
    return SpectralVectorField(u.lattice, _advection_exact(u.coeffs, v.coeffs, u.lattice),
                               divergence_free=False)


def divergence(f: SpectralVectorField) -> SpectralScalarField:
    return SpectralScalarField(f.lattice, np.sum(1j * f.lattice.k * f.coeffs, axis=0))


def laplacian(f):
    if isinstance(f, SpectralScalarField):
        return SpectralScalarField(f.lattice, -f.lattice.k2 * f.coeffs)
    return SpectralVectorField(f.lattice, -f.lattice.k2 * f.coeffs, f.divergence_free)
