"""Truncated Fourier lattices and spectral fields on the periodic torus.

A field is stored as its Fourier coefficients on the full box
``|k|_inf <= N`` in centred layout: array index ``i`` along an axis holds
wavenumber ``i - N``.  Velocity fields carry a leading component axis,
so ``coeffs.shape == (dim, 2N+1, ..., 2N+1)``.  The physical field is

    u(x) = sum_k  u_k exp(i k.x),   x in (-pi, pi)^dim,

and the L2 pairing drops the (2 pi)^dim volume factor throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

DIVERGENCE_RTOL = 1e-12
HERMITIAN_RTOL = 1e-12


class FieldOverflowError(FloatingPointError):
    """A spectral multiplier or coefficient became non-finite."""


@dataclass(frozen=True)
class TruncatedLattice:
    """Integer wavevectors with max-norm at most ``N`` in ``dim`` dimensions."""

    dim: int
    N: int

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"cutoff N must be a positive integer, got {self.N}")

    @property
    def side(self) -> int:
        return 2 * self.N + 1

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.side,) * self.dim

    @property
    def size(self) -> int:
        return self.side**self.dim

    @cached_property
    def k(self) -> np.ndarray:
        """Wavevector components, shape ``(dim, *shape)``, integer valued floats."""
        axis = np.arange(-self.N, self.N + 1, dtype=float)
        grids = np.meshgrid(*([axis] * self.dim), indexing="ij")
        out = np.stack(grids)
        out.flags.writeable = False
        return out

    @cached_property
    def k2(self) -> np.ndarray:
        out = np.sum(self.k**2, axis=0)
        out.flags.writeable = False
        return out

    @cached_property
    def kabs(self) -> np.ndarray:
        out = np.sqrt(self.k2)
        out.flags.writeable = False
        return out

    @cached_property
    def inv_k2(self) -> np.ndarray:
        """``1/|k|^2`` with the ``k = 0`` entry set to zero."""
        with np.errstate(divide="ignore"):
            out = np.where(self.k2 > 0, 1.0 / np.where(self.k2 > 0, self.k2, 1.0), 0.0)
        out.flags.writeable = False
        return out

    def index(self, k) -> tuple[int, ...]:
        """Array index of wavevector ``k``."""
        k = tuple(int(c) for c in k)
        if len(k) != self.dim or max(abs(c) for c in k) > self.N:
            raise IndexError(f"wavevector {k} outside lattice (dim={self.dim}, N={self.N})")
        return tuple(c + self.N for c in k)

    def wavevectors(self):
        """All retained wavevectors in lexicographic order."""
        return itertools.product(range(-self.N, self.N + 1), repeat=self.dim)

    def half_wavevectors(self):
        """Wavevectors whose first nonzero component is positive (lexicographic)."""
        for k in self.wavevectors():
            nz = [c for c in k if c != 0]
            if nz and nz[0] > 0:
                yield k

    def padded_size(self) -> int:
        """Smallest FFT-friendly grid size with ``M >= 3N + 1``."""
        from scipy.fft import next_fast_len

        return next_fast_len(3 * self.N + 1)


def _flip(c: np.ndarray, dim: int) -> np.ndarray:
    """Reverse the trailing ``dim`` spatial axes, i.e. map k -> -k."""
    return c[(Ellipsis,) + (slice(None, None, -1),) * dim]


def hermitize(c: np.ndarray, dim: int) -> np.ndarray:
    """Symmetrised copy with ``c(-k) = conj(c(k))`` holding exactly."""
    return 0.5 * (c + np.conj(_flip(c, dim)))


@dataclass(frozen=True, eq=False)
class SpectralVectorField:
    """Fourier coefficients of a real, mean-zero vector field on the lattice.

    The coefficient array is made read-only on construction.
    """

    lattice: TruncatedLattice
    coeffs: np.ndarray
    divergence_free: bool = True

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, copy=True)
        expected = (self.lattice.dim,) + self.lattice.shape
        if c.shape != expected:
            raise ValueError(f"coeffs shape {c.shape} does not match lattice {expected}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, lattice: TruncatedLattice) -> "SpectralVectorField":
        return cls(lattice, np.zeros((lattice.dim,) + lattice.shape, dtype=complex))

    @classmethod
    def from_modes(cls, lattice: TruncatedLattice, modes: dict, divergence_free=True):
        """Build a field from ``{k: amplitude vector}``; ``-k`` gets the conjugate."""
        c = np.zeros((lattice.dim,) + lattice.shape, dtype=complex)
        for k, amp in modes.items():
            amp = np.asarray(amp, dtype=complex)
            c[(slice(None),) + lattice.index(k)] = amp
            c[(slice(None),) + lattice.index([-x for x in k])] = np.conj(amp)
        return cls(lattice, c, divergence_free)

    def mode(self, k) -> np.ndarray:
        return self.coeffs[(slice(None),) + self.lattice.index(k)]

    def with_coeffs(self, coeffs) -> "SpectralVectorField":
        return SpectralVectorField(self.lattice, coeffs, self.divergence_free)

    def _check_other(self, other):
        if not isinstance(other, SpectralVectorField) or other.lattice != self.lattice:
            raise ValueError("fields must live on the same lattice")

    def __add__(self, other):
        self._check_other(other)
        return SpectralVectorField(self.lattice, self.coeffs + other.coeffs,
                                   self.divergence_free and other.divergence_free)

    def __sub__(self, other):
        self._check_other(other)
        return SpectralVectorField(self.lattice, self.coeffs - other.coeffs,
                                   self.divergence_free and other.divergence_free)

    def __mul__(self, scalar):
        if not np.isrealobj(scalar):
            raise TypeError("only real scalars preserve reality of the field")
        return SpectralVectorField(self.lattice, scalar * self.coeffs, self.divergence_free)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


@dataclass(frozen=True, eq=False)
class SpectralScalarField:
    """Fourier coefficients of a real scalar field (e.g. pressure)."""

    lattice: TruncatedLattice
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, copy=True)
        if c.shape != self.lattice.shape:
            raise ValueError(f"coeffs shape {c.shape} does not match lattice {self.lattice.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def mode(self, k) -> complex:
        return complex(self.coeffs[self.lattice.index(k)])

    def __sub__(self, other):
        if other.lattice != self.lattice:
            raise ValueError("fields must live on the same lattice")
        return SpectralScalarField(self.lattice, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return SpectralScalarField(self.lattice, scalar * self.coeffs)

    __rmul__ = __mul__


class Violation(NamedTuple):
    kind: str  # "hermitian", "zero-mean" or "divergence"
    k: tuple
    magnitude: float


def validate_field(f: SpectralVectorField) -> list[Violation]:
    """List every invariant violation of ``f``; empty means valid."""
    lat = f.lattice
    c = f.coeffs
    out = []
    amp = np.sqrt(np.sum(np.abs(c) ** 2, axis=0))
    scale = max(float(amp.max()), np.finfo(float).tiny)

    herm = np.sqrt(np.sum(np.abs(c - np.conj(_flip(c, lat.dim))) ** 2, axis=0))
    for idx in zip(*np.nonzero(herm > HERMITIAN_RTOL * scale)):
        out.append(Violation("hermitian", tuple(int(i) - lat.N for i in idx), float(herm[idx])))

    zero = (slice(None),) + (lat.N,) * lat.dim
    if np.any(c[zero] != 0):
        out.append(Violation("zero-mean", (0,) * lat.dim, float(np.linalg.norm(c[zero]))))

    if f.divergence_free:
        div = np.abs(np.sum(lat.k * c, axis=0))
        bad = div > DIVERGENCE_RTOL * amp * lat.kabs
        for idx in zip(*np.nonzero(bad)):
            out.append(Violation("divergence", tuple(int(i) - lat.N for i in idx), float(div[idx])))
    return out


def _leray(c: np.ndarray, lat: TruncatedLattice) -> np.ndarray:
    kdotu = np.sum(lat.k * c, axis=0)
    return c - lat.k * (kdotu * lat.inv_k2)


def leray_project(f: SpectralVectorField) -> SpectralVectorField:
    """Divergence-free part: ``u_k - k (k.u_k)/|k|^2`` for every ``k != 0``."""
    return SpectralVectorField(f.lattice, _leray(f.coeffs, f.lattice), True)


def apply_multiplier(f, m: Callable[[np.ndarray], np.ndarray]):
    """Multiply every coefficient by the real symbol ``m(k)``.

    ``m`` receives the stacked wavevector components (shape ``(dim, *box)``)
    and must return an array broadcastable to the box.  Works for vector and
    scalar fields.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        weights = np.broadcast_to(np.asarray(m(f.lattice.k), dtype=float), f.lattice.shape)
    if not np.all(np.isfinite(weights)):
        raise FieldOverflowError("multiplier is not finite on the lattice; shrink tau or N")
    if isinstance(f, SpectralScalarField):
        return SpectralScalarField(f.lattice, f.coeffs * weights)
    return SpectralVectorField(f.lattice, f.coeffs * weights, f.divergence_free)


def lambda_power(r: float) -> Callable[[np.ndarray], np.ndarray]:
    """Symbol of Lambda^r = (-Delta)^(r/2), zero at k = 0."""
    def m(k):
        kabs = np.sqrt(np.sum(k**2, axis=0))
        return np.where(kabs > 0, np.where(kabs > 0, kabs, 1.0) ** r, 0.0)
    return m


def gevrey_multiplier(tau: float, s: float) -> Callable[[np.ndarray], np.ndarray]:
    """Symbol of exp(tau Lambda^(1/s))."""
    def m(k):
        return np.exp(tau * np.sqrt(np.sum(k**2, axis=0)) ** (1.0 / s))
    return m


def heat_factor(nu: float, dt: float) -> Callable[[np.ndarray], np.ndarray]:
    """Symbol of the heat semigroup exp(nu Delta dt)."""
    def m(k):
        return np.exp(-nu * np.sum(k**2, axis=0) * dt)
    return m


def inner(f, g) -> complex:
    """L2 pairing ``sum_k f_k . conj(g_k)`` (volume factor dropped)."""
    return complex(np.sum(f.coeffs * np.conj(g.coeffs)))


def random_divfree_field(lattice: TruncatedLattice, decay=(1.0, 1.0, 0.0), seed=0,
                         amplitude: float = 1.0, project: bool = True) -> SpectralVectorField:
    """Random Gevrey-class field with |u_k| ~ exp(-tau0 |k|^(1/s)) |k|^(-r_extra).

    The result is Hermitian, mean zero, Leray projected (unless ``project``
    is false, used for counterexamples) and rescaled to L2 norm
    ``amplitude``.  Identical ``seed`` gives bit-identical coefficients.
    """
    tau0, s, r_extra = decay
    if tau0 <= 0 or s < 1:
        raise ValueError("need tau0 > 0 and s >= 1")
    rng = np.random.default_rng(seed)
    shape = (lattice.dim,) + lattice.shape
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    kabs = lattice.kabs
    safe = np.where(kabs > 0, kabs, 1.0)
    envelope = np.where(kabs > 0, np.exp(-tau0 * safe ** (1.0 / s)) * safe ** (-r_extra), 0.0)
    c = hermitize(c * envelope, lattice.dim)
    if project:
        c = _leray(c, lattice)
    norm = np.sqrt(np.sum(np.abs(c) ** 2))
    if norm > 0:
        c = c * (amplitude / norm)
    return SpectralVectorField(lattice, c, divergence_free=project)
