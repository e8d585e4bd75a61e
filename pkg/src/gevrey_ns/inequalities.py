"""Numerical certificates for the scalar, lattice and trilinear inequalities.

Every certificate reduces to a supremum of a ratio LHS/RHS over a grid or a
seeded ensemble.  Reports keep the argmax as a witness that can be
re-evaluated on its own with :func:`reevaluate_witness`.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .gevrey import GevreyParams, gevrey_norm, sobolev_norm
from .lattice import (
    SpectralVectorField,
    TruncatedLattice,
    apply_multiplier,
    gevrey_multiplier,
    inner,
    lambda_power,
    random_divfree_field,
)
from .solver import pressure_bound_check, recover_pressure
from .spectral import convolve_advection_exact


@dataclass
class CertificationReport:
    id: str
    params: dict
    seed: int | None
    n_samples: int
    sup_ratio: float
    witness: dict
    threshold: float
    verdict: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


@dataclass(frozen=True)
class EnsembleSpec:
    """Seeded ensemble of random Gevrey-class fields.

    Member ``i`` depends only on ``(seed, i)``, so growing the ensemble keeps
    the earlier members and empirical suprema can only increase.
    """

    dim: int
    N: int
    n_samples: int
    seed: int = 0
    decay: tuple = (1.0, 2.0, 1.0)
    project: bool = True

    @property
    def lattice(self) -> TruncatedLattice:
        return TruncatedLattice(self.dim, self.N)

    def member(self, i: int, stream: int = 0) -> SpectralVectorField:
        ss = np.random.SeedSequence([self.seed, i, stream])
        return random_divfree_field(self.lattice, self.decay, seed=ss, project=self.project)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "N": self.N, "n_samples": self.n_samples, "seed": self.seed,
                "decay": list(self.decay), "project": self.project}


# --- scalar inequality |x^(1/s) - y^(1/s)| <= C |x - y| / (x^(1-1/s) + y^(1-1/s))

def scalar_gevrey_ratio(xi, eta, s: float):
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    a = 1.0 / s
    return np.abs(xi**a - eta**a) * (xi ** (1 - a) + eta ** (1 - a)) / np.abs(xi - eta)


def certify_scalar_gevrey(s: float, grid=(1.0, 1e6, 500), threshold: float = 2.0) -> CertificationReport:
    """Sup of the scalar ratio over a log-spaced ``n x n`` grid (diagonal skipped)."""
    if s < 1:
        raise ValueError("s must be >= 1")
    lo, hi, n = grid
    pts = np.geomspace(lo, hi, int(n))
    X, Y = np.meshgrid(pts, pts, indexing="ij")
    off = X != Y
    with np.errstate(invalid="ignore", divide="ignore"):
        R = np.where(off, scalar_gevrey_ratio(X, Y, s), -np.inf)
    i, j = np.unravel_index(int(np.argmax(R)), R.shape)
    sup = float(R[i, j])
    return CertificationReport(
        id="scalar_gevrey", params={"s": s, "grid": [lo, hi, int(n)]}, seed=None,
        n_samples=int(off.sum()), sup_ratio=sup,
        witness={"xi": float(pts[i]), "eta": float(pts[j])}, threshold=threshold,
        verdict=_verdict(sup <= threshold),
    )


# --- lattice triangle inequality |k - j| <= 2 |j| |k|

def triangle_ratio(j, k) -> float:
    j = np.asarray(j, dtype=float)
    k = np.asarray(k, dtype=float)
    return float(np.linalg.norm(k - j) / (2.0 * np.linalg.norm(j) * np.linalg.norm(k)))


def certify_lattice_triangle(N: int, dim: int = 3, reduce_symmetry: bool = True) -> CertificationReport:
    """Exhaustive check over all nonzero ``j, k`` with max-norm at most ``N``.

    The ratio is invariant under coordinate permutations and sign flips
    applied to both vectors, so by default ``j`` runs over one
    representative per orbit (nonnegative, sorted) while ``k`` covers the
    whole box; this still covers every pair.
    """
    lat = TruncatedLattice(dim, N)
    K = lat.k.reshape(dim, -1).T
    knorm = np.sqrt(np.sum(K**2, axis=1))
    nz = knorm > 0
    K, knorm = K[nz], knorm[nz]

    if reduce_symmetry:
        reps = [j for j in itertools.product(range(N + 1), repeat=dim)
                if any(j) and list(j) == sorted(j)]
    else:
        reps = [tuple(int(c) for c in row) for row in K]

    best, witness, evaluated = -1.0, None, 0
    for j in reps:
        jv = np.asarray(j, dtype=float)
        ratios = np.sqrt(np.sum((K - jv) ** 2, axis=1)) / (2.0 * np.linalg.norm(jv) * knorm)
        evaluated += ratios.size
        i = int(np.argmax(ratios))
        if ratios[i] > best:
            best = float(ratios[i])
            witness = {"j": list(j), "k": [int(c) for c in K[i]]}
    return CertificationReport(
        id="lattice_triangle", params={"N": N, "dim": dim, "reduce_symmetry": reduce_symmetry},
        seed=None, n_samples=int(len(K)) ** 2, sup_ratio=best, witness=witness, threshold=1.0,
        verdict=_verdict(best <= 1.0), details={"pairs_evaluated": evaluated},
    )


# --- elementary exponential bounds

def exp_ratios(xi):
    """Ratios for e^x <= e + x^2 e^x and |e^x - 1| <= |x| e^|x| (0 where both sides vanish)."""
    xi = np.asarray(xi, dtype=float)
    first = np.exp(xi) / (np.e + xi**2 * np.exp(xi))
    denom = np.abs(xi) * np.exp(np.abs(xi))
    with np.errstate(invalid="ignore", divide="ignore"):
        second = np.where(xi == 0, 0.0, np.abs(np.expm1(xi)) / np.where(xi == 0, 1.0, denom))
    return first, second


def certify_elementary_exp(n_samples: int = 100_001, bounds=(-50.0, 50.0)) -> CertificationReport:
    xi = np.linspace(bounds[0], bounds[1], n_samples)
    first, second = exp_ratios(xi)
    i1, i2 = int(np.argmax(first)), int(np.argmax(second))
    if first[i1] >= second[i2]:
        sup, witness = float(first[i1]), {"inequality": "exp_quadratic", "xi": float(xi[i1])}
    else:
        sup, witness = float(second[i2]), {"inequality": "expm1_linear", "xi": float(xi[i2])}
    return CertificationReport(
        id="elementary_exp", params={"bounds": list(bounds)}, seed=None, n_samples=n_samples,
        sup_ratio=sup, witness=witness, threshold=1.0, verdict=_verdict(sup <= 1.0),
        details={"sup_exp_quadratic": float(first[i1]), "sup_expm1_linear": float(second[i2])},
    )


# --- cancellation <v.grad W v, W v> = 0 with W = Lambda^r exp(tau Lambda^(1/s))

def _weighted(v: SpectralVectorField, params: GevreyParams) -> SpectralVectorField:
    return apply_multiplier(apply_multiplier(v, lambda_power(params.r)),
                            gevrey_multiplier(params.tau, params.s))


def cancellation_ratio(v: SpectralVectorField, params: GevreyParams) -> float:
    """|<v.grad Wv, Wv>| over the Young-inequality scale |v|_l1 |Lambda Wv| |Wv|."""
    Wv = _weighted(v, params)
    pairing = inner(convolve_advection_exact(v, Wv), Wv)
    l1 = float(np.sum(np.sqrt(np.sum(np.abs(v.coeffs) ** 2, axis=0))))
    grad = math.sqrt(float(np.sum(v.lattice.k2 * np.abs(Wv.coeffs) ** 2)))
    scale = l1 * grad * math.sqrt(float(np.sum(np.abs(Wv.coeffs) ** 2)))
    return abs(pairing) / scale if scale > 0 else 0.0


def _ensemble_report(id_, spec, params, ratio_fn, threshold, extra_params=None, stability=None):
    ratios = np.array([ratio_fn(i) for i in range(spec.n_samples)])
    i = int(np.argmax(ratios))
    sup = float(ratios[i])
    details = {"ratios_max_first_half": float(ratios[: max(1, spec.n_samples // 2)].max())}
    if stability is None:
        ok = bool(np.isfinite(sup) and sup <= threshold)
    else:
        half = details["ratios_max_first_half"]
        drift = sup / half - 1.0 if half > 0 else (0.0 if sup == 0 else math.inf)
        details["doubling_drift"] = drift
        ok = bool(np.isfinite(sup) and drift <= stability)
    p = {"s": params.s, "r": params.r, "tau": params.tau, "ensemble": spec.to_dict()}
    p.update(extra_params or {})
    return CertificationReport(
        id=id_, params=p, seed=spec.seed, n_samples=spec.n_samples, sup_ratio=sup,
        witness={"index": i}, threshold=threshold if stability is None else stability,
        verdict=_verdict(ok), details=details,
    )


def certify_cancellation(spec: EnsembleSpec, params: GevreyParams,
                         threshold: float = 1e-10) -> CertificationReport:
    """The transport pairing vanishes for divergence-free fields (exact convolution only)."""
    return _ensemble_report("cancellation", spec, params,
                            lambda i: cancellation_ratio(spec.member(i), params), threshold)


# --- trilinear Gevrey estimate with C = 1 on the right-hand side

def trilinear_sides(v: SpectralVectorField, params: GevreyParams) -> tuple[float, float]:
    """(LHS, RHS) of the trilinear Gevrey estimate, RHS with unit constant."""
    Wv = _weighted(v, params)
    W_adv = _weighted(convolve_advection_exact(v, v), params)
    lhs = abs(inner(W_adv, Wv))
    hr = sobolev_norm(v, params.r)
    g = gevrey_norm(v, params)
    g_half = gevrey_norm(v, GevreyParams(params.s, params.r + 0.5 / params.s, params.tau))
    tau = params.tau
    rhs = hr * g**2 + hr**2 * g + (tau * hr + tau**2 * (hr + g)) * g_half**2
    return lhs, rhs


def trilinear_ratio(v, params) -> float:
    lhs, rhs = trilinear_sides(v, params)
    return lhs / rhs if rhs > 0 else 0.0


def certify_trilinear_bound(spec: EnsembleSpec, params: GevreyParams,
                            stability: float = 0.2) -> CertificationReport:
    """Empirical constant sup(LHS/RHS); passes if finite and stable under doubling.

    Stability compares the supremum over the first half of the ensemble with
    the supremum over the whole ensemble.
    """
    return _ensemble_report("trilinear_bound", spec, params,
                            lambda i: trilinear_ratio(spec.member(i), params),
                            math.inf, stability=stability)


# --- pressure estimates

def certify_pressure_bound(spec: EnsembleSpec, params: GevreyParams,
                           stability: float = 0.2) -> CertificationReport:
    """sup |p|_{G_{r+1}} / |u|^2_{G_r} over the ensemble, stable under doubling."""
    def ratio(i):
        u = spec.member(i)
        return pressure_bound_check(u, recover_pressure(u), params)
    return _ensemble_report("pressure_bound", spec, params, ratio, math.inf, stability=stability)


def pressure_difference_ratio(u, u_nu, params: GevreyParams) -> float:
    """|p(u_nu) - p(u)|_{G_r} / (G |u_nu - u|_{G_{r-1}}) with G the larger G_r norm."""
    w = u_nu - u
    p_tilde = recover_pressure(u_nu) - recover_pressure(u)
    G = max(gevrey_norm(u, params), gevrey_norm(u_nu, params))
    wn = gevrey_norm(w, GevreyParams(params.s, params.r - 1, params.tau))
    if wn == 0 or G == 0:
        return 0.0
    return gevrey_norm(p_tilde, params) / (G * wn)


def certify_pressure_difference(spec: EnsembleSpec, params: GevreyParams, delta: float = 0.1,
                                stability: float = 0.2) -> CertificationReport:
    """Ensemble of pairs ``u`` and ``u + delta * w``; empirical constant and its stability."""
    def ratio(i):
        u = spec.member(i, 0)
        return pressure_difference_ratio(u, u + delta * spec.member(i, 1), params)
    return _ensemble_report("pressure_difference", spec, params, ratio, math.inf,
                            extra_params={"delta": delta}, stability=stability)


def reevaluate_witness(report: CertificationReport) -> float:
    """Recompute the ratio at the reported witness, independently of the search."""
    p, w = report.params, report.witness
    if report.id == "scalar_gevrey":
        return float(scalar_gevrey_ratio(w["xi"], w["eta"], p["s"]))
    if report.id == "lattice_triangle":
        return triangle_ratio(w["j"], w["k"])
    if report.id == "elementary_exp":
        first, second = exp_ratios(np.array([w["xi"]]))
        return float(first[0] if w["inequality"] == "exp_quadratic" else second[0])
    spec = EnsembleSpec(**{**p["ensemble"], "decay": tuple(p["ensemble"]["decay"])})
    params = GevreyParams(p["s"], p["r"], p["tau"])
    i = w["index"]
    if report.id == "cancellation":
        return cancellation_ratio(spec.member(i), params)
    if report.id == "trilinear_bound":
        return trilinear_ratio(spec.member(i), params)
    if report.id == "pressure_bound":
        u = spec.member(i)
        return pressure_bound_check(u, recover_pressure(u), params)
    if report.id == "pressure_difference":
        u = spec.member(i, 0)
        return pressure_difference_ratio(u, u + p["delta"] * spec.member(i, 1), params)
    raise ValueError(f"unknown report id {report.id!r}")
