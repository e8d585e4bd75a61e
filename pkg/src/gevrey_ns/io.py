"""JSON field records, norm/sweep CSV files and run manifests."""

from __future__ import annotations

import csv
import json
import os
import platform
from pathlib import Path

import numpy as np

from . import __version__
from .lattice import SpectralVectorField, TruncatedLattice

SWEEP_COLUMNS = ("nu", "w_gevrey_rm1", "p_gevrey_r", "w_l2", "M_T")
OUTPUT_ROOT_ENV = "GEVREY_NS_OUTPUT_ROOT"


def field_to_dict(f: SpectralVectorField) -> dict:
    """{dim, N, divergence_free, components: [[k, re, im], ...] per component}.

    Wavevectors are listed in lexicographic order; Python's float repr makes
    the JSON round trip bit-exact.
    """
    lat = f.lattice
    comps = []
    for c in f.coeffs:
        entries = []
        for k in lat.wavevectors():
            z = c[lat.index(k)]
            entries.append([list(k), float(z.real), float(z.imag)])
        comps.append(entries)
    return {"dim": lat.dim, "N": lat.N, "divergence_free": f.divergence_free, "components": comps}


def field_from_dict(d: dict) -> SpectralVectorField:
    lat = TruncatedLattice(int(d["dim"]), int(d["N"]))
    c = np.zeros((lat.dim,) + lat.shape, dtype=complex)
    if len(d["components"]) != lat.dim:
        raise ValueError("component count does not match dim")
    for comp, entries in enumerate(d["components"]):
        for k, re, im in entries:
            c[(comp,) + lat.index(k)] = complex(re, im)
    return SpectralVectorField(lat, c, bool(d.get("divergence_free", True)))


def write_field(path, f: SpectralVectorField) -> None:
    Path(path).write_text(json.dumps(field_to_dict(f)))


def read_field(path) -> SpectralVectorField:
    return field_from_dict(json.loads(Path(path).read_text()))


def fmt(x: float) -> str:
    return f"{x:.17g}"


def write_sweep_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for row in rows:
            w.writerow([fmt(row[c]) for c in SWEEP_COLUMNS])


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        data = np.array([[float(x) for x in row] for row in r])
    return header, data


def manifest(config: dict, seed, status: str, constants=None, wall_time=None, **extra) -> dict:
    out = {
        "config": config,
        "seed": seed,
        "code_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "constants": constants,
        "status": status,
        "wall_time": wall_time,
    }
    out.update(extra)
    return out


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, default=_jsonable))


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def output_root(default: str = "runs") -> Path:
    return Path(os.environ.get(OUTPUT_ROOT_ENV, default))


def nu_tag(nu: float) -> str:
    return "0" if nu == 0 else f"{nu:.6g}"
