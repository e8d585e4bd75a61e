"""Taylor-Green and Beltrami flows against their closed forms.

Run:  python3 demos/03_exact_solutions.py
"""

import numpy as np

from gevrey_ns import (
    SolverConfig,
    TruncatedLattice,
    exact_solution_library,
    integrate,
    l2_norm,
    recover_pressure,
)

nu, T = 1e-2, 1.0
for name, lat in [("taylor_green_2d", TruncatedLattice(2, 8)), ("beltrami_3d", TruncatedLattice(3, 4))]:
    ex = exact_solution_library(name, lat)
    tr = integrate(SolverConfig(nu=nu, lattice=lat, dt=1e-3, T=T), ex.initial)
    ref = ex.velocity(T, nu)
    err = l2_norm(tr.final - ref) / l2_norm(ref)
    print(f"{name:16s} status={tr.status}  |u(T)|/|u0| = {tr.l2[-1] / tr.l2[0]:.10f}"
          f"  (closed form {np.exp(-nu * ex.eigenvalue * T):.10f})  rel err {err:.1e}")

ex = exact_solution_library("taylor_green_2d", TruncatedLattice(2, 8))
p = recover_pressure(ex.initial)
print("Taylor-Green pressure coefficient at k=(2,0):", p.mode((2, 0)).real, "(expected -0.125)")
