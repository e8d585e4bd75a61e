"""Gevrey norms of random data and the shrinking analyticity radius.

Run:  python3 demos/02_gevrey_norms_and_radius.py
"""

import numpy as np

from gevrey_ns import (
    AprioriConstants,
    GevreyParams,
    RadiusSchedule,
    TruncatedLattice,
    gevrey_norm,
    l2_norm,
    random_divfree_field,
    sobolev_norm,
    tau_ode_residual,
)

lat = TruncatedLattice(3, 8)
u = random_divfree_field(lat, decay=(1.0, 2.0, 6.0), seed=1)
print(f"|u|_L2 = {l2_norm(u):.4f}   |u|_H5 = {sobolev_norm(u, 5):.4f}")
for tau in (0.0, 0.25, 0.5, 0.75):
    print(f"  tau={tau:4.2f}  |u|_G(s=2, r=5) = {gevrey_norm(u, GevreyParams(2, 5, tau)):.4f}")

# tau(t) closes the radius inequality once C_T and G_T are known
consts = AprioriConstants(C_T=sobolev_norm(u, 5), G_T=gevrey_norm(u, GevreyParams(2, 5, 0.5)),
                          M_T=0.0)
sched = RadiusSchedule.from_constants(0.5, consts)
t = np.linspace(0.0, 1.0, 6)
print("\nradius schedule:", sched.to_dict())
for ti, tau in zip(t, sched(t)):
    print(f"  t={ti:.1f}  tau={tau:.5f}")
res = tau_ode_residual(sched, np.linspace(0, 1, 100), consts)
print(f"max |ODE residual| on 100 points: {np.abs(res).max():.2e}")
