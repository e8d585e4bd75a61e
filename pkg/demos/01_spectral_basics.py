"""Fields on the truncated lattice, the Leray projector and the de-aliased product.

Run:  python3 demos/01_spectral_basics.py
"""

import numpy as np

from gevrey_ns import (
    SpectralVectorField,
    TruncatedLattice,
    advection_fft,
    convolve_advection_exact,
    leray_project,
    random_divfree_field,
    to_physical,
    validate_field,
)

lat = TruncatedLattice(dim=2, N=8)
print(f"lattice: dim={lat.dim}, N={lat.N}, {lat.size} wavevectors, padded grid M={lat.padded_size()}")

# A compressible single mode breaks the divergence constraint ...
bad = SpectralVectorField.from_modes(lat, {(1, 1): (1.0, 0.0)})
print("violations before projection:", sorted({v.kind for v in validate_field(bad)}))

# ... and the projector keeps only the part orthogonal to k.
good = leray_project(bad)
print("projected amplitude at k=(1,1):", good.mode((1, 1)).real)
print("violations after projection:", validate_field(good))

# Zero padding to M >= 3N+1 makes the pseudo-spectral product exact.
u = random_divfree_field(lat, decay=(1.0, 2.0, 1.0), seed=0)
fast = advection_fft(u).coeffs
slow = convolve_advection_exact(u, u).coeffs
print(f"fft vs direct convolution: rel err {np.linalg.norm(fast - slow) / np.linalg.norm(slow):.2e}")

grid = to_physical(u)
print(f"physical samples: shape {grid.values.shape}, max |u| = {np.abs(grid.values).max():.3f}")
