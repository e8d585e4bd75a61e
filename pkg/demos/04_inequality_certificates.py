"""Numerical certificates with re-evaluable witnesses.

Run:  python3 demos/04_inequality_certificates.py
"""

from gevrey_ns import GevreyParams
from gevrey_ns.inequalities import (
    EnsembleSpec,
    certify_cancellation,
    certify_elementary_exp,
    certify_lattice_triangle,
    certify_pressure_bound,
    certify_scalar_gevrey,
    certify_trilinear_bound,
    reevaluate_witness,
)

reports = [certify_scalar_gevrey(s) for s in (1.0, 1.5, 2.0, 3.0)]
reports.append(certify_lattice_triangle(10))
reports.append(certify_elementary_exp())
reports.append(certify_cancellation(EnsembleSpec(3, 4, 20), GevreyParams(2, 5, 0.2)))
reports.append(certify_trilinear_bound(EnsembleSpec(3, 4, 20), GevreyParams(2, 5, 0.2)))
reports.append(certify_pressure_bound(EnsembleSpec(2, 8, 100), GevreyParams(2, 5, 0.5)))

for r in reports:
    again = reevaluate_witness(r)
    print(f"{r.id:18s} sup={r.sup_ratio:.6e}  witness re-evaluates to {again:.6e}  -> {r.verdict}")

# Dropping the projection breaks the cancellation (positive control)
ctrl = certify_cancellation(EnsembleSpec(3, 4, 5, project=False), GevreyParams(2, 5, 0.2))
print(f"unprojected control: sup={ctrl.sup_ratio:.2e} -> {ctrl.verdict}")
