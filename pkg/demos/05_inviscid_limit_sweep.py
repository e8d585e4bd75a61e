"""Vanishing-viscosity sweep at reduced size (the full run is the CLI ``sweep``).

Run:  python3 demos/05_inviscid_limit_sweep.py
Full: gevrey-ns sweep --config demos/configs/sweep_2d.json
"""

from gevrey_ns.config import ExperimentConfig
from gevrey_ns.experiment import all_verdicts, run_sweep, sqrt_nu_reference

cfg = ExperimentConfig(s=2, r=5, tau0=0.5, dim=2, N=20, T=0.25, dt=2e-3)
res = run_sweep(cfg)
print(f"schedule {res.schedule.to_dict()}")
print(f"{'nu':>10} {'|w|_G(r-1)':>12} {'|p~|_G(r)':>12} {'M_T':>10} {'sqrt(nu)':>10}")
for row, ref in zip(res.rows, sqrt_nu_reference(res.nus)):
    print(f"{row['nu']:10.3e} {row['w_gevrey_rm1']:12.4e} {row['p_gevrey_r']:12.4e} "
          f"{row['M_T']:10.3e} {ref:10.3e}")
print(f"velocity slope {res.velocity_fit.slope:.3f}, pressure slope {res.pressure_fit.slope:.3f}")
for v in all_verdicts(res):
    print(f"  {v.name:24s} {'pass' if v.passed else 'FAIL'}")
