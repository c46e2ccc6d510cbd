"""A small simulation study.

Repeats generation and detection for one scenario, matches detections to the
truth within 10 time points, and summarises true and false positives and a
kernel density of the detected locations.

    python demos/05_simulation_study.py
"""

from netchange import BootstrapConfig, DetectionConfig, run_simulation

res = run_simulation(
    1,
    DetectionConfig(k=3, n_min=50),
    BootstrapConfig(n_resamples=100),
    reps=5,
    p=60,
    T=200,
    seed=5,
)

print("true change points:", res.true_change_points)
for i, run in enumerate(res.runs):
    print(f"  rep {i}: detected {list(run.detections)}  TP {run.tp}  FP {run.fp}  modified FP {run.mod_fp}")

m = res.metrics
print(f"\nmatched mean {m.tp_mean[0]}  sd {m.tp_sd[0]}")
print(f"TP freq {m.tp_freq:.2f}  FP freq {m.fp_freq:.2f}  modified FP freq {m.mod_fp_freq:.2f}")
if not res.kde.empty:
    print(f"density of detections peaks at t={res.kde.peak:g} (bandwidth {res.kde.bandwidth:.1f})")
