"""Finding several change points.

The best candidate of the whole series is tested; if significant the series
is cut there and both halves are searched again, until segments become
shorter than 2 * n_min or no candidate is significant.

    python demos/04_search_and_split.py
"""

import numpy as np

from netchange import BootstrapConfig, DetectionConfig, binary_segment
from netchange.simulation import generate, make_setting

rng = np.random.default_rng(4)
setting = make_setting(3, p=60, T=450, rng=rng)
Y = generate(setting, rng)
print("planted change points:", setting.change_points)

report = binary_segment(Y, DetectionConfig(k=3, n_min=50, seed=4), BootstrapConfig(n_resamples=200, seed=4))

print("\ntests in visiting order:")
for t in report.tests:
    verdict = "significant" if t.significant else "not significant"
    print(f"  segment {t.segment.start:3d}-{t.segment.end:3d}: split after {t.position:3d}, "
          f"gamma {t.gamma_observed:.3f} vs c_alpha {t.c_alpha:.3f} -> {verdict}")

print("\ndetected change points:", report.change_points)
print("segments:", [(s.start, s.end) for s in report.segments()])
