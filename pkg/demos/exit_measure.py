"""Where does a walk leave a centered ball?

Stop walks the moment they leave B(0, r) and look at the statistics of the
stopping points. The exit direction should be uniform on the sphere (mean
zero, covariance I/N) and the radial overshoot can never reach the step
size epsilon.
"""
import numpy as np

import ballwalk as bw

n = 50_000
r, eps = 0.3, 0.03
stats = bw.exit_measure_stats(bw.Ball((0.0, 0.0, 0.0), 1.0), (0.0, 0.0, 0.0),
                              r, eps, n, 2024)

print(f"{n} walks stopped on first exit from B(0, {r}), step size {eps}")
print(f"mean direction:      {np.round(stats.mean_direction, 4)}  (expect ~0)")
print("direction covariance (expect I/3):")
for row in stats.direction_covariance:
    print(f"   {np.round(row, 4)}")
print(f"radial overshoot:    mean {stats.radial_overshoot.mean:.5f}, "
      f"max {stats.radial_overshoot.max:.5f}  (hard bound {eps})")

stderr_dir = 1.0 / np.sqrt(3 * n)
print(f"\n4-stderr budget for each mean-direction entry: {4 * stderr_dir:.5f}")
