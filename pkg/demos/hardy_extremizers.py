# Truncated power functions f_eps(r) = r^{-(n/p+eps)} on r > 1 push the
# Hardy ratio up to its sharp value as eps shrinks.
import math

import numpy as np

from mixhardy import HardyConfig, eps_lower_bound, sharp_hardy_constant
from mixhardy.sharpness import hardy_eps_rows

cfg = HardyConfig(n=2, p=2.0, p_bar_1=2.0, p_bar_2=4.0)
C = sharp_hardy_constant(cfg)
print(f"sharp constant 2(2π)^(-1/4) = {C:.10f}")

eps = np.geomspace(0.5, 1e-4, 9)
rows = hardy_eps_rows(cfg, eps)

print(f"{'eps':>10} {'lower bound':>14} {'ratio':>14} {'gap':>10}")
for r in rows:
    print(f"{r.family_param:10.2e} {r.lower_bound:14.10f} {r.numerical_ratio:14.10f} {r.relative_gap:10.2e}")

# the gap closes roughly linearly in eps
gaps = np.array([r.relative_gap for r in rows])
slope = np.polyfit(np.log(eps[-4:]), np.log(gaps[-4:]), 1)[0]
print(f"log-log slope of the gap for small eps: {slope:.3f}")

# same experiment in R^3 with p = 3, where p/(p-1) = 3/2
cfg3 = HardyConfig(3, 3.0, 4.0, 4.0)
last = hardy_eps_rows(cfg3, [1e-3])[0]
print(f"n=3, p=3: ratio {last.numerical_ratio:.8f} vs {sharp_hardy_constant(cfg3):.8f}")
print("eps -> 0 limit of the lower bound:", eps_lower_bound(1e-12, 3.0, 3), "=", 3 / 2)
print("omega factor", cfg.omega_factor, (2 * math.pi) ** -0.25)
