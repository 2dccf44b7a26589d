# The fractional operator attains its constant exactly on
# f0(r) = (1 + r^{qβ})^{-(1 + n/(qβ))}; its adjoint attains the dual constant on
# (H_β f0)^{p'-1}, written out in closed form as g0.
import math

from mixhardy import FractionalConfig, fractional_core_constant, sharp_fractional_constant
from mixhardy.sharpness import dual_fractional_row, fractional_row

configs = [
    FractionalConfig(n=2, beta=1.0, p=4 / 3, q=4.0, p_bar=2.0, q_bar=2.0),
    FractionalConfig(n=3, beta=1.0, p=1.5, q=3.0, p_bar=3.0, q_bar=3.0),
    FractionalConfig(n=3, beta=1.5, p=4 / 3, q=4.0, p_bar=2.0, q_bar=5.0),
]

for c in configs:
    core = fractional_core_constant(c.p, c.q, c.n, c.beta)
    row = fractional_row(c)
    dual = dual_fractional_row(c)
    print(f"n={c.n} β={c.beta:g} p={c.p:.4g} q={c.q:g}  core={core:.10f}")
    print(f"   H_β : ratio {row.numerical_ratio:.12f}  constant {row.closed_form_constant:.12f}"
          f"  gap {row.relative_gap:+.1e}")
    print(f"   H*_β: ratio {dual.numerical_ratio:.12f}  constant {dual.closed_form_constant:.12f}"
          f"  gap {dual.relative_gap:+.1e}")

# n=2, β=1, p=4/3, q=4: core constant 2/√π and mixed constant 2√2
print(2 / math.sqrt(math.pi), 2 * math.sqrt(2), sharp_fractional_constant(configs[0]))
