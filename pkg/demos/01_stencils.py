# %%
# Arbitrary-order central-difference stencils and the precomputed table.
#
# A p-th derivative is estimated from 2N+1 equally spaced samples.  The
# coefficients are exact rationals; the expensive combination sums are
# enumerated once per length and reused across every offset, which is why
# the table is worth caching to disk.

from fractions import Fraction
import math

from levyhedge import apply_stencil, build_lookup_table, load_table, save_table
from levyhedge.stencil import stencil_coefficient

# %%
# The classics drop out of the general formula:
print("3-point second derivative:", [stencil_coefficient(2, 1, k) for k in (-1, 0, 1)])
print("5-point first derivative: ", [stencil_coefficient(1, 2, k) for k in range(-2, 3)])

# %%
# Build a table once, save it, reload it bit-exactly.
table = build_lookup_table(6)
save_table(table, "/tmp/demo_table.txt")
assert load_table("/tmp/demo_table.txt").entries == table.entries
print(f"table: N={table.half_width}, orders 1..{table.p_max}, "
      f"{table.work_visits} combination visits")

# %%
# Differentiate exp(t) at 0: every derivative is 1.
period = 0.05
samples = [math.exp(k * period) for k in range(-6, 7)]
for p in (1, 2, 3, 5, 8):
    est = apply_stencil(samples, p, period, table)
    print(f"d^{p} exp(0) ~ {est:.10f}   (error {abs(est - 1):.2e})")

# %%
# Polynomial exactness in rational arithmetic: monomials t^j map to
# p! * delta_{jp}, with zero float fuzz.
period_q = Fraction(1, 20)
for p in (2, 4):
    row = [apply_stencil([(Fraction(k) * period_q) ** j for k in range(-6, 7)],
                         p, period_q, table) for j in range(0, 7)]
    print(f"p={p}:", row)
