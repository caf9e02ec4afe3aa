# coding: utf-8

# # Third-order transition and large deviations
#
# At large N the ring probability is a Yang-Mills partition function with
# coupling A = pi^2 / r^2, r = L / (2 sqrt N). The free energy switches branch
# at A = pi^2 and the difference between branches starts at third order.

# In[1]:

import math

from reunion.large_dev import (
    PI2, ldf_curve, tail_formulas, third_derivative_at_threshold,
)
from reunion.painleve_tw import solve_hastings_mcleod, tw_cdf
from reunion.scaling_limits import log_reunion, residual_sign, right_tail_prediction


# In[2]:

curve = ldf_curve([PI2 * s for s in (0.5, 0.9, 1.0, 1.2, 1.5, 2.0)])
print(curve.to_csv())


# Finite differences of F_+ - F_- at the threshold.

# In[3]:

for h, d1, d2, d3 in third_derivative_at_threshold((0.2, 0.1, 0.05, 0.025)):
    print(h, f"{d1:+.2e} {d2:+.2e} {d3 * math.pi**6:+.4f} (x pi^-6)")


# Left tail: log G is about N^2 (F_+ - F_-).

# In[4]:

N, r = 32, 0.8
print(log_reunion("periodic", N, 2 * r * math.sqrt(N)), tail_formulas("periodic", N, r))


# Right tail: 1 - G is exponentially small with sign (-1)^N on the ring, so
# the finite-N value overshoots or undershoots the limit depending on parity.
# Between walls it stays a CDF and does not alternate.

# In[5]:

sol = solve_hastings_mcleod(-10.0, 8.0)
f2, f1 = tw_cdf(sol, 2), tw_cdf(sol, 1)
for N in (12, 13):
    print(N, residual_sign("periodic", N, 1.3, f2), residual_sign("absorbing", N, 1.3, f1))
    L = 2 * 1.3 * math.sqrt(N)
    print("   1 - G:", 1 - math.exp(log_reunion("periodic", N, L)), "predicted", right_tail_prediction(N, 1.3))
