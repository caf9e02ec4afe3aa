# coding: utf-8

# # Tracy-Widom laws from Painleve II
#
# The Hastings-McLeod solution q(t) of q'' = tq + 2q^3 behaves like Ai(t)
# on the right. Both Tracy-Widom distributions come from integrals of q.

# In[1]:

import numpy as np

from reunion.painleve_tw import (
    airy, painleve_residual, solve_hastings_mcleod, tw_cdf, tw_right_tail_exponent,
)


# In[2]:

sol = solve_hastings_mcleod(-10.0, 8.0)
print("achieved tolerance", sol.tol, "digits", sol.digits)
print("max residual", painleve_residual(sol).max())
print("q(6)/Ai(6) - 1 =", sol.value_at(6.0) / airy(6.0) - 1)


# On the left, q grows like sqrt(-t/2).

# In[3]:

for t in (-4.0, -7.0, -10.0):
    print(t, sol.value_at(t), np.sqrt(-t / 2))


# GUE (beta=2) and GOE (beta=1) tables.

# In[4]:

f2 = tw_cdf(sol, 2)
f1 = tw_cdf(sol, 1)
for name, tab in (("F2", f2), ("F1", f1)):
    g, c, p, _ = tab.ascending()
    mean = np.trapezoid(g * p, g)
    print(name, "median", round(tab.quantile(0.5), 4), "mean", round(mean, 4))


# The right tail of F2 decays like exp(-4 t^{3/2} / 3), up to a power prefactor.

# In[5]:

print("fitted exponent", tw_right_tail_exponent(f2), "vs", 4 / 3)
print("far tail", f2.sf_at(10.0), f1.sf_at(10.0))
