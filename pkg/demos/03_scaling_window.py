# coding: utf-8

# # Near the critical length
#
# Around L = 2 sqrt(N) on the ring, and L = sqrt(2N) between walls, the exact
# reunion probability approaches a Tracy-Widom law in the scaled variable t.
# At accessible N the approach is slow, so this demo watches the trend.

# In[1]:

import numpy as np

from reunion.painleve_tw import solve_hastings_mcleod, tw_cdf
from reunion.scaling_limits import map_t_to_L, scaling_curve, specific_heat_check


# In[2]:

sol = solve_hastings_mcleod(-10.0, 8.0)
tw = {"periodic": tw_cdf(sol, 2), "absorbing": tw_cdf(sol, 1)}
ts = np.arange(-4.0, 3.01, 0.25)


# In[3]:

for model in ("periodic", "absorbing"):
    for N in (8, 16, 32):
        c = scaling_curve(model, N, ts, tw[model])
        print(f"{model:>9} N={N:2d} L_c={map_t_to_L(model, N, 0):.3f} sup|exact - TW| = {c.sup_distance:.4f}")


# The second derivative of log G in t tends to -q(t)^2 on the ring.

# In[4]:

for t in (-2.0, -1.0, 0.0):
    measured, target = specific_heat_check("periodic", 32, t, sol)
    print(t, round(measured, 4), round(target, 4))


# Between walls the limit is the GOE law, whose log has second derivative
# -(q^2 - q')/2.

# In[5]:

for t in (-2.0, -1.0, 0.0):
    measured, target = specific_heat_check("absorbing", 32, t, sol, q_prime_sign=-1)
    print(t, round(measured, 4), round(target, 4))
