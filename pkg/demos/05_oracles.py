# coding: utf-8

# # Independent checks: lattice walkers and sampled excursions
#
# Two oracles that share no code with the Hankel evaluation. Lattice walkers
# are propagated exactly on a finite grid, and Brownian excursions are sampled.

# In[1]:

import warnings


from reunion import ReunionQuery, hankel_reunion
from reunion.oracles import dp_extrapolated, excursion_max_cdf, mc_excursion_max


# The lattice ratio converges like 1/M^2 in the number of sites, so one
# Richardson step between M and 2M removes the leading error.

# In[2]:

warnings.simplefilter("ignore")
for model in ("absorbing", "reflecting", "periodic"):
    coarse, fine, rich = dp_extrapolated(model, 2, 1.0, 20)
    exact = float(hankel_reunion(ReunionQuery(model, 2, 1.0)).value)
    print(f"{model:>10} M=20 {coarse:.6e} M=40 {fine:.6e} extrapolated {rich:.6e} exact {exact:.6e}")


# A standard excursion is the norm of a three-dimensional Brownian bridge;
# its maximum has the one-walker wall probability as CDF.

# In[3]:

emp = mc_excursion_max(20_000, 1000, seed=5)
for p in (0.1, 0.5, 0.9):
    L = emp.quantile(p)
    print(f"L={L:.4f} empirical {emp.at(L)[0]:.4f} exact {excursion_max_cdf(L):.4f}")
