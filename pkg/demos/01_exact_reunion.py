# coding: utf-8

# # Exact reunion probabilities
#
# N non-intersecting Brownian walkers start together, and we ask for the
# probability that they meet again at time 1 while confined to a box of
# width L. Three boundary conditions are available: a ring (periodic), hard
# walls (absorbing) and reflecting walls. Each value is normalized by the same
# event on the infinite line.

# In[1]:


from reunion import ReunionQuery, hankel_reunion, brute_force_reunion, g1_poisson_dual
from reunion.exact_sums import reunion, reunion_via_partition


# The symmetric N-fold lattice sum collapses to an N x N Hankel determinant of
# one-dimensional moments, evaluated in multiprecision.

# In[2]:

for model in ("periodic", "absorbing", "reflecting"):
    row = [reunion(model, 3, L) for L in (1.0, 2.0, 4.0, 8.0)]
    print(f"{model:>10}", " ".join(f"{v:.6e}" for v in row))


# For a handful of walkers the nested sum can be done directly, which gives
# an independent check.

# In[3]:

q = ReunionQuery("absorbing", 3, 2.0)
print(float(hankel_reunion(q).value), float(brute_force_reunion(q).value))


# Hard walls make the normalized value a CDF: it is the law of the maximal
# height reached by a watermelon of N excursions.

# In[4]:

for L in (2.0, 3.0, 4.0, 5.0, 6.0):
    print(L, reunion("absorbing", 4, L))


# On the ring a single walker gives a theta function, whose Poisson dual is
# the sum over winding numbers.

# In[5]:

L = 1.7
print(float(hankel_reunion(ReunionQuery("periodic", 1, L)).value), float(g1_poisson_dual(L).value))


# The same sums are partition functions of two-dimensional Yang-Mills on the
# sphere with gauge groups U(N), Sp(2N) and SO(2N).

# In[6]:

for model in ("periodic", "absorbing", "reflecting"):
    print(model, reunion(model, 2, 1.5), float(reunion_via_partition(model, 2, 1.5)))


# Deep inside the strong-coupling side the determinant cancels many digits;
# precision is raised until two evaluations agree.

# In[7]:

r = hankel_reunion(ReunionQuery("absorbing", 12, 0.5))
print(r.value.context.dps, "digits used; value", r.value.context.nstr(r.value, 15))
