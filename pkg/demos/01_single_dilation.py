# %% [markdown]
# # A cocycle with a known answer
#
# For a single matrix D_lam = diag(lam, 1/lam) the top Lyapunov exponent is
# log(lam), and the stationary measure is the point mass on the expanding
# direction theta = 0.  The Ulam discretization should find exactly that.

# %%
import math

import numpy as np

from projlyap import Cocycle, discretize, l1_estimate, stationary, uniform_mesh
from projlyap.cocycle import D

# %% [markdown]
# Use an odd mesh so that theta = pi/2 (the repelling direction, also fixed
# by D_lam) is not a mesh point.  Otherwise it would form a second closed
# class and the chain would not be mixing.

# %%
for lam in (1.5, 2.0, 3.0):
    c = Cocycle([D(lam)])
    d = discretize(c, uniform_mesh(101))
    nu = stationary(d)
    est = l1_estimate(c, d, nu)
    print(f"lam={lam}: mass at theta=0 is {nu.weights[0]:.3g}, "
          f"estimate {est:.15f}, log(lam) {math.log(lam):.15f}")

# %% [markdown]
# Under the nearest-point map nodes move away from pi/2 towards theta = 0,
# which is the same line as theta = pi (node 10 wraps to node 0):

# %%
d = discretize(Cocycle([D(2.0)]), uniform_mesh(11))
print(np.column_stack([np.arange(11), d.fmaps[0]]))
