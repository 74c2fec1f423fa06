# %% [markdown]
# # Engine against brute force
#
# The engine never builds the composite Hamiltonian; it sums phases over
# the output spectrum.  The oracle builds the dense Hamiltonian, propagates
# with a matrix exponential and takes the inner product of the two
# conditional output states.  They should agree to rounding.

# %%
import numpy as np

from entbound.amplitude import overlap
from entbound.oracle import overlap_via_oracle
from entbound.spectral import random_scenario

rng = np.random.default_rng(7)
worst = 0.0
for _ in range(25):
    s = random_scenario(rng, int(rng.integers(2, 7)), int(rng.integers(2, 7)))
    for t in rng.uniform(0, 15, 10):
        for pr in s.pairs:
            worst = max(worst, abs(complex(overlap(s, pr, t)) - overlap_via_oracle(s, pr, t)))
print(f"max deviation {worst:.2e}")
