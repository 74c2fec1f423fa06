# %% [markdown]
# # Two-level walkthrough
#
# A query register with two levels (a = 0 and a = 1) in equal superposition
# drives an output register with b = +1 and b = -1, also in equal
# superposition.  The two conditional output states start identical and
# become orthogonal when |z| first vanishes.  Here z(t) = cos t, so that
# happens at t = pi/2.

# %%
import math
from pathlib import Path

import numpy as np

from entbound.amplitude import overlap_trace
from entbound.bounds import bound_report
from entbound.oracle import first_zero_search
from entbound.spectral import load_scenario

ROOT = Path(__file__).resolve().parent.parent
s = load_scenario(ROOT / "scenarios" / "s1.yaml")
print("dimension", s.dimension, "pairs", s.pairs)

# %% [markdown]
# The overlap modulus on a coarse grid.

# %%
tr = overlap_trace(s, ("0", "1"), np.linspace(0, math.pi, 9))
for t, a in zip(tr.times, tr.abs_z):
    print(f"t={t:6.3f}  |z|={a:.6f}")

# %% [markdown]
# Lower bound from the branch split against the first numerical zero and
# the two textbook speed limits.

# %%
rep = bound_report(s)
pb = rep.pairs[0]
print(f"alpha={pb.alpha}  B1={pb.B1}  B2={pb.B2}  orientation={pb.orientation}")
print(f"tau_bound = {rep.tau_ent:.12f}   (pi/2 - 1 = {math.pi / 2 - 1:.12f})")
res = first_zero_search(s, ("0", "1"))
print(f"tau_num   = {res.tau_num:.12f}")
print(f"tau_ML    = {rep.tau_ML:.12f}")
print(f"tau_MT    = {rep.tau_MT:.12f}")
print(f"<H_int>   = {rep.mean_Hint}")
