# %% [markdown]
# # Moving weight into the negative branch
#
# Keep the positive-branch sum B1 = 0.4 and grow B2 = kappa * B1.  The bound
# shrinks as the total branch sum grows, while the mean interaction energy
# falls linearly and reaches zero at kappa = 1.  So a vanishing average
# interaction does not make entanglement slow.

# %%
from pathlib import Path

from entbound import reports
from entbound.spectral import load_scenario
from entbound.sweep import SweepSpec, run_sweep, verify_monotonicity

ROOT = Path(__file__).resolve().parent.parent
template = load_scenario(ROOT / "scenarios" / "s1.yaml")
spec = SweepSpec(template, "kappa", (0.0, 0.25, 0.5, 0.75, 1.0),
                 {"B1": 0.4, "b_plus": 1.0, "b_minus": 1.0}, with_tau_num=True)
rows = run_sweep(spec)
print(reports.sweep_csv(rows, ("param", "B2", "alpha", "tau_bound", "tau_num", "mean_Hint")))

# %%
print(verify_monotonicity(rows, "tau_bound", "decreasing"))
