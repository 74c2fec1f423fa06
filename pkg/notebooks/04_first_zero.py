# %% [markdown]
# # Searching for the first zero
#
# When the output weights are unbalanced the overlap can dip without ever
# vanishing.  With weights 0.3 and 0.7 on b = 2 and b = -1 the modulus
# bottoms out at 0.4 at t = pi/3, and the search reports no zero along with
# the closest approach.  Loosening the tolerance turns that dip into a hit.

# %%
import math

from entbound.oracle import first_zero_search
from entbound.spectral import InputRegisterSpec, OutputRegisterSpec, Scenario

inp = InputRegisterSpec.build([("0", 0.0, 0.0), ("1", 0.0, 1.0)], {"0": math.sqrt(0.5), "1": math.sqrt(0.5)})
out = OutputRegisterSpec.build([("hi", 0.0, 2.0), ("lo", 0.0, -1.0)], {"hi": math.sqrt(0.3), "lo": math.sqrt(0.7)})
s = Scenario.build(inp, out, 1.0)

res = first_zero_search(s, ("0", "1"))
print("found:", res.found, " min |z| =", round(res.min_abs_z, 9), " at t =", res.min_location,
      " (pi/3 =", math.pi / 3, ")")

# %%
for tol in (0.5, 0.45, 0.41):
    r = first_zero_search(s, ("0", "1"), tol=tol)
    print(f"tol={tol}: tau_num={r.tau_num}")
