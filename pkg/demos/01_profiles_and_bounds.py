"""Profiles, deficits and the sharp perimeter bound.

Run with ``python demos/01_profiles_and_bounds.py``.
"""
# %% Profiles of the built-in measures
import numpy as np

from isodeficit import (Gaussian, Laplace, Logistic, deficit, lower_bound_perimeter,
                        optimal_set, parse_set, perimeter)

measures = [Gaussian(), Logistic(), Laplace()]
ts = np.linspace(0.05, 0.5, 10)
for m in measures:
    print(f"{m.kind.value:9s}", " ".join(f"{m.profile(t):.4f}" for t in ts))

# %% Deficit of a symmetric interval
g = Gaussian()
rep = deficit(parse_set("(-1,1)"), g)
print(f"mu={rep.mu:.6f} lambda={rep.lambda_:.6f} P={rep.perimeter:.6f} "
      f"J(mu)={rep.j_at_mu:.6f} delta={rep.delta:.6f} K={rep.k_bound:.6f}")
assert rep.delta >= rep.k_bound >= rep.l_bound >= 0

# %% The bound jumps where lambda crosses m
mu = 0.3
for lam in (0.25, 0.29, 0.3, 0.31, 0.35):
    s = optimal_set(g, mu, lam)
    print(f"lambda={lam:.2f} bound={lower_bound_perimeter(g, mu, lam):.6f} "
          f"perimeter={perimeter(s, g):.6f} set={s}")
