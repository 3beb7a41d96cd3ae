"""Exponential tails: zero deficit at positive asymmetry.

For the Laplace measure the profile is linear near 0, so the sharp bound
vanishes on the whole branch ``lambda <= m`` and a small deficit says nothing
about the asymmetry.  Run with ``python demos/03_exponential_tails.py``.
"""
# %% K on the first branch
from isodeficit import K, K_inverse, Gaussian, Laplace, deficit, optimal_set

lap, g = Laplace(), Gaussian()
for y in (0.05, 0.1, 0.2, 0.3):
    print(f"y={y:.2f}  K_laplace={K(lap, 0.3, y):.3e}  K_gauss={K(g, 0.3, y):.3e}")

# %% A two-tail set with zero deficit
s = optimal_set(lap, 0.3, 0.2)
rep = deficit(s, lap)
print(s, f"lambda={rep.lambda_:.3f} delta={rep.delta:.1e}")

# %% Inverting the bound
for d in (0.0, 1e-6, 1e-3):
    print(f"deficit {d:g}: laplace lambda <= {K_inverse(lap, 0.3, d):.4f}, "
          f"gaussian lambda <= {K_inverse(g, 0.3, d):.4f}")
