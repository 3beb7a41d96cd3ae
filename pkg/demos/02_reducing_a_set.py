"""Step-by-step reduction of a set to the extremal one.

Every step keeps the measure and the asymmetry and never raises the
perimeter.  Run with ``python demos/02_reducing_a_set.py``.
"""
# %% A five-interval set
import numpy as np

from isodeficit import Gaussian, lower_bound_perimeter, reduce
from isodeficit.verifier import random_set

g = Gaussian()
s = random_set(g, np.random.default_rng([7, 5]))
out, trace = reduce(s, g)
print("input   ", s)
print(f"mu={trace.initial_mu:.6f} lambda={trace.initial_lambda:.6f} "
      f"P={trace.initial_perimeter:.6f}")

# %% The trace
for step in trace.steps:
    print(f"{step.rule.value:20s} P={step.perimeter_after:.6f}  {step.set_after}")
print("output  ", out)
print("bound   ", lower_bound_perimeter(g, trace.initial_mu, trace.initial_lambda))
assert trace.violations() == []

# %% The same trace as JSON lines
print(trace.to_jsonl().splitlines()[0])
