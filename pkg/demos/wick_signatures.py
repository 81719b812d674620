"""Sweep the Wick parameter and watch the metric change causal character.

g_kappa = phi + kappa (phi.y) x (phi.y) / L interpolates between the
Euclidean fundamental tensor (kappa = 0), a degenerate metric (kappa = -1),
and a Lorentzian one (kappa < -1).  The ladder identity
destroy_residues(g) = (1 + kappa) phi holds across the whole sweep.
"""

import numpy as np

from anifield import (DegeneracyError, DiffEngine, destroy_residues,
                      lagrangian_of_metric, signature_at, wick_metric)
from anifield.catalog import get_example

engine = DiffEngine("analytic")
euc = get_example("euclidean2")
phi = euc.lagrangian.phi_field()
x = np.zeros(2)
v = np.array([1.0, 0.0])

print(f"{'kappa':>6}  {'signature':>11}  {'destroy vs (1+k)phi':>20}  check_at")
for kappa in (1.0, 0.5, 0.0, -0.5, -1.0, -1.5, -2.0):
    g = wick_metric(euc.lagrangian, kappa)
    sig = signature_at(g, x, v)
    flattened = destroy_residues(g.field, engine=engine)
    defect = np.max(np.abs(flattened(x, v) - (1.0 + kappa) * phi(x, v)))
    try:
        g.check_at(x, v)
        status = "regular"
    except DegeneracyError:
        status = "degenerate"
    print(f"{kappa:>6}  {str(sig):>11}  {defect:>20.2e}  {status}")

print("\nground-floor energies, y = (3, 4):")
for kappa in (0.0, -2.0):
    g = wick_metric(euc.lagrangian, kappa)
    E = lagrangian_of_metric(g)
    print(f"  kappa = {kappa:+}: (1/2) g(y, y) = {E(x, np.array([3.0, 4.0])):g}"
          f"  (= (1 + kappa) L / 2)")
