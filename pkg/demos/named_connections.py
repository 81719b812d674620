"""Canonical objects of a conformal metric, from the spray up to the
classical linear connections."""

import numpy as np

from anifield import (DiffEngine, berwald_connection, canonical_spray,
                      cartan_tensor, chern_connection, classical_linear,
                      covariant_derivative, is_strongly_regular,
                      landsberg_tensor, liouville_field, raise_connection)
from anifield.catalog import get_example

engine = DiffEngine("analytic")
conformal = get_example("conformal2")
L = conformal.lagrangian
x = np.array([0.3, -0.1])
y = np.array([1.0, 2.0])

G = canonical_spray(L, engine)
print("canonical spray G(x, y) =", G.coefficients(x, y))
print("closed form             =",
      np.array([0.5 * (y[0] ** 2 - y[1] ** 2), y[0] * y[1]]),
      "(the conformal factor cancels)")

N = raise_connection(G, engine)
print("\nnonlinear N = dv G      =\n", N.coefficients(x, y))

ber = berwald_connection(L, engine)
che = chern_connection(L, engine)
print("\nBerwald coefficients (constant Levi-Civita symbols):")
print(ber.coefficients(x, y))
print("max |Chern - Berwald|   =",
      np.max(np.abs(che.coefficients(x, y) - ber.coefficients(x, y))))

lan = landsberg_tensor(L, engine)
print("max |Landsberg|         =", np.max(np.abs(lan(x, y))),
      "(Riemannian, so zero)")

print("\nclassical linear connections:")
C = liouville_field(conformal.domain)
for kind in ("berwald", "chern", "hashiguchi", "cartan"):
    conn = classical_linear(L, kind, engine)
    regular = is_strongly_regular(conn, x, y)
    horizontal = covariant_derivative(
        conn, (np.array([1.0, 0.0]), np.zeros(2)), C, x, y, engine)
    print(f"  {kind:>10}: strongly regular = {regular}, "
          f"|grad_h C| = {np.max(np.abs(horizontal)):.1e}")

quartic = get_example("quartic2")
Cq = cartan_tensor(quartic.lagrangian, engine)
print("\nquartic Cartan tensor at y = (1, 2):\n", Cq(x, y))
print("Cartan at y = (1, 1) (Riemannian direction):",
      np.max(np.abs(Cq(x, np.array([1.0, 1.0])))))
