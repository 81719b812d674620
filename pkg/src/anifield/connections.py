"""Sprays, nonlinear connections, and their anisotropic refinements.

The three levels form their own ladder:

    Spray G^i (alpha = 2)  <-dv/iota->  N^i_j (alpha = 1)  <-dv/iota->  Gamma^i_jk (alpha = 0)

raising is vertical differentiation, lowering is a normalized Liouville
contraction, and lowering after raising is the identity.  The canonical
spray of a Lagrangian feeds the Berwald and Chern constructions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LevelError, ShapeError
from .fields import (add, liouville_contract, reindex, scale, subtract,
                     tensor_product, vertical_derivative, x_derivative)


def _check(field, r, s, alpha, what):
    if field.rank != (r, s) or float(field.alpha) != float(alpha):
        raise ShapeError(
            f"{what} needs a type-({r}, {s}) field of homogeneity {alpha}, "
            f"got ({field.r}, {field.s}) at alpha={field.alpha:g}")


class Spray:
    """Second-order vector field data: coefficients G^i(x, y), 2-homogeneous."""

    def __init__(self, coefficients, name=""):
        _check(coefficients, 1, 0, 2, "a spray")
        self.coefficients = coefficients
        self.name = name or coefficients.name

    def __call__(self, x, y):
        return self.coefficients(x, y)


class NonlinearConnection:
    """Horizontal-splitting data: coefficients N^i_j(x, y), 1-homogeneous."""

    def __init__(self, coefficients, name=""):
        _check(coefficients, 1, 1, 1, "a nonlinear connection")
        self.coefficients = coefficients
        self.name = name or coefficients.name

    def __call__(self, x, y):
        return self.coefficients(x, y)


class AnisotropicConnection:
    """Christoffel-type coefficients Gamma^i_jk(x, y), 0-homogeneous."""

    def __init__(self, coefficients, name=""):
        _check(coefficients, 1, 2, 0, "an anisotropic connection")
        self.coefficients = coefficients
        self.name = name or coefficients.name

    def __call__(self, x, y):
        return self.coefficients(x, y)


def raise_connection(obj, engine=None):
    """One rung up: spray -> nonlinear, nonlinear -> anisotropic."""
    if isinstance(obj, Spray):
        return NonlinearConnection(
            vertical_derivative(obj.coefficients, engine),
            name=f"dv({obj.name})")
    if isinstance(obj, NonlinearConnection):
        return AnisotropicConnection(
            vertical_derivative(obj.coefficients, engine),
            name=f"dv({obj.name})")
    raise LevelError("nothing sits above an anisotropic connection")


def lower_connection(obj):
    """One rung down: anisotropic -> nonlinear, nonlinear -> spray."""
    if isinstance(obj, AnisotropicConnection):
        return NonlinearConnection(
            liouville_contract(obj.coefficients), name=f"iota({obj.name})")
    if isinstance(obj, NonlinearConnection):
        return Spray(scale(liouville_contract(obj.coefficients), 0.5),
                     name=f"iota({obj.name})")
    raise LevelError("nothing sits below a spray")


def nonlinear_residue(N, engine=None):
    """Failure of N to come from its own spray: Delta = N - dv((1/2) iota N).

    Equals half the torsion hooked with y, and is killed by iota.
    """
    rebuilt = raise_connection(lower_connection(N), engine)
    return subtract(N.coefficients, rebuilt.coefficients,
                    name=f"residue({N.name})")


def torsion(N, engine=None):
    """Antisymmetrized vertical derivative Tor^i_jk = dN^i_j/dy^k - dN^i_k/dy^j."""
    dN = vertical_derivative(N.coefficients, engine)
    return subtract(dN, reindex(dN, "ijk->ikj"), name=f"torsion({N.name})")


def canonical_spray(L, engine=None):
    """Geodesic spray of a Lagrangian.

    G^i = (1/4) phi^{ic} (2 dphi_cb/dx^a - dphi_ab/dx^c) y^a y^b using the
    symmetry of phi; reduces to the Christoffel quadratic form in the
    Riemannian case.  Degenerate phi raises at evaluation, naming the sample.
    """
    from .metrics import fundamental_tensor

    metric = fundamental_tensor(L)
    H = x_derivative(metric.field, engine)          # H[c, b, a] = dphi_cb/dx^a
    hooked = _hook_twice(H, L.domain)               # both metric slots closed with y
    t1 = hooked                                     # dphi_cb/dx^a y^a y^b -> index c
    t3 = reindex_hook(H, L.domain)                  # dphi_ab/dx^c y^a y^b -> index c
    rhs = subtract(scale(t1, 2.0), t3)
    G = scale(tensor_product(metric.inverse_field(), rhs, "ic,c->i", 1, 0),
              0.25, name=f"spray({L.name})")
    return Spray(G)


def _hook_twice(H, domain):
    from .fields import liouville_field

    C = liouville_field(domain)
    once = tensor_product(H, C, "cba,a->cb", 0, 2)
    return tensor_product(once, C, "cb,b->c", 0, 1)


def reindex_hook(H, domain):
    from .fields import liouville_field

    C = liouville_field(domain)
    once = tensor_product(H, C, "abc,a->bc", 0, 2)
    return tensor_product(once, C, "bc,b->c", 0, 1)


def berwald_connection(L, engine=None):
    """Twice the vertical derivative of the canonical spray."""
    N = raise_connection(canonical_spray(L, engine), engine)
    gamma = raise_connection(N, engine)
    gamma.coefficients.name = f"berwald({L.name})"
    return gamma


def chern_connection(L, engine=None):
    """Horizontal Christoffel symbols of the fundamental tensor.

    Gamma^i_jk = (1/2) phi^{il} (delta_j phi_lk + delta_k phi_lj
    - delta_l phi_jk) with delta_j = d/dx^j - N^a_j d/dy^a taken along the
    canonical nonlinear connection.
    """
    from .metrics import fundamental_tensor

    metric = fundamental_tensor(L)
    N = raise_connection(canonical_spray(L, engine), engine)
    Hx = x_derivative(metric.field, engine)
    dphi = vertical_derivative(metric.field, engine)
    slanted = tensor_product(N.coefficients, dphi, "aj,lka->lkj", 0, 3)
    delta_phi = reindex(subtract(Hx, slanted), "lkj->ljk")   # delta_j phi_lk
    sym = add(delta_phi, reindex(delta_phi, "lkj->ljk"))
    full = subtract(sym, reindex(delta_phi, "jlk->ljk"))
    gamma = scale(tensor_product(metric.inverse_field(), full,
                                 "il,ljk->ijk", 1, 2),
                  0.5, name=f"chern({L.name})")
    return AnisotropicConnection(gamma)


def landsberg_tensor(L, engine=None):
    """Gap between the Chern and Berwald constructions; iota kills it."""
    chern = chern_connection(L, engine)
    berwald = berwald_connection(L, engine)
    return subtract(chern.coefficients, berwald.coefficients,
                    name=f"landsberg({L.name})")


@dataclass
class Trajectory:
    """Integrated geodesic samples; `completed` is False if the curve left
    the domain and was truncated."""

    points: list
    completed: bool

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def geodesic_integrate(spray, x0, y0, dt, steps):
    """Classical fourth-order Runge-Kutta on x' = y, y' = -2 G(x, y).

    Returns a Trajectory of (x, y) pairs including the initial state.  If a
    stage or a step lands outside the spray's domain the curve is truncated
    there and flagged.
    """
    G = spray.coefficients
    domain = G.domain
    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(y0, dtype=float).copy()
    if not domain.contains(x, y):
        raise DomainError("geodesic initial state is outside the domain")
    points = [(x.copy(), y.copy())]

    def rhs(xc, yc):
        if not domain.contains(xc, yc):
            raise DomainError("stage point left the admissible cone")
        return yc, -2.0 * G(xc, yc)

    for _ in range(int(steps)):
        try:
            k1x, k1y = rhs(x, y)
            k2x, k2y = rhs(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y)
            k3x, k3y = rhs(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y)
            k4x, k4y = rhs(x + dt * k3x, y + dt * k3y)
        except DomainError:
            return Trajectory(points, completed=False)
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (dt / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        if not domain.contains(x, y):
            return Trajectory(points, completed=False)
        points.append((x.copy(), y.copy()))
    return Trajectory(points, completed=True)
