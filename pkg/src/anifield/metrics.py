"""Energy functions, Legendre-type fields, and anisotropic metrics.

The chain runs L -> ell = dv L -> phi = (1/2) dv ell.  A Lagrangian is a
2-homogeneous scalar whose fundamental tensor phi is nondegenerate on the
domain; phi itself is 0-homogeneous and symmetric, and satisfies
phi . y = (1/2) ell.
"""

import numpy as np

from .errors import DegeneracyError, ShapeError
from .fields import (DEFAULT_ENGINE, add, liouville_contract, liouville_field,
                     matrix_inverse, scalar_reciprocal, scale, subtract,
                     tensor_product, vertical_derivative)
from .ladder import project_kernel


class Lagrangian:
    """2-homogeneous scalar energy on a conic domain."""

    def __init__(self, field, engine=None, name=""):
        if field.rank != (0, 0):
            raise ShapeError("a Lagrangian is a scalar field")
        if float(field.alpha) != 2.0:
            raise ShapeError(
                f"a Lagrangian is 2-homogeneous, got alpha={field.alpha:g}")
        self.field = field
        self.engine = engine or DEFAULT_ENGINE
        self.name = name or field.name
        self._ell = None
        self._phi = None

    @property
    def domain(self):
        return self.field.domain

    def ell_field(self):
        if self._ell is None:
            self._ell = vertical_derivative(self.field, self.engine)
        return self._ell

    def phi_field(self):
        if self._phi is None:
            self._phi = scale(
                vertical_derivative(self.ell_field(), self.engine), 0.5,
                name=f"phi({self.name})")
        return self._phi

    def __call__(self, x, y):
        return float(self.field(x, y))


class LegendreField:
    """A (0, 1) field of homogeneity 1; the gradient shape of an energy."""

    def __init__(self, field, name=""):
        if field.rank != (0, 1) or float(field.alpha) != 1.0:
            raise ShapeError(
                "a Legendre-type field has type (0, 1) and homogeneity 1")
        self.field = field
        self.name = name or field.name

    def __call__(self, x, y):
        return self.field(x, y)


class AnisotropicMetric:
    """Symmetric nondegenerate (0, 2) field, 0-homogeneous in y."""

    def __init__(self, field, name=""):
        if field.rank != (0, 2) or float(field.alpha) != 0.0:
            raise ShapeError(
                "an anisotropic metric has type (0, 2) and homogeneity 0")
        self.field = field
        self.name = name or field.name
        self._inv = None

    @property
    def domain(self):
        return self.field.domain

    def inverse_field(self):
        if self._inv is None:
            self._inv = matrix_inverse(self.field, name=f"inv({self.name})")
        return self._inv

    def __call__(self, x, y):
        return self.field(x, y)

    def check_at(self, x, y, sym_tol=1e-8):
        """Raise DegeneracyError / ShapeError if the metric misbehaves at (x, y)."""
        g = self.field(x, y)
        if not np.allclose(g, g.T, atol=sym_tol * (1.0 + np.max(np.abs(g)))):
            raise ShapeError(f"metric {self.name!r} is not symmetric at the sample")
        scaled = g / np.maximum(np.max(np.abs(g), axis=1), 1e-300)[:, None]
        if abs(np.linalg.det(scaled)) <= 1e-10:
            raise DegeneracyError(
                f"metric {self.name!r} is numerically degenerate",
                sample=(np.asarray(x).tolist(), np.asarray(y).tolist()))


def legendre_of(L):
    """The vertical gradient of a Lagrangian, wrapped as a LegendreField."""
    return LegendreField(L.ell_field(), name=f"ell({L.name})")


def fundamental_tensor(L, validate_at=None):
    """phi = (1/2) dv dv L as an AnisotropicMetric.

    `validate_at` may give (xs, ys) sample arrays; degeneracy at any of them
    raises DegeneracyError carrying the offending sample.
    """
    metric = AnisotropicMetric(L.phi_field(), name=f"phi({L.name})")
    if validate_at is not None:
        xs, ys = validate_at
        for x, y in zip(xs, ys):
            metric.check_at(x, y)
    return metric


def legendre_residue(ell, engine=None):
    """Obstruction of a (0, 1), 1-homogeneous field to being a gradient shadow.

    Delta_i = (1/2) ell_i - (1/2) y^a (dv ell)_{a i}; vanishes exactly when
    ell is the vertical gradient of its own ground-floor energy.
    """
    field = ell.field if isinstance(ell, LegendreField) else ell
    if field.rank != (0, 1):
        raise ShapeError("legendre_residue needs a type-(0, 1) field")
    dell = vertical_derivative(field, engine)
    hooked = tensor_product(
        dell, liouville_field(field.domain), "ai,a->i", 0, 1)
    return scale(subtract(field, hooked), 0.5,
                 name=f"legendre_residue({field.name})")


def kernel_residue(ell, engine=None):
    """Same obstruction, computed through the ladder kernel projection."""
    field = ell.field if isinstance(ell, LegendreField) else ell
    return project_kernel(field, 2.0, engine)


def wick_metric(L, kappa):
    """Rotate a Lagrangian's fundamental tensor toward its energy direction.

    g = phi + kappa * (phi . y) (x) (phi . y) / L, built with phi . y =
    (1/2) ell.  Evaluating where L vanishes raises DivisionError naming the
    sample.  g . y = (1 + kappa) phi . y, so the ground-floor energy of g
    is (1 + kappa) L / 2.
    """
    phi = L.phi_field()
    ell = L.ell_field()
    outer = tensor_product(ell, ell, "i,j->ij", 0, 2)
    correction = tensor_product(outer, scalar_reciprocal(L.field),
                                "ij,->ij", 0, 2)
    g = add(phi, scale(correction, float(kappa) / 4.0),
            name=f"wick({L.name},{kappa:g})")
    return AnisotropicMetric(g, name=g.name)


def lagrangian_of_metric(metric, engine=None):
    """Ground-floor energy (1/2) g(y, y) of an anisotropic metric."""
    closed = liouville_contract(liouville_contract(metric.field))
    return Lagrangian(scale(closed, 0.5, name=f"energy({metric.name})"),
                      engine=engine)


def signature_at(metric, x, y, zero_tol=1e-8):
    """Counts (n_plus, n_minus, n_zero) of eigenvalues of the metric at (x, y).

    Eigenvalues with |lambda| < zero_tol count as zero.  The components are
    symmetrized-checked first; a lopsided matrix raises ShapeError.
    """
    g = metric.field(x, y) if isinstance(metric, AnisotropicMetric) else metric(x, y)
    if not np.allclose(g, g.T, atol=1e-8 * (1.0 + np.max(np.abs(g)))):
        raise ShapeError("signature of a non-symmetric matrix is undefined")
    eigs = np.linalg.eigvalsh(0.5 * (g + g.T))
    n_zero = int(np.sum(np.abs(eigs) < zero_tol))
    n_plus = int(np.sum(eigs >= zero_tol))
    n_minus = int(np.sum(eigs <= -zero_tol))
    return (n_plus, n_minus, n_zero)
