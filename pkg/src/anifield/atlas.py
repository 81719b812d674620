"""Chart transitions, pushforwards, and cocycle checks.

A ChartTransition carries the overlap map together with analytic closures
for its Jacobian and Hessian, so pushing objects forward never requires
differentiating the chart map numerically.  Tensor fields transform slot
by slot; sprays, nonlinear connections, and anisotropic connections pick
up the inhomogeneous Hessian terms of their cocycles.
"""

import numpy as np

from .connections import (AnisotropicConnection, NonlinearConnection, Spray,
                          lower_connection, raise_connection)
from .errors import ShapeError
from .fields import (ConicDomain, TensorField, liouville_contract,
                     pivot_inverse, vertical_derivative)

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class ChartTransition:
    """Overlap map x -> xt with analytic first and second derivatives.

    forward, jacobian, hessian are functions of the source chart point x;
    inverse maps a target point back.  jacobian(x)[i, a] = d xt^i / d x^a
    and hessian(x)[i, b, c] = d^2 xt^i / d x^b d x^c.  An analytic inverse
    Jacobian is optional; partial-pivot inversion fills in when absent.
    """

    def __init__(self, forward, inverse, jacobian, hessian,
                 jacobian_inverse=None, name="transition"):
        self.forward = forward
        self.inverse = inverse
        self.jacobian = jacobian
        self.hessian = hessian
        self._jacobian_inverse = jacobian_inverse
        self.name = name

    def inverse_jacobian(self, x):
        if self._jacobian_inverse is not None:
            return np.asarray(self._jacobian_inverse(x), dtype=float)
        return pivot_inverse(np.asarray(self.jacobian(x), dtype=float))

    def push_point(self, x, y):
        """Map (x, y) to target-chart coordinates (xt, yt = J(x) y)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (np.asarray(self.forward(x), dtype=float),
                np.asarray(self.jacobian(x), dtype=float) @ y)

    def pull_point(self, xt, yt):
        x = np.asarray(self.inverse(np.asarray(xt, dtype=float)), dtype=float)
        return x, self.inverse_jacobian(x) @ np.asarray(yt, dtype=float)


def compose(second, first, name=""):
    """The transition doing `first` and then `second`."""

    def forward(x):
        return second.forward(first.forward(x))

    def inverse(xt):
        return first.inverse(second.inverse(xt))

    def jacobian(x):
        mid = np.asarray(first.forward(x), dtype=float)
        return np.asarray(second.jacobian(mid), dtype=float) @ \
            np.asarray(first.jacobian(x), dtype=float)

    def hessian(x):
        mid = np.asarray(first.forward(x), dtype=float)
        J1 = np.asarray(first.jacobian(x), dtype=float)
        H1 = np.asarray(first.hessian(x), dtype=float)
        J2 = np.asarray(second.jacobian(mid), dtype=float)
        H2 = np.asarray(second.hessian(mid), dtype=float)
        return np.einsum("ipq,pb,qc->ibc", H2, J1, J1) + \
            np.einsum("ia,abc->ibc", J2, H1)

    def jacobian_inverse(x):
        mid = np.asarray(first.forward(x), dtype=float)
        return first.inverse_jacobian(x) @ second.inverse_jacobian(mid)

    return ChartTransition(forward, inverse, jacobian, hessian,
                           jacobian_inverse,
                           name=name or f"{second.name}*{first.name}")


def _pushed_domain(domain, t):
    def membership(xt, yt):
        x, y = t.pull_point(xt, yt)
        return domain.contains(x, y)

    corners = domain.x_box.T  # rough image box, only used for sampling
    lo, hi = corners[0], corners[1]
    pts = []
    for mask in range(2 ** domain.dim):
        c = np.where([(mask >> k) & 1 for k in range(domain.dim)], hi, lo)
        pts.append(np.asarray(t.forward(c), dtype=float))
    pts = np.stack(pts)
    box = np.stack([pts.min(axis=0), pts.max(axis=0)], axis=1)
    return ConicDomain(domain.dim, membership, x_box=box,
                       y_shell=domain.y_shell,
                       name=f"{t.name}({domain.name})")


def transform_tensor(field, t):
    """Pushforward of a tensor field: J on every contravariant slot, the
    inverse Jacobian on every covariant slot, arguments pulled back."""
    r, s = field.r, field.s
    total = r + s
    domain = _pushed_domain(field.domain, t)

    old = _LETTERS[:total]
    new = _LETTERS[total:2 * total]
    factors = []
    for k in range(r):
        factors.append(f"{new[k]}{old[k]}")      # J[new, old]
    for k in range(r, total):
        factors.append(f"{old[k]}{new[k]}")      # Jinv[old, new]
    subscript = ",".join([old] + factors) + "->" + new

    def fn(xt, yt):
        x, y = t.pull_point(xt, yt)
        comp = field(x, y)
        if total == 0:
            return comp
        J = np.asarray(t.jacobian(x), dtype=float)
        Ji = t.inverse_jacobian(x)
        mats = [J] * r + [Ji] * s
        return np.einsum(subscript, comp, *mats)

    return TensorField(domain, r, s, field.alpha, fn,
                       name=f"{t.name}.{field.name}")


def transform_connection(obj, t):
    """Pushforward with the inhomogeneous cocycle of the object's level."""
    if isinstance(obj, Spray):
        field = obj.coefficients
        domain = _pushed_domain(field.domain, t)

        def fn_spray(xt, yt):
            x, y = t.pull_point(xt, yt)
            H = np.asarray(t.hessian(x), dtype=float)
            J = np.asarray(t.jacobian(x), dtype=float)
            return -0.5 * np.einsum("ibc,b,c->i", H, y, y) + J @ field(x, y)

        return Spray(TensorField(domain, 1, 0, 2.0, fn_spray,
                                 name=f"{t.name}.{obj.name}"))

    if isinstance(obj, NonlinearConnection):
        field = obj.coefficients
        domain = _pushed_domain(field.domain, t)

        def fn_nonlin(xt, yt):
            x, y = t.pull_point(xt, yt)
            H = np.asarray(t.hessian(x), dtype=float)
            J = np.asarray(t.jacobian(x), dtype=float)
            Ji = t.inverse_jacobian(x)
            return -np.einsum("ibc,bj,c->ij", H, Ji, y) + \
                np.einsum("ia,bj,ab->ij", J, Ji, field(x, y))

        return NonlinearConnection(TensorField(domain, 1, 1, 1.0, fn_nonlin,
                                               name=f"{t.name}.{obj.name}"))

    if isinstance(obj, AnisotropicConnection):
        field = obj.coefficients
        domain = _pushed_domain(field.domain, t)

        def fn_aniso(xt, yt):
            x, y = t.pull_point(xt, yt)
            H = np.asarray(t.hessian(x), dtype=float)
            J = np.asarray(t.jacobian(x), dtype=float)
            Ji = t.inverse_jacobian(x)
            return -np.einsum("ibc,bj,ck->ijk", H, Ji, Ji) + \
                np.einsum("ia,bj,ck,abc->ijk", J, Ji, Ji, field(x, y))

        return AnisotropicConnection(TensorField(domain, 1, 2, 0.0, fn_aniso,
                                                 name=f"{t.name}.{obj.name}"))

    raise ShapeError(f"no transformation rule for {type(obj).__name__}")


def coherence_defect(obj, t, xs, ys, engine=None):
    """Max gaps between operate-then-transform and transform-then-operate.

    Samples are given in the source chart and pushed forward for the
    comparison.  Pushed-forward fields carry no attached derivatives, so
    the transformed side is differentiated by stencil regardless of the
    engine method; the returned dict maps check names to worst absolute
    defects over the samples.
    """
    out = {}

    def gap(left_field, right_field):
        worst = 0.0
        for x, y in zip(xs, ys):
            xt, yt = t.push_point(x, y)
            worst = max(worst, float(np.max(np.abs(
                left_field(xt, yt) - right_field(xt, yt)))))
        return worst

    if isinstance(obj, TensorField):
        moved = transform_tensor(obj, t)
        out["vertical"] = gap(transform_tensor(vertical_derivative(obj, engine), t),
                              vertical_derivative(moved, engine))
        if obj.s >= 1:
            out["liouville"] = gap(transform_tensor(liouville_contract(obj), t),
                                   liouville_contract(moved))
        return out

    moved = transform_connection(obj, t)
    if isinstance(obj, (Spray, NonlinearConnection)):
        out["raise"] = gap(
            transform_connection(raise_connection(obj, engine), t).coefficients,
            raise_connection(moved, engine).coefficients)
    if isinstance(obj, (NonlinearConnection, AnisotropicConnection)):
        out["lower"] = gap(
            transform_connection(lower_connection(obj), t).coefficients,
            lower_connection(moved).coefficients)
    if isinstance(obj, AnisotropicConnection):
        out["vertical"] = gap(
            transform_tensor(vertical_derivative(obj.coefficients, engine), t),
            vertical_derivative(moved.coefficients, engine))
    return out
