"""Anisotropic tensor fields on conic subsets of the slit tangent bundle.

A field of type (r, s) assigns to every admissible pair (x, y) an array of
components with r contravariant slots first and s covariant slots after
them.  Positive homogeneity of degree alpha means T(x, lambda*y) =
lambda**alpha * T(x, y) for lambda > 0.  The vertical derivative appends
its index as the final covariant slot and lowers alpha by one; the
Liouville contraction closes the final covariant slot against y and
raises alpha by one.

Differentiation is controlled by a DiffEngine.  Fields may carry attached
derivative fields (built analytically, or assembled by the combinators in
this module through sum/product rules); the "analytic" method uses them
when present and falls back to the five-point stencil, while "fd4" always
uses the stencil.
"""

from __future__ import annotations

import numpy as np

from .errors import DegeneracyError, DivisionError, DomainError, RankError, ShapeError

_EPS = float(np.finfo(float).eps)
_CBRT_EPS = _EPS ** (1.0 / 3.0)
_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_MEMO_LIMIT = 4096
_UNSET = object()


class ConicDomain:
    """Open conic set of admissible (x, y) pairs over a coordinate box.

    Parameters
    ----------
    dim : int
        Dimension of the chart (x and y both live in R^dim).
    membership : callable
        Predicate (x, y) -> bool.  Must be invariant under y -> lambda*y
        for lambda > 0.  The slit condition y != 0 is enforced separately.
    x_box : array_like, optional
        Pairs (lo, hi) per coordinate bounding the sampling box in x.
        Defaults to [-1, 1] in every coordinate.
    y_shell : tuple, optional
        (rmin, rmax) radii for the sampling shell in y.
    excluded : iterable, optional
        Extra predicates (x, y) -> bool; a sample is rejected while any of
        them is true.  Used to keep quadrature away from thin margins near
        the boundary of the cone without shrinking the domain itself.
    """

    def __init__(self, dim, membership=None, x_box=None, y_shell=(0.5, 2.0),
                 excluded=(), name=""):
        self.dim = int(dim)
        self.membership = membership
        if x_box is None:
            x_box = [(-1.0, 1.0)] * self.dim
        self.x_box = np.asarray(x_box, dtype=float).reshape(self.dim, 2)
        self.y_shell = (float(y_shell[0]), float(y_shell[1]))
        self.excluded = tuple(excluded)
        self.name = name

    def contains(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            return False
        if not np.any(y != 0.0):
            return False
        if self.membership is None:
            return True
        return bool(self.membership(x, y))

    def sample(self, count, seed):
        """Draw `count` admissible (x, y) pairs; reproducible for a given seed."""
        rng = np.random.default_rng(seed)
        lo, hi = self.x_box[:, 0], self.x_box[:, 1]
        rmin, rmax = self.y_shell
        xs = np.empty((count, self.dim))
        ys = np.empty((count, self.dim))
        for i in range(count):
            for _ in range(4000):
                x = lo + rng.random(self.dim) * (hi - lo)
                d = rng.normal(size=self.dim)
                nrm = np.linalg.norm(d)
                if nrm < 1e-12:
                    continue
                y = (rmin + rng.random() * (rmax - rmin)) * d / nrm
                if not self.contains(x, y):
                    continue
                if any(p(x, y) for p in self.excluded):
                    continue
                xs[i], ys[i] = x, y
                break
            else:
                raise DomainError(
                    f"sampler for domain {self.name!r} exhausted its rejection "
                    f"budget; the admissible cone is too thin for the shell")
        return xs, ys


class DiffEngine:
    """Differentiation policy.

    method "analytic" uses a field's attached derivative when one exists and
    falls back to the stencil; "fd4" always uses the five-point stencil
    (-f2 + 8 f1 - 8 f-1 + f-2) / (12 h) with
    h = step_scale * eps**(1/3) * max(1, |v|_inf), the same rule in x and y.
    """

    def __init__(self, method="analytic", step_scale=1.0):
        if method not in ("analytic", "fd4"):
            raise ValueError(f"unknown differentiation method {method!r}")
        self.method = method
        self.step_scale = float(step_scale)

    def step(self, v):
        return self.step_scale * _CBRT_EPS * max(1.0, float(np.max(np.abs(v))))

    def __repr__(self):
        return f"DiffEngine(method={self.method!r}, step_scale={self.step_scale})"


DEFAULT_ENGINE = DiffEngine()


class TensorField:
    """A type-(r, s) field T(x, y) on a conic domain, alpha-homogeneous in y.

    `fn(x, y)` must return components of shape (dim,) * (r + s) with
    contravariant slots first.  `dy` and `dx` optionally attach the exact
    vertical / horizontal derivative as another TensorField (or a thunk
    producing one, resolved once); both append their index last.
    """

    __slots__ = ("domain", "r", "s", "alpha", "name", "_fn", "_dy", "_dx", "_memo")

    def __init__(self, domain, r, s, alpha, fn, dy=None, dx=None, name=""):
        self.domain = domain
        self.r = int(r)
        self.s = int(s)
        self.alpha = float(alpha)
        self.name = name
        self._fn = fn
        self._dy = dy
        self._dx = dx
        self._memo = {}

    @property
    def dim(self):
        return self.domain.dim

    @property
    def rank(self):
        return (self.r, self.s)

    def component_shape(self):
        return (self.dim,) * (self.r + self.s)

    def __call__(self, x, y):
        x = np.ascontiguousarray(x, dtype=float)
        y = np.ascontiguousarray(y, dtype=float)
        key = (x.tobytes(), y.tobytes())
        hit = self._memo.get(key, _UNSET)
        if hit is not _UNSET:
            return hit
        val = np.asarray(self._fn(x, y), dtype=float)
        want = self.component_shape()
        if val.shape != want:
            raise ShapeError(
                f"field {self.name!r} returned shape {val.shape}, "
                f"declared type ({self.r}, {self.s}) needs {want}")
        if len(self._memo) >= _MEMO_LIMIT:
            self._memo.clear()
        self._memo[key] = val
        return val

    def vertical_chain(self):
        """Attached exact vertical derivative, or None."""
        if callable(self._dy) and not isinstance(self._dy, TensorField):
            self._dy = self._dy()
        return self._dy

    def x_chain(self):
        """Attached exact derivative in x, or None."""
        if callable(self._dx) and not isinstance(self._dx, TensorField):
            self._dx = self._dx()
        return self._dx

    def __repr__(self):
        tag = self.name or "field"
        return f"<{tag}: type ({self.r},{self.s}), alpha={self.alpha:g}>"


def evaluate(field, x, y):
    """Components of `field` at (x, y), after checking domain membership."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not field.domain.contains(x, y):
        raise DomainError(
            f"point x={x.tolist()}, y={y.tolist()} is outside domain "
            f"{field.domain.name!r}")
    return field(x, y)


# ---------------------------------------------------------------------------
# constructors


def zero_field(domain, r, s, alpha, name="0"):
    shape = (domain.dim,) * (r + s)
    zeros = np.zeros(shape)
    return TensorField(
        domain, r, s, alpha, lambda x, y: zeros,
        dy=lambda: zero_field(domain, r, s + 1, alpha - 1),
        dx=lambda: zero_field(domain, r, s + 1, alpha),
        name=name)


def constant_field(domain, values, r, s, name="const"):
    """Field with components independent of x and y (hence 0-homogeneous)."""
    values = np.asarray(values, dtype=float)
    if values.shape != (domain.dim,) * (r + s):
        raise ShapeError(f"constant components have shape {values.shape}")
    return TensorField(
        domain, r, s, 0.0, lambda x, y: values,
        dy=lambda: zero_field(domain, r, s + 1, -1.0),
        dx=lambda: zero_field(domain, r, s + 1, 0.0),
        name=name)


def liouville_field(domain):
    """The canonical vertical vector field with components y^i."""
    eye = np.eye(domain.dim)
    identity = TensorField(
        domain, 1, 1, 0.0, lambda x, y: eye,
        dy=lambda: zero_field(domain, 1, 2, -1.0),
        dx=lambda: zero_field(domain, 1, 2, 0.0),
        name="id")
    return TensorField(
        domain, 1, 0, 1.0, lambda x, y: y.copy(),
        dy=identity,
        dx=lambda: zero_field(domain, 1, 1, 1.0),
        name="liouville")


# ---------------------------------------------------------------------------
# algebra; every combinator propagates attached derivatives when it can


def _fresh_letter(used):
    for c in _LETTERS:
        if c not in used:
            return c
    raise ValueError("ran out of index letters")


def add(a, b, name=""):
    if (a.r, a.s) != (b.r, b.s):
        raise ShapeError(f"cannot add types {a.rank} and {b.rank}")
    if a.alpha != b.alpha:
        raise ShapeError(
            f"cannot add homogeneities {a.alpha:g} and {b.alpha:g}")

    def _dy():
        da, db = a.vertical_chain(), b.vertical_chain()
        if da is None or db is None:
            return None
        return add(da, db)

    def _dx():
        da, db = a.x_chain(), b.x_chain()
        if da is None or db is None:
            return None
        return add(da, db)

    return TensorField(a.domain, a.r, a.s, a.alpha,
                       lambda x, y: a(x, y) + b(x, y),
                       dy=_dy, dx=_dx, name=name or f"({a.name}+{b.name})")


def scale(a, c, name=""):
    c = float(c)

    def _dy():
        da = a.vertical_chain()
        return None if da is None else scale(da, c)

    def _dx():
        da = a.x_chain()
        return None if da is None else scale(da, c)

    return TensorField(a.domain, a.r, a.s, a.alpha,
                       lambda x, y: c * a(x, y),
                       dy=_dy, dx=_dx, name=name or f"{c:g}*{a.name}")


def subtract(a, b, name=""):
    return add(a, scale(b, -1.0), name=name or f"({a.name}-{b.name})")


def tensor_product(a, b, subscripts, r, s, name=""):
    """einsum-style product/contraction of two fields.

    `subscripts` follows numpy.einsum ("ilc,cjk->ijk" etc.).  The result is
    declared type (r, s); its homogeneity is the sum of the factors'.  The
    attached vertical and horizontal derivatives follow the product rule,
    with the derivative index appended after `subscripts`' output indices.
    """
    lhs, out = subscripts.split("->")
    sa, sb = lhs.split(",")

    def _rule(chain_of):
        def build():
            da, db = chain_of(a), chain_of(b)
            if da is None or db is None:
                return None
            z = _fresh_letter(subscripts)
            t1 = tensor_product(da, b, f"{sa}{z},{sb}->{out}{z}", r, s + 1)
            t2 = tensor_product(a, db, f"{sa},{sb}{z}->{out}{z}", r, s + 1)
            return add(t1, t2)
        return build

    return TensorField(a.domain, r, s, a.alpha + b.alpha,
                       lambda x, y: np.einsum(subscripts, a(x, y), b(x, y)),
                       dy=_rule(lambda f: f.vertical_chain()),
                       dx=_rule(lambda f: f.x_chain()),
                       name=name or f"({a.name}*{b.name})")


def reindex(field, subscripts, name=""):
    """Single-operand einsum; pure slot permutation, homogeneity unchanged."""
    lhs, out = subscripts.split("->")

    def _dy():
        da = field.vertical_chain()
        if da is None:
            return None
        z = _fresh_letter(subscripts)
        return reindex(da, f"{lhs}{z}->{out}{z}")

    def _dx():
        da = field.x_chain()
        if da is None:
            return None
        z = _fresh_letter(subscripts)
        return reindex(da, f"{lhs}{z}->{out}{z}")

    return TensorField(field.domain, field.r, field.s, field.alpha,
                       lambda x, y: np.einsum(subscripts, field(x, y)),
                       dy=_dy, dx=_dx, name=name or f"perm({field.name})")


def pivot_inverse(mat, sample=None, threshold=1e-12):
    """Invert a small matrix by partial-pivot elimination.

    Raises DegeneracyError when a scaled pivot falls below `threshold`, so
    near-singular inputs fail loudly instead of returning garbage.
    """
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[0]
    aug = np.hstack([mat.copy(), np.eye(n)])
    row_scale = np.max(np.abs(mat), axis=1)
    if np.any(row_scale == 0.0):
        raise DegeneracyError("matrix has a zero row", sample=sample)
    for col in range(n):
        pivots = np.abs(aug[col:, col]) / row_scale[col:]
        k = col + int(np.argmax(pivots))
        if pivots[k - col] < threshold:
            raise DegeneracyError(
                f"scaled pivot {pivots[k - col]:.3e} below {threshold:.0e} "
                f"in column {col}", sample=sample)
        if k != col:
            aug[[col, k]] = aug[[k, col]]
            row_scale[[col, k]] = row_scale[[k, col]]
        aug[col] = aug[col] / aug[col, col]
        for rr in range(n):
            if rr != col and aug[rr, col] != 0.0:
                aug[rr] -= aug[rr, col] * aug[col]
    return aug[:, n:]


def matrix_inverse(a, name=""):
    """Pointwise inverse of a field whose components form a square matrix.

    The result swaps the variance of the two slots and negates alpha.  Its
    attached vertical derivative is -A^{-1} (dA) A^{-1} when A carries one.
    """
    if a.r + a.s != 2:
        raise ShapeError("matrix_inverse needs a two-slot field")
    r_out, s_out = a.s, a.r
    holder = []

    def fn(x, y):
        return pivot_inverse(a(x, y), sample=(x.tolist(), y.tolist()))

    def _rule(chain_of):
        def build():
            da = chain_of(a)
            if da is None:
                return None
            inv = holder[0]
            half = tensor_product(inv, da, "ip,pqz->iqz", r_out, s_out + 1)
            full = tensor_product(half, inv, "iqz,qj->ijz", r_out, s_out + 1)
            return scale(full, -1.0)
        return build

    inv_field = TensorField(a.domain, r_out, s_out, -a.alpha, fn,
                            dy=_rule(lambda f: f.vertical_chain()),
                            dx=_rule(lambda f: f.x_chain()),
                            name=name or f"inv({a.name})")
    holder.append(inv_field)
    return inv_field


def scalar_power(a, exponent, name=""):
    """a ** exponent for a scalar field; chain rule supplies derivatives.

    Homogeneity multiplies by the exponent.  A vanishing base with a
    negative exponent, or a negative base with a fractional one, raises
    DivisionError at the offending sample.
    """
    if a.r or a.s:
        raise ShapeError("scalar_power needs a type-(0, 0) field")
    p = float(exponent)

    def fn(x, y):
        v = float(a(x, y))
        if v == 0.0 and p < 0.0:
            raise DivisionError(f"scalar field {a.name!r} vanishes",
                                sample=(x.tolist(), y.tolist()))
        if v < 0.0 and not p.is_integer():
            raise DivisionError(
                f"scalar field {a.name!r} is negative under exponent {p:g}",
                sample=(x.tolist(), y.tolist()))
        return v ** p

    def _rule(chain_of):
        def build():
            da = chain_of(a)
            if da is None:
                return None
            return scale(tensor_product(scalar_power(a, p - 1.0), da,
                                        ",z->z", 0, 1), p)
        return build

    return TensorField(a.domain, 0, 0, p * a.alpha, fn,
                       dy=_rule(lambda f: f.vertical_chain()),
                       dx=_rule(lambda f: f.x_chain()),
                       name=name or f"({a.name})^{p:g}")


def scalar_reciprocal(a, name=""):
    """1 / a for a scalar field; vanishing denominators raise DivisionError."""
    if a.r or a.s:
        raise ShapeError("scalar_reciprocal needs a type-(0, 0) field")
    holder = []

    def fn(x, y):
        v = float(a(x, y))
        if v == 0.0:
            raise DivisionError(
                f"scalar field {a.name!r} vanishes",
                sample=(x.tolist(), y.tolist()))
        return 1.0 / v

    def _rule(chain_of):
        def build():
            da = chain_of(a)
            if da is None:
                return None
            rec = holder[0]
            sq = tensor_product(rec, rec, ",->", 0, 0)
            return scale(tensor_product(sq, da, ",z->z", 0, 1), -1.0)
        return build

    rec_field = TensorField(a.domain, 0, 0, -a.alpha, fn,
                            dy=_rule(lambda f: f.vertical_chain()),
                            dx=_rule(lambda f: f.x_chain()),
                            name=name or f"1/({a.name})")
    holder.append(rec_field)
    return rec_field


# ---------------------------------------------------------------------------
# differentiation


def _stencil(field, x, y, wiggle_y, engine):
    base = y if wiggle_y else x
    h = engine.step(base)
    n = field.dim
    cols = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        if wiggle_y:
            f_pp = field(x, y + 2 * e)
            f_p = field(x, y + e)
            f_m = field(x, y - e)
            f_mm = field(x, y - 2 * e)
        else:
            f_pp = field(x + 2 * e, y)
            f_p = field(x + e, y)
            f_m = field(x - e, y)
            f_mm = field(x - 2 * e, y)
        cols.append((-f_pp + 8.0 * f_p - 8.0 * f_m + f_mm) / (12.0 * h))
    return np.stack(cols, axis=-1)


def _swap_last_two(field):
    total = field.r + field.s
    letters = _LETTERS[:total]
    flipped = letters[:-2] + letters[-1] + letters[-2]
    return reindex(field, f"{letters}->{flipped}")


def _fd_vertical(field, engine):
    def _dx():
        # d/dx of a stencil derivative: commute, differentiate the exact
        # x-chain vertically, and swap the two appended indices back.
        ch = field.x_chain()
        if ch is None:
            return None
        return _swap_last_two(vertical_derivative(ch, engine))

    return TensorField(field.domain, field.r, field.s + 1, field.alpha - 1.0,
                       lambda x, y: _stencil(field, x, y, True, engine),
                       dy=None, dx=_dx, name=f"fd_dv({field.name})")


def _fd_x(field, engine):
    def _dy():
        ch = field.vertical_chain()
        if ch is None:
            return None
        return _swap_last_two(x_derivative(ch, engine))

    return TensorField(field.domain, field.r, field.s + 1, field.alpha,
                       lambda x, y: _stencil(field, x, y, False, engine),
                       dy=_dy, dx=None, name=f"fd_dx({field.name})")


def vertical_derivative(field, engine=None):
    """The field with components dT/dy^k, index appended last, alpha - 1."""
    engine = engine or DEFAULT_ENGINE
    if engine.method == "analytic":
        chain = field.vertical_chain()
        if chain is not None:
            return chain
    return _fd_vertical(field, engine)


def x_derivative(field, engine=None):
    """Chart derivative dT/dx^k, appended last.  Not tensorial; alpha kept.

    The result is an ingredient for connection-building within one chart,
    not an object that transforms between charts on its own.
    """
    engine = engine or DEFAULT_ENGINE
    if engine.method == "analytic":
        chain = field.x_chain()
        if chain is not None:
            return chain
    return _fd_x(field, engine)


def liouville_contract(field):
    """Close the final covariant slot against y; raises alpha by one."""
    if field.s == 0:
        raise RankError(
            f"field {field.name!r} has no covariant slot to contract")
    total = field.r + field.s
    letters = _LETTERS[:total]
    sub = f"{letters},{letters[-1]}->{letters[:-1]}"
    return tensor_product(field, liouville_field(field.domain), sub,
                          field.r, field.s - 1,
                          name=f"iota({field.name})")


def homogeneity_defect(field, x, y, engine=None):
    """Euler defect (dT . y) - alpha T at one admissible sample."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not field.domain.contains(x, y):
        raise DomainError(f"sample outside domain {field.domain.name!r}")
    dT = vertical_derivative(field, engine)
    return np.einsum("...a,a->...", dT(x, y), y) - field.alpha * field(x, y)
