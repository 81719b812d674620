"""Core field algebra: domains, chains, combinators, derivative fallbacks."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from anifield import (ConicDomain, DiffEngine, DomainError, DivisionError,
                      RankError, ShapeError, TensorField, add, constant_field,
                      evaluate, homogeneity_defect, liouville_contract,
                      liouville_field, matrix_inverse, reindex, scalar_power,
                      scalar_reciprocal, scale, subtract, tensor_product,
                      vertical_derivative, x_derivative, zero_field)
from anifield.catalog import get_example
from anifield.fields import DegeneracyError, pivot_inverse

EUC = get_example("euclidean2")
QUARTIC = get_example("quartic2")
CONFORMAL = get_example("conformal2")

X0 = np.array([0.3, -0.1])
Y0 = np.array([1.0, 2.0])


def test_domain_contains_ignores_sampling_box():
    # the x box only steers sampling, membership is conic in y
    assert EUC.domain.contains(np.array([50.0, -50.0]), Y0)
    assert not EUC.domain.contains(X0, np.zeros(2))


def test_domain_sampling_is_seeded():
    xs1, ys1 = EUC.domain.sample(5, seed=11)
    xs2, ys2 = EUC.domain.sample(5, seed=11)
    assert_allclose(xs1, xs2)
    assert_allclose(ys1, ys2)
    assert xs1.shape == (5, 2)


def test_domain_sampling_respects_membership():
    mink = get_example("minkowski2")
    xs, ys = mink.domain.sample(40, seed=3)
    for y in ys:
        assert y[1] * y[1] > y[0] * y[0]


def test_sampling_exhaustion_raises():
    empty = ConicDomain(2, membership=lambda x, y: False, name="empty")
    with pytest.raises(DomainError):
        empty.sample(1, seed=0)


def test_evaluate_outside_domain():
    mink = get_example("minkowski2")
    ell = mink.lagrangian.ell_field()
    with pytest.raises(DomainError):
        evaluate(ell, X0, np.array([2.0, 1.0]))  # spacelike direction


def test_field_rejects_wrong_component_shape():
    bad = TensorField(EUC.domain, 0, 1, 1.0, lambda x, y: np.zeros(3))
    with pytest.raises(ShapeError):
        bad(X0, Y0)


def test_field_memoizes_per_point():
    calls = []

    def fn(x, y):
        calls.append(1)
        return float(y @ y)

    f = TensorField(EUC.domain, 0, 0, 2.0, fn)
    f(X0, Y0)
    f(X0, Y0)
    assert len(calls) == 1
    f(X0, 2.0 * Y0)
    assert len(calls) == 2


def test_add_requires_matching_rank_and_weight():
    L = EUC.lagrangian.field
    ell = EUC.lagrangian.ell_field()
    with pytest.raises(ShapeError):
        add(L, ell)
    shifted = TensorField(EUC.domain, 0, 1, 0.0, lambda x, y: np.zeros(2))
    with pytest.raises(ShapeError):
        add(ell, shifted)


def test_linear_combinators():
    ell = EUC.lagrangian.ell_field()
    s = subtract(add(ell, ell), scale(ell, 2.0))
    assert_allclose(s(X0, Y0), np.zeros(2), atol=0.0)


def test_constant_field_shape_check():
    with pytest.raises(ShapeError):
        constant_field(EUC.domain, np.zeros((2, 3)), 0, 2)


def test_liouville_field_values():
    C = liouville_field(EUC.domain)
    assert_allclose(C(X0, Y0), Y0)
    assert C.alpha == 1.0


def test_tensor_product_values_and_weight():
    ell = QUARTIC.lagrangian.ell_field()
    L = QUARTIC.lagrangian.field
    P = tensor_product(L, ell, ",i->i", 0, 1)
    assert P.alpha == 3.0
    assert_allclose(P(X0, Y0), L(X0, Y0) * ell(X0, Y0))


def test_tensor_product_chain_product_rule():
    """The attached vertical chain of a product must match a raw stencil."""
    ell = QUARTIC.lagrangian.ell_field()
    L = QUARTIC.lagrangian.field
    P = tensor_product(L, ell, ",i->i", 0, 1)
    exact = vertical_derivative(P, DiffEngine("analytic"))
    probed = vertical_derivative(P, DiffEngine("fd4"))
    xs, ys = QUARTIC.domain.sample(10, seed=7)
    for x, y in zip(xs, ys):
        assert_allclose(probed(x, y), exact(x, y), rtol=1e-7, atol=1e-8)


def test_reindex_transposes_values_and_chain():
    phi = QUARTIC.lagrangian.phi_field()
    d3 = vertical_derivative(phi, DiffEngine("analytic"))
    flipped = reindex(d3, "ijk->kji")
    v = d3(X0, Y0)
    assert_allclose(flipped(X0, Y0), np.transpose(v, (2, 1, 0)))


def test_matrix_inverse_frozen_value():
    phi = QUARTIC.lagrangian.phi_field()
    inv = matrix_inverse(phi)
    r2 = np.sqrt(2.0)
    expected = np.array([[2.0 * r2 / 3.0, r2 / 3.0],
                         [r2 / 3.0, 2.0 * r2 / 3.0]])
    assert_allclose(inv(X0, np.array([1.0, 1.0])), expected, rtol=1e-13)
    assert inv.alpha == -phi.alpha
    assert inv.rank == (2, 0)


def test_matrix_inverse_roundtrip_and_chain():
    phi = QUARTIC.lagrangian.phi_field()
    inv = matrix_inverse(phi)
    xs, ys = QUARTIC.domain.sample(8, seed=2)
    analytic = vertical_derivative(inv, DiffEngine("analytic"))
    stencil = vertical_derivative(inv, DiffEngine("fd4"))
    for x, y in zip(xs, ys):
        assert_allclose(inv(x, y) @ phi(x, y), np.eye(2), atol=1e-13)
        assert_allclose(stencil(x, y), analytic(x, y), rtol=1e-6, atol=1e-7)


def test_matrix_inverse_needs_two_slots():
    with pytest.raises(ShapeError):
        matrix_inverse(EUC.lagrangian.ell_field())


def test_pivot_inverse_flags_zero_row():
    with pytest.raises(DegeneracyError, match="zero row"):
        pivot_inverse(np.array([[0.0, 0.0], [1.0, 2.0]]))


def test_pivot_inverse_flags_tiny_scaled_pivot():
    near = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-15]])
    with pytest.raises(DegeneracyError) as info:
        pivot_inverse(near, sample=(X0, Y0))
    assert info.value.sample is not None


def test_scalar_power_values_and_weight():
    L = QUARTIC.lagrangian.field
    root = scalar_power(L, 0.5)
    assert root.alpha == 1.0
    assert_allclose(root(X0, Y0), np.sqrt(L(X0, Y0)))


def test_scalar_power_chain():
    L = QUARTIC.lagrangian.field
    f = scalar_power(L, 1.5)
    exact = vertical_derivative(f, DiffEngine("analytic"))
    probed = vertical_derivative(f, DiffEngine("fd4"))
    xs, ys = QUARTIC.domain.sample(6, seed=9)
    for x, y in zip(xs, ys):
        assert_allclose(probed(x, y), exact(x, y), rtol=1e-6, atol=1e-8)


def test_scalar_power_division_errors():
    zero = constant_field(EUC.domain, np.asarray(0.0), 0, 0)
    with pytest.raises(DivisionError) as info:
        scalar_power(zero, -1.0)(X0, Y0)
    assert info.value.sample is not None
    neg = constant_field(EUC.domain, np.asarray(-2.0), 0, 0)
    with pytest.raises(DivisionError):
        scalar_power(neg, 0.5)(X0, Y0)
    # integer exponents on a negative base are fine
    assert_allclose(scalar_power(neg, 2.0)(X0, Y0), 4.0)


def test_scalar_power_rejects_tensors():
    with pytest.raises(ShapeError):
        scalar_power(EUC.lagrangian.ell_field(), 2.0)


def test_scalar_reciprocal():
    L = EUC.lagrangian.field
    assert_allclose(scalar_reciprocal(L)(X0, np.array([3.0, 4.0])), 1.0 / 25.0)
    zero = constant_field(EUC.domain, np.asarray(0.0), 0, 0)
    with pytest.raises(DivisionError):
        scalar_reciprocal(zero)(X0, Y0)


def test_liouville_contract_needs_covariant_slot():
    with pytest.raises(RankError):
        liouville_contract(EUC.lagrangian.field)


def test_vertical_derivative_appends_index_last():
    handmade = get_example("handmadeN")
    N = handmade.fields["connection"]
    dN = vertical_derivative(N, DiffEngine("fd4"))
    got = dN(X0, Y0)
    expected = np.zeros((2, 2, 2))
    expected[0, 0, 1] = 1.0  # d N^1_1 / d y^2
    assert_allclose(got, expected, atol=1e-9)
    assert dN.alpha == N.alpha - 1.0
    assert dN.rank == (1, 2)


def test_vertical_derivative_gradient_of_energy():
    L = EUC.lagrangian.field
    for engine in (DiffEngine("analytic"), DiffEngine("fd4")):
        dL = vertical_derivative(L, engine)
        assert_allclose(dL(X0, np.array([3.0, 4.0])), [6.0, 8.0],
                        rtol=0, atol=1e-9)


def test_fd_fallback_without_chain():
    bare = TensorField(EUC.domain, 0, 0, 2.0, lambda x, y: float(y @ y))
    assert bare.vertical_chain() is None
    dL = vertical_derivative(bare, DiffEngine("analytic"))
    assert_allclose(dL(X0, Y0), 2.0 * Y0, rtol=1e-9)


def test_x_derivative_frozen_conformal():
    L = CONFORMAL.lagrangian.field
    dxL = x_derivative(L)
    x = np.array([0.2, 0.7])
    val = L(x, Y0)
    assert_allclose(dxL(x, Y0), [2.0 * val, 0.0], rtol=1e-8, atol=1e-8)


def test_mixed_partials_commute():
    """x and y differentiation give the same mixed block in either order."""
    ell = CONFORMAL.lagrangian.ell_field()
    a = x_derivative(vertical_derivative(ell))(X0, Y0)
    b = vertical_derivative(x_derivative(ell))(X0, Y0)
    assert_allclose(a, np.swapaxes(b, 1, 2), rtol=1e-7, atol=1e-10)


def test_engine_rejects_unknown_method():
    with pytest.raises(ValueError):
        DiffEngine("secant")


def test_step_scales_with_magnitude():
    e = DiffEngine("fd4", step_scale=2.0)
    assert e.step(np.array([100.0, 0.0])) > e.step(np.array([1.0, 0.0]))


@given(y1=st.floats(0.5, 2.0), y2=st.floats(-2.0, -0.5))
def test_energy_is_two_homogeneous(y1, y2):
    y = np.array([y1, y2])
    L = EUC.lagrangian.field
    hooked = liouville_contract(vertical_derivative(L, DiffEngine("analytic")))
    assert abs(hooked(X0, y) - 2.0 * L(X0, y)) < 1e-12 * (1.0 + abs(L(X0, y)))


def test_homogeneity_defect_small_on_exact_chain():
    assert abs(homogeneity_defect(EUC.lagrangian.field, X0, Y0)) < 1e-14


def test_homogeneity_defect_outside_domain():
    mink = get_example("minkowski2")
    with pytest.raises(DomainError):
        homogeneity_defect(mink.lagrangian.field, X0, np.array([2.0, 1.0]))


def test_zero_field_round_trip():
    z = zero_field(EUC.domain, 1, 1, 0.0)
    assert_allclose(z(X0, Y0), np.zeros((2, 2)))
    assert vertical_derivative(z)(X0, Y0).shape == (2, 2, 2)
