import math

import numpy as np
import pytest

from hardyscope.errors import DomainError, PreconditionError, QuadratureError
from hardyscope.green import (
    asymptotic_prediction,
    green_gamma0,
    green_log_derivative,
    green_value,
    green_weight,
    green_weight_batch,
    green_weight_supercritical,
    unit_sphere_volume,
)
from hardyscope.spaces import build_density, default_grid


def test_unit_sphere_volumes():
    assert unit_sphere_volume(2) == pytest.approx(2.0 * math.pi, rel=1e-15)
    assert unit_sphere_volume(3) == pytest.approx(4.0 * math.pi, rel=1e-15)
    assert unit_sphere_volume(4) == pytest.approx(2.0 * math.pi**2, rel=1e-15)
    assert unit_sphere_volume(6) == pytest.approx(math.pi**3, rel=1e-15)


def test_flat_closed_forms():
    e3 = build_density("euclidean:3")
    out = green_value(e3, 2.0, 1.0)
    assert out.value == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-10)
    e4 = build_density("euclidean:4")
    assert green_value(e4, 2.0, 2.0).value == pytest.approx(1.0 / (16.0 * math.pi**2), rel=1e-10)

    radii = np.array([0.5, 1.0, 2.0, 4.0])
    batch = green_weight_batch(e3, 2.0, radii)
    np.testing.assert_allclose(batch["G"], 1.0 / (4.0 * math.pi * radii), rtol=1e-14)
    np.testing.assert_allclose(batch["dlogG"], -1.0 / radii, rtol=1e-14)
    np.testing.assert_allclose(batch["W"], 0.25 / radii**2, rtol=1e-14)
    np.testing.assert_array_equal(batch["W"], batch["Wtilde"])
    assert np.all(np.isnan(batch["rho"]))


def test_hyperbolic3_green_closed_form_sweep():
    h3 = build_density("hyperbolic:3")
    radii = np.geomspace(0.01, 20.0, 25)
    got = green_weight_batch(h3, 2.0, radii)["G"]
    # coth(r) - 1 = 2 / (e^(2r) - 1), stable at both ends
    expected = 2.0 / np.expm1(2.0 * radii) / (4.0 * math.pi)
    np.testing.assert_allclose(got, expected, rtol=1e-8)
    single = green_value(h3, 2.0, 1.0)
    assert single.value == pytest.approx(2.0 / math.expm1(2.0) / (4.0 * math.pi), rel=1e-10)
    assert single.error_bound <= 1e-10


def test_hyperbolic3_weight_identities():
    h3 = build_density("hyperbolic:3")
    radii = np.geomspace(0.05, 25.0, 30)
    batch = green_weight_batch(h3, 2.0, radii)
    coth = 1.0 / np.tanh(radii)
    np.testing.assert_allclose(batch["dlogG"], -(coth + 1.0), rtol=1e-9)
    np.testing.assert_allclose(batch["W"], 0.25 * (coth + 1.0) ** 2, rtol=1e-9)
    # the surplus stays accurate even where W - Lambda_P would cancel; the
    # reference needs coth(r) - 1 in expm1 form for the same reason
    cm1 = 2.0 / np.expm1(2.0 * radii)
    np.testing.assert_allclose(batch["Wtilde"], 0.25 * cm1 * (cm1 + 4.0), rtol=1e-8)
    assert green_log_derivative(h3, 2.0, 1.0) == pytest.approx(-2.3130352854993315, rel=1e-10)


def test_batch_agrees_with_scalar_path_and_preserves_order():
    model = build_density("dr:4,2")
    radii = np.array([3.0, 0.05, 1.0, 17.0, 0.7])
    batch = green_weight_batch(model, 2.5, radii)
    for i, r in enumerate(radii):
        assert batch["G"][i] == pytest.approx(green_value(model, 2.5, float(r)).value, rel=1e-9)
        assert batch["dlogG"][i] == pytest.approx(
            green_log_derivative(model, 2.5, float(r)), rel=1e-9
        )


def test_green_decreases_and_certifies_error():
    model = build_density("dr:2,1")
    vals = [green_value(model, 3.0, r).value for r in (0.5, 1.0, 2.0, 6.0)]
    assert all(a > b > 0.0 for a, b in zip(vals, vals[1:]))
    with pytest.raises(QuadratureError):
        green_value(model, 3.0, 1.0, tol=1e-18)


def test_log_derivative_reproduces_exact_gradient():
    # G'(r) = -(omega_n f(r))^(-1/(P-1)) by construction; the batch engine
    # reports G and G'/G separately, so their product must recover it
    for desc, P in (("hyperbolic:3", 2.0), ("dr:4,2", 3.0)):
        model = build_density(desc)
        radii = np.geomspace(0.02, 12.0, 18)
        batch = green_weight_batch(model, P, radii)
        s = 1.0 / (P - 1.0)
        exact = -np.exp(-s * (math.log(unit_sphere_volume(model.n)) + np.asarray(model.log_f(radii))))
        np.testing.assert_allclose(batch["G"] * batch["dlogG"], exact, rtol=1e-9)


def test_supercritical_values():
    model = build_density("dr:2,1")
    assert green_gamma0(model, 6.0) == pytest.approx(2.4845662158269715, rel=1e-10)
    assert green_value(model, 6.0, 1.0).value == pytest.approx(1.1189292867765177, rel=1e-10)
    assert green_weight_supercritical(model, 6.0, 1.0) == pytest.approx(
        3.732246725439097e-05, rel=1e-8
    )


def test_green_preconditions():
    e3 = build_density("euclidean:3")
    dr = build_density("dr:2,1")
    with pytest.raises(DomainError):
        green_value(e3, 3.0, 1.0)  # flat integral diverges for P >= n
    with pytest.raises(DomainError):
        green_log_derivative(e3, 4.0, 1.0)
    with pytest.raises(PreconditionError):
        green_value(dr, 1.0, 1.0)
    with pytest.raises(PreconditionError):
        green_weight(e3, 2.0)
    with pytest.raises(PreconditionError):
        green_gamma0(dr, 4.0)  # P = n is still borderline
    with pytest.raises(PreconditionError):
        green_weight_supercritical(dr, 3.0, 1.0)
    with pytest.raises(DomainError):
        green_weight_batch(dr, 2.0, np.array([1.0, 0.0]))


def test_asymptotic_regimes():
    model = build_density("dr:2,1")  # n = 4
    sub = asymptotic_prediction(model, 2.0, 1e-4)
    assert sub.regime == "P<n" and sub.exponent == -2.0 and not sub.log_corrected
    assert sub.coefficient == pytest.approx(1.0)
    assert isinstance(sub.value, float)

    crit = asymptotic_prediction(model, 4.0, 1e-4)
    assert crit.regime == "P=n" and crit.log_corrected
    assert crit.coefficient == pytest.approx((3.0 / 4.0) ** 4)

    sup = asymptotic_prediction(model, 6.0, np.array([1e-6, 1e-5]))
    assert sup.regime == "P>n"
    assert sup.exponent == pytest.approx(-3.6)
    assert sup.value[0] > sup.value[1] > 0.0


def test_surplus_weight_floor_and_far_field():
    model = build_density("dr:2,1")
    grid = default_grid()
    for P in (2.0, 2.5):
        wtilde = green_weight_batch(model, P, grid)["Wtilde"]
        assert np.min(wtilde) >= -1e-12
        far = green_weight_batch(model, P, np.array([40.0]))["Wtilde"][0]
        assert abs(far) <= 1e-10


def test_green_weight_pair_shape():
    model = build_density("dr:4,3")
    pair = green_weight(model, 2.5)
    assert pair.extras["Lambda_P"] == pytest.approx((model.h / 2.5) ** 2.5, rel=1e-15)
    sample = pair.sample(2.0)
    assert sample.V == 0.0
    assert sample.W_total == sample.W
    assert sample.W >= pair.extras["Lambda_P"]
    tilde = pair.extras["Wtilde"].value(np.array([0.5, 2.0]))
    assert np.all(tilde >= 0.0)
