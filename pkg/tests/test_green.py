import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polariguide import DomainError, GreenModel, Variant, free_transverse_green, green, guided_green

K = 2 * np.pi


def test_guided_green_half_wavelength():
    assert guided_green(0.5, beta=0.4) == pytest.approx(-0.2j, abs=1e-15)


def test_guided_green_is_real_at_odd_quarter_wavelength_spacing():
    g = guided_green(2.75, beta=0.99)
    assert g.real == pytest.approx(0.495, rel=1e-12)
    assert abs(g.imag) < 1e-12


def test_guided_green_constant_modulus():
    z = np.linspace(-20, 20, 1001)
    z = z[z != 0]
    np.testing.assert_allclose(np.abs(guided_green(z, beta=0.7)), 0.35, rtol=1e-14)


def test_guided_green_rejects_origin():
    with pytest.raises(DomainError):
        guided_green(0.0)


def test_free_green_near_field_laurent():
    x = 1e-2
    g = free_transverse_green(x / K)
    assert g.real == pytest.approx(-0.75 / x**3, rel=1e-3)


def test_free_green_imaginary_limit():
    # Taylor series of the imaginary part: 1/2 - x^2/10 + O(x^4)
    for x in (1e-2, 1e-3):
        assert free_transverse_green(x / K).imag == pytest.approx(0.5 - x**2 / 10, abs=1e-7)


def test_free_green_at_unit_argument():
    g = free_transverse_green(1 / K)
    assert g == pytest.approx(0.75j * np.exp(1j), rel=1e-12)
    assert g.real == pytest.approx(-0.631, abs=1e-3)
    assert g.imag == pytest.approx(0.405, abs=1e-3)


def test_free_green_domain():
    with pytest.raises(DomainError):
        free_transverse_green(1e-8)


@pytest.mark.parametrize("variant", list(Variant))
def test_self_term(variant):
    assert green(0.0, GreenModel(variant, beta=0.3, gamma0=2.0)) == 1.0j


def test_composite_far_limit():
    model = GreenModel(Variant.COMPOSITE, beta=0.4)
    z = np.array([1e4, 1e4 + 0.37]) / K
    # free part decays as 0.6 * 0.75 / x
    np.testing.assert_allclose(np.abs(green(z, model)), 0.2, atol=0.6 * 0.75 / 1e4 * 1.01)


def test_composite_tight_neighbour():
    model = GreenModel(Variant.COMPOSITE, beta=0.4)
    g = green(0.02 / K, model)
    assert g.real == pytest.approx(-0.6 * 0.75 / 0.02**3, rel=1e-3)
    assert g.real == pytest.approx(-5.6e4, rel=0.01)


def test_green_rejects_subminimal_separation():
    with pytest.raises(DomainError):
        green(np.array([0.0, 1e-7]), GreenModel())


@given(st.floats(1e-5, 100), st.floats(0, 1), st.sampled_from(list(Variant)))
def test_reciprocity(z, beta, variant):
    model = GreenModel(variant, beta=beta)
    assert green(z, model) == green(-z, model)


@given(st.floats(1e-5, 100))
def test_composite_reduces_to_far_field(z):
    far = green(z, GreenModel(Variant.FAR_FIELD, beta=1.0))
    assert green(z, GreenModel(Variant.COMPOSITE, beta=1.0)) == pytest.approx(far, rel=1e-14)
    near_one = green(z, GreenModel(Variant.COMPOSITE, beta=1 - 1e-9))
    assert abs(near_one - far) < 1e-8 * max(1.0, abs(free_transverse_green(z)))


@given(st.floats(1e-4, 0.499), st.floats(0, 1))
def test_composite_near_field_sign(x, beta):
    assert green(x / K, GreenModel(Variant.COMPOSITE, beta=beta)).real < 0
