import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polariguide import (
    ChainSpec,
    DomainError,
    DriveField,
    GreenModel,
    SingularSystemError,
    ValidationError,
    Variant,
    absorption,
    build_interaction_matrix,
    dispersion_map,
    generate_chain,
    green,
    respond,
    response_spectrum,
    solve_dipoles,
    total_field,
    transmission_reflection,
)
from polariguide.solver import coupling_matrix
from polariguide.system import chain_from_positions

K = 2 * np.pi


def cofactor_inverse(A):
    """3x3 inverse from the adjugate, independent of any LAPACK path."""
    C = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(A, i, 0), j, 1)
            C[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    det = sum(A[0, j] * C[0, j] for j in range(3))
    return C.T / det


def test_matrix_entries_explicit():
    spec = ChainSpec(3, 0.3, beta=0.4, gamma_deph=0.5)
    chain = chain_from_positions([0.0, 0.3, 0.75], spec)
    model = GreenModel.from_spec(spec, Variant.COMPOSITE)
    A = build_interaction_matrix(chain, model, delta=0.7).entries
    z = chain.positions
    for m in range(3):
        assert A[m, m] == pytest.approx(0.7 - 0.75j)
        for n in range(3):
            if m != n:
                assert A[m, n] == pytest.approx(-green(z[n] - z[m], model), rel=1e-14)
    np.testing.assert_array_equal(A, A.T)


def test_three_emitter_solution_matches_cofactor_inverse():
    spec = ChainSpec(3, 0.2, beta=0.6)
    chain = chain_from_positions([0.0, 0.21, 0.37], spec)
    model = GreenModel.from_spec(spec, Variant.COMPOSITE)
    for delta in (-3.0, 0.0, 0.4, 12.0):
        M = build_interaction_matrix(chain, model, delta)
        E = DriveField().sample(chain.positions, model)
        np.testing.assert_allclose(solve_dipoles(M, DriveField()), cofactor_inverse(M.entries) @ E, rtol=1e-10)


def test_single_emitter_on_resonance():
    spec = ChainSpec(1, 1.0, beta=0.3)
    chain = generate_chain(spec)
    resp = respond(chain, GreenModel.from_spec(spec), 0.0)
    assert resp.reflection == pytest.approx(0.09, rel=1e-12)
    assert resp.transmission == pytest.approx(0.49, rel=1e-12)
    assert resp.absorption == pytest.approx(1.0, rel=1e-12)


def test_lossless_waveguide_conserves_flux():
    spec = ChainSpec(20, 0.37, 0.1, beta=1.0)
    chain = generate_chain(spec, 5)
    model = GreenModel.from_spec(spec)
    for delta in np.linspace(-5, 5, 21):
        T, R, loss = transmission_reflection(chain, model, delta)
        assert abs(loss) < 1e-10


def test_born_limit():
    spec = ChainSpec(10, 0.3, 0.1, beta=0.5)
    chain = generate_chain(spec, 1)
    model = GreenModel.from_spec(spec)
    resp = respond(chain, model, 1e6)
    assert abs(resp.transmission - 1) < 1e-5
    assert resp.reflection < 1e-9
    # first Born term: d = alpha E
    E = DriveField().sample(chain.positions, model)
    np.testing.assert_allclose(resp.dipoles, E / 1e6, rtol=1e-4)


def test_singular_system_detected():
    spec = ChainSpec(1, 1.0)
    chain = generate_chain(spec)
    M = build_interaction_matrix(chain, GreenModel.from_spec(spec))
    bad = type(M)(np.zeros((1, 1), dtype=complex), 0.0, chain, M.model)
    with pytest.raises(SingularSystemError):
        solve_dipoles(bad, DriveField())


def test_guided_observables_need_guided_drive():
    spec = ChainSpec(2, 0.3)
    chain = generate_chain(spec)
    with pytest.raises(ValidationError):
        respond(chain, GreenModel.from_spec(spec), 0.0, DriveField(q=1.0))
    # absorption accepts any q
    assert np.isfinite(absorption(chain, GreenModel.from_spec(spec), 0.0, DriveField(q=1.0)))


def test_total_field_rejects_emitter_positions():
    spec = ChainSpec(2, 0.3)
    chain = generate_chain(spec)
    model = GreenModel.from_spec(spec)
    d = respond(chain, model, 0.0).dipoles
    with pytest.raises(DomainError):
        total_field([0.3], d, chain, model, DriveField())


def test_total_field_far_downstream_gives_t():
    spec = ChainSpec(6, 0.41, 0.1, beta=0.4)
    chain = generate_chain(spec, 3)
    model = GreenModel.from_spec(spec, Variant.COMPOSITE)
    resp = respond(chain, model, 0.3)
    E = total_field([1e4 + 0.123], resp.dipoles, chain, model, DriveField(), guided_only=True)
    assert abs(E[0]) ** 2 == pytest.approx(resp.transmission, rel=1e-10)
    Eb = total_field([-1e4], resp.dipoles, chain, model, DriveField(), guided_only=True)
    backward = Eb[0] - DriveField().sample(-1e4, model)
    assert abs(backward) ** 2 == pytest.approx(resp.reflection, rel=1e-10)


def test_response_spectrum_matches_pointwise():
    spec = ChainSpec(8, 0.3, 0.05, gamma_deph=0.2)
    chain = generate_chain(spec, 9)
    model = GreenModel.from_spec(spec, Variant.COMPOSITE)
    deltas = np.linspace(-3, 3, 7)
    out = response_spectrum(chain, model, deltas)
    for i, delta in enumerate(deltas):
        T, R, loss = transmission_reflection(chain, model, delta)
        assert out["T"][i] == pytest.approx(T, rel=1e-12)
        assert out["R"][i] == pytest.approx(R, rel=1e-12)
        assert out["loss"][i] == pytest.approx(loss, rel=1e-12, abs=1e-14)


def test_dispersion_map_shape_and_guided_column():
    spec = ChainSpec(10, 0.04, gamma_deph=1.0)
    chain = generate_chain(spec)
    model = GreenModel.from_spec(spec)
    deltas = np.array([-2.0, 0.0, 3.0])
    out = dispersion_map(chain, model, [0.0, 1.0, 2.0], deltas)
    assert out.shape == (3, 3)
    for i, delta in enumerate(deltas):
        assert out[i, 1] == pytest.approx(absorption(chain, model, delta), rel=1e-12)
    with pytest.raises(ValidationError):
        dispersion_map(chain, model, [], deltas)


chains = st.builds(
    lambda N, L, frac, beta, gd, seed: (ChainSpec(N, L, frac * L, beta=beta, gamma_deph=gd), seed),
    st.integers(1, 25), st.floats(0.05, 2.0), st.floats(0, 0.45), st.floats(0, 1), st.floats(0, 3),
    st.integers(0, 2**32),
)


@settings(max_examples=40, deadline=None)
@given(chains, st.floats(-20, 20), st.sampled_from(list(Variant)))
def test_passivity_and_ranges(case, delta, variant):
    spec, seed = case
    chain = generate_chain(spec, seed)
    resp = respond(chain, GreenModel.from_spec(spec, variant), delta)
    assert -1e-9 <= resp.transmission <= 1 + 1e-9
    assert -1e-9 <= resp.reflection <= 1 + 1e-9
    assert resp.loss >= -1e-9
    assert resp.absorption >= -1e-9


@settings(max_examples=30, deadline=None)
@given(chains, st.floats(-20, 20), st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_linearity_in_drive(case, delta, amp):
    spec, seed = case
    chain = generate_chain(spec, seed)
    model = GreenModel.from_spec(spec)
    base = respond(chain, model, delta)
    scaled = respond(chain, model, delta, DriveField(amp))
    np.testing.assert_allclose(scaled.dipoles, amp * base.dipoles, rtol=1e-9, atol=1e-14)
    assert scaled.transmission == pytest.approx(base.transmission, rel=1e-9, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(chains, st.floats(-20, 20), st.sampled_from(list(Variant)))
def test_reciprocal_transmission(case, delta, variant):
    spec, seed = case
    chain = generate_chain(spec, seed)
    model = GreenModel.from_spec(spec, variant)
    fwd = respond(chain, model, delta)
    bwd = respond(chain, model, delta, DriveField(q=-model.k))
    assert bwd.transmission == pytest.approx(fwd.transmission, rel=1e-8, abs=1e-12)


def test_coupling_matrix_symmetry():
    spec = ChainSpec(15, 0.2, 0.05)
    chain = generate_chain(spec, 2)
    C = coupling_matrix(chain, GreenModel.from_spec(spec, Variant.COMPOSITE))
    np.testing.assert_array_equal(C, C.T)
    assert np.all(np.diag(C) == 0)
