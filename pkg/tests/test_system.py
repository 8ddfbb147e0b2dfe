import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from polariguide import ChainSpec, GeometryError, ValidationError, generate_chain, polarizability
from polariguide.system import EPS_MIN, chain_from_positions, derive_seed


def test_ordered_chain_positions():
    chain = generate_chain(ChainSpec(4, 2.75, 0.0), seed=123)
    np.testing.assert_array_equal(chain.positions, [0.0, 2.75, 5.5, 8.25])


def test_zero_disorder_is_seed_independent():
    spec = ChainSpec(30, 0.3, 0.0)
    a = generate_chain(spec, 1).positions
    b = generate_chain(spec, 2**64 - 1).positions
    np.testing.assert_array_equal(a, b)


def test_same_seed_same_positions():
    spec = ChainSpec(250, 2.75, 0.5)
    a = generate_chain(spec, 7).positions
    b = generate_chain(spec, 7).positions
    assert a.tobytes() == b.tobytes()
    assert generate_chain(spec, 8).positions.tobytes() != a.tobytes()


def test_displacements_are_uniform():
    L = 1 / (2 * np.pi)
    spec = ChainSpec(250, L, 0.49 * L)
    draws = np.concatenate([generate_chain(spec, s).positions - np.arange(250) * L for s in range(400)])
    assert draws.size == 100_000
    ks = stats.kstest(draws, stats.uniform(loc=-spec.l, scale=2 * spec.l).cdf)
    assert ks.statistic < 0.05


@pytest.mark.parametrize("l", [0.1, 0.5, 1.3])
def test_realization_invariants(l):
    spec = ChainSpec(200, 1.0, l)
    for seed in range(5):
        z = generate_chain(spec, seed).positions
        assert np.all(np.abs(z - np.arange(200) * spec.L) <= l + 1e-12)
        assert np.all(np.diff(z) >= EPS_MIN)


def test_positions_are_read_only():
    chain = generate_chain(ChainSpec(3, 1.0))
    with pytest.raises(ValueError):
        chain.positions[0] = 1.0


def test_geometry_error_below_min_separation():
    with pytest.raises(GeometryError):
        generate_chain(ChainSpec(2, 1e-7))
    with pytest.raises(GeometryError):
        chain_from_positions([0.0, 5e-7], ChainSpec(2, 1.0))


@pytest.mark.parametrize(
    "kwargs",
    [dict(N=0, L=1.0), dict(N=2, L=-1.0), dict(N=2, L=1.0, l=-0.1), dict(N=2, L=1.0, beta=1.2),
     dict(N=2, L=1.0, beta=-0.1), dict(N=2, L=1.0, gamma0=0.0), dict(N=2, L=1.0, gamma_deph=-1.0),
     dict(N=2.5, L=1.0)],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValidationError):
        ChainSpec(**kwargs)


def test_total_linewidth_is_derived():
    spec = ChainSpec(3, 1.0, gamma0=2.0, gamma_deph=0.5)
    assert spec.gamma == 2.5


def test_derived_seeds_depend_only_on_master_and_index():
    seeds = [derive_seed(42, i) for i in range(10)]
    assert len(set(seeds)) == 10
    assert derive_seed(42, 7) == seeds[7]
    assert derive_seed(43, 7) != seeds[7]


def test_polarizability_values():
    spec = ChainSpec(1, 1.0)
    assert polarizability(0.0, spec) == pytest.approx(2j)
    assert polarizability(0.5, spec) == pytest.approx(1 + 1j)
    wide = ChainSpec(1, 1.0, gamma0=1.0, gamma_deph=2.0)
    assert polarizability(1.5, wide) == pytest.approx((1 + 1j) / 3.0)
    deph = ChainSpec(1, 1.0, gamma_deph=10.0)
    assert polarizability(0.0, deph) == pytest.approx(2j / 11)
    assert abs(polarizability(0.0, spec)) / abs(polarizability(0.0, deph)) == pytest.approx(11.0)


@given(st.floats(-1e6, 1e6), st.floats(0.01, 50), st.floats(0, 50))
def test_polarizability_properties(delta, g0, gd):
    spec = ChainSpec(1, 1.0, gamma0=g0, gamma_deph=gd)
    a = polarizability(delta, spec)
    assert a.imag > 0
    assert polarizability(-delta, spec) == pytest.approx(-np.conj(a), rel=1e-12, abs=1e-300)
    assert abs(a) <= abs(polarizability(0.0, spec)) * (1 + 1e-12)


@settings(max_examples=30)
@given(st.integers(1, 60), st.floats(0.05, 3.0), st.floats(0, 0.49), st.integers(0, 2**64 - 1))
def test_generation_is_pure(N, L, frac, seed):
    spec = ChainSpec(N, L, frac * L)
    try:
        a = generate_chain(spec, seed)
    except GeometryError:
        return
    assert a.positions.tobytes() == generate_chain(spec, seed).positions.tobytes()
