"""Oracle-equivalence checks run by ``polariguide validate``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import oracles
from .errors import GeometryError
from .green import GreenModel, Variant, green
from .solver import DriveField, build_interaction_matrix, respond, solve_dipoles
from .spectrum import bragg_bright_mode, collective_spectrum, fourier_check, spectrum_arrays
from .system import ChainSpec, chain_from_positions, generate_chain, make_rng


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


def _sorted_eigs(values):
    values = np.asarray(values)
    return values[np.lexsort((values.real, values.imag))]


def dense_eigenvalues(chain, model):
    return np.array([m.eigenvalue for m in collective_spectrum(chain, model)])


def check_bragg_spectrum(cases=((2, 1.0), (10, 0.4), (248, 0.4)), L=2.5):
    worst_oracle, worst_fourier, worst_mode = 0.0, 0.0, 0.0
    for N, beta in cases:
        spec = ChainSpec(N, L, 0.0, beta)
        chain = generate_chain(spec)
        model = GreenModel.from_spec(spec)
        num = _sorted_eigs(dense_eigenvalues(chain, model))
        bs = oracles.bragg_spectrum(N, beta, spec.gamma0)
        ref = _sorted_eigs(np.r_[-0.5j * bs.gamma_plus, np.full(N - 1, -0.5j * bs.gamma_minus)])
        scale = np.maximum(np.abs(ref), spec.gamma)
        worst_oracle = max(worst_oracle, float(np.max(np.abs(num - ref) / scale)))
        fourier = _sorted_eigs(fourier_check(chain, model))
        worst_fourier = max(worst_fourier, float(np.max(np.abs(num - fourier) / scale)))
        bright = max(collective_spectrum(chain, model), key=lambda m: m.linewidth)
        overlap = abs(np.vdot(bragg_bright_mode(chain, model), bright.mode_function))
        worst_mode = max(worst_mode, abs(1.0 - overlap))
    tol = 1e-9
    return [
        Check("bragg_spectrum_vs_dense", worst_oracle <= tol, worst_oracle, tol),
        Check("fourier_vs_dense", worst_fourier <= tol, worst_fourier, tol),
        Check("bragg_bright_mode", worst_mode <= tol, worst_mode, tol),
    ]


def check_bragg_transmission(L=2.5):
    tol = 1e-9
    worst = 0.0
    for N in (1, 2, 10, 64, 248):
        for beta in (0.1, 0.4, 0.9):
            for gd in (0.0, 0.5):
                spec = ChainSpec(N, L, 0.0, beta, gamma_deph=gd)
                chain = generate_chain(spec)
                model = GreenModel.from_spec(spec)
                for delta in (0.0, 0.7, -3.0):
                    ref = oracles.bragg_transmission(N, beta, delta, spec.gamma0, gd)
                    resp = respond(chain, model, delta)
                    worst = max(worst, abs(resp.transmission - ref.T) / ref.T,
                                abs(resp.reflection - ref.R) / ref.R)
    spec = ChainSpec(10, L, 0.0, 1.0)
    resp = respond(generate_chain(spec), GreenModel.from_spec(spec), 0.0)
    mirror = abs(resp.transmission) + abs(1.0 - resp.reflection) + abs(resp.loss)
    return [
        Check("bragg_transmission_vs_solver", worst <= tol, worst, tol),
        Check("bragg_perfect_mirror", mirror <= 1e-12, mirror, 1e-12),
    ]


def check_two_body(count=100, seed=0):
    rng = make_rng(seed)
    tol = 1e-12
    worst = 0.0
    for i in range(count):
        variant = Variant.FAR_FIELD if i % 2 else Variant.COMPOSITE
        sep = float(rng.uniform(0.02, 5.0))
        beta = float(rng.uniform(0.0, 1.0))
        gd = float(rng.choice([0.0, rng.uniform(0, 2)]))
        spec = ChainSpec(2, sep, 0.0, beta, gamma_deph=gd)
        chain = generate_chain(spec)
        model = GreenModel.from_spec(spec, variant)
        G = green(sep, model)
        (mp, _), (mm, _) = oracles.two_body_eigenvalues(G, spec.gamma)
        ref = _sorted_eigs([mp, mm])
        num = _sorted_eigs(dense_eigenvalues(chain, model))
        worst = max(worst, float(np.max(np.abs(num - ref) / np.abs(ref))))
    return [Check("two_body_vs_dense", worst <= tol, worst, tol, f"{count} random separations")]


def check_pair_dipoles(seed=1):
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(20):
        sep = float(rng.uniform(0.005, 0.3))
        spec = ChainSpec(2, sep, 0.0, float(rng.uniform(0, 1)))
        chain = generate_chain(spec)
        model = GreenModel.from_spec(spec, Variant.COMPOSITE)
        delta = float(rng.uniform(-5, 5))
        d = solve_dipoles(build_interaction_matrix(chain, model, delta), DriveField(1.0, q=0.0))
        ref = 1.0 / (delta - 0.5j * spec.gamma - green(sep, model))
        worst = max(worst, float(np.max(np.abs(d - ref)) / abs(ref)))
    return [Check("symmetric_pair_dipoles", worst <= 1e-12, worst, 1e-12)]


def random_chain(rng, N_max=120):
    """Random valid chain for property sweeps; redraws on geometry failures."""
    while True:
        N = int(rng.integers(2, N_max + 1))
        L = float(rng.uniform(0.1, 3.0))
        spec = ChainSpec(N, L, float(rng.uniform(0, 0.45)) * L, float(rng.uniform(0, 1)),
                         gamma_deph=float(rng.choice([0.0, rng.uniform(0, 3)])))
        try:
            return generate_chain(spec, int(rng.integers(0, 2**63)))
        except GeometryError:
            continue


def check_trace_identities(count=50, seed=2):
    rng = make_rng(seed)
    worst_d, worst_g = 0.0, 0.0
    for i in range(count):
        chain = random_chain(rng)
        spec = chain.spec
        model = GreenModel.from_spec(spec, Variant.FAR_FIELD if i % 2 else Variant.COMPOSITE)
        w = dense_eigenvalues(chain, model)
        delta, gamma = w.real, -2 * w.imag
        worst_d = max(worst_d, abs(delta.sum()) / np.abs(w).sum())
        worst_g = max(worst_g, abs(gamma.sum() - chain.N * spec.gamma) / (chain.N * spec.gamma))
    tol = 1e-10
    return [
        Check("trace_sum_shifts", worst_d <= tol, worst_d, tol, f"{count} random chains"),
        Check("trace_sum_linewidths", worst_g <= tol, worst_g, tol, f"{count} random chains"),
    ]


def check_far_field_bounds(count=100, seed=3):
    rng = make_rng(seed)
    worst_bound, worst_norm = -np.inf, -np.inf
    for _ in range(count):
        chain = random_chain(rng, N_max=250)
        spec = chain.spec
        model = GreenModel.from_spec(spec, Variant.FAR_FIELD)
        modes = collective_spectrum(chain, model)
        _, gamma, _ = spectrum_arrays(modes)
        bs_lo = spec.gamma - spec.beta * spec.gamma0
        bs_hi = spec.gamma + spec.beta * (chain.N - 1) * spec.gamma0
        worst_bound = max(worst_bound, bs_lo - gamma.min(), gamma.max() - bs_hi)
        bound = oracles.norm_bound(chain.N, spec.beta, spec.gamma0, spec.gamma_deph)
        worst_norm = max(worst_norm, max(abs(m.eigenvalue) for m in modes) - bound)
    tol = 1e-6
    return [
        Check("far_field_linewidth_bounds", worst_bound <= tol, worst_bound, tol, f"{count} random chains"),
        Check("operator_norm_bound", worst_norm <= tol, worst_norm, tol, f"{count} random chains"),
    ]


def check_single_emitter():
    spec = ChainSpec(1, 1.0, 0.0, 0.4)
    chain = generate_chain(spec)
    model = GreenModel.from_spec(spec)
    resp = respond(chain, model, 0.0)
    err = max(abs(resp.transmission - 0.36), abs(resp.absorption - 1.0),
              abs(respond(chain, model, 0.5).absorption - 0.5))
    return [Check("single_emitter_limits", err <= 1e-12, err, 1e-12)]


def check_mean_field():
    far = oracles.mean_field_wavenumber(1e9, 200, 7.7, 0.56)
    err_far = abs(far.q - 2 * np.pi) / (2 * np.pi)
    # first-order agreement with Clausius-Mossotti: error ratio ~ 1/4 when alpha halves
    errs = []
    for delta in (200.0, 400.0):
        q = oracles.mean_field_wavenumber(delta, 200, 7.7, 0.56).n_tilde
        n = oracles.clausius_mossotti_index(delta, 200, 7.7, 0.56)
        errs.append(abs(q - n))
    ratio = errs[1] / errs[0]
    return [
        Check("mean_field_vacuum_limit", err_far <= 1e-8, err_far, 1e-8),
        Check("clausius_mossotti_second_order", 0.2 <= ratio <= 0.3, ratio, 0.25, "error ratio on halving alpha"),
    ]


ALL_CHECKS = (
    check_bragg_spectrum,
    check_bragg_transmission,
    check_two_body,
    check_pair_dipoles,
    check_trace_identities,
    check_far_field_bounds,
    check_single_emitter,
    check_mean_field,
)


def run_checks():
    results = []
    for fn in ALL_CHECKS:
        results.extend(fn())
    return results
