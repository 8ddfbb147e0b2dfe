"""Closed-form reference results for the waveguide emitter chain.

These formulas are kept independent of the dense solver so that each one can
serve as an oracle for it. Conventions match the solver: rates in gamma0,
lengths in wavelengths, Gamma = gamma0 + gamma_deph in the polarizability,
radiative couplings always proportional to gamma0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ValidationError
from .green import GreenModel, Variant, green
from .system import TWO_PI


class Parity(str, enum.Enum):
    IN_PHASE = "in-phase"
    ANTI_PHASE = "anti-phase"


@dataclass(frozen=True)
class BraggSpectrum:
    gamma_plus: float
    gamma_minus: float
    parity: Parity


@dataclass(frozen=True)
class BraggTransmission:
    t: complex
    r: complex
    T: float
    R: float
    loss: float


@dataclass(frozen=True)
class MeanFieldResult:
    q: complex
    n_tilde: complex


def bragg_spectrum(N: int, beta: float, gamma0: float = 1.0, parity=Parity.IN_PHASE,
                   gamma_deph: float = 0.0) -> BraggSpectrum:
    """Bright and dark linewidths of an even chain at a Bragg condition.

    gamma_plus = Gamma + beta (N - 1) gamma0, gamma_minus = Gamma - beta gamma0;
    without dephasing these are [1 + beta (N-1)] Gamma and (1 - beta) Gamma.
    """
    if N < 2 or N % 2:
        raise PreconditionError(f"Bragg spectrum needs even N >= 2, got {N}")
    gamma = gamma0 + gamma_deph
    return BraggSpectrum(gamma + beta * (N - 1) * gamma0, gamma - beta * gamma0, Parity(parity))


def bragg_transmission(N: int, beta: float, delta: float = 0.0, gamma0: float = 1.0,
                       gamma_deph: float = 0.0) -> BraggTransmission:
    """Guided transmission through a Bragg chain, scattering off the bright mode only.

    t = 1 - r with r = -i N beta gamma0/2 / (Delta - i gamma_plus/2). At
    Delta = 0 without dephasing r = N beta / (N beta + 1 - beta).
    """
    gamma_plus = gamma0 + gamma_deph + beta * (N - 1) * gamma0
    r = -1j * N * beta * 0.5 * gamma0 / (delta - 0.5j * gamma_plus)
    t = 1.0 - r
    T, R = abs(t) ** 2, abs(r) ** 2
    return BraggTransmission(complex(t), complex(r), float(T), float(R), float(1.0 - T - R))


def two_body_eigenvalues(G: complex, gamma: float = 1.0, delta: float = 0.0):
    """Eigenpairs of the two-emitter matrix.

    Returns ``((mu_plus, psi_plus), (mu_minus, psi_minus))`` with
    mu_plus = Delta - i Gamma/2 - G for psi_plus = (1, 1)/sqrt2 and
    mu_minus = Delta - i Gamma/2 + G for psi_minus = (-1, 1)/sqrt2.
    """
    base = delta - 0.5j * gamma
    s = 1.0 / np.sqrt(2.0)
    return (base - G, np.array([s, s])), (base + G, np.array([-s, s]))


def pair_transmission(delta: float, G: complex, beta: float, gamma0: float = 1.0,
                      gamma_deph: float = 0.0) -> float:
    """|1 + 2 i beta gamma0/2 / (Delta - i Gamma/2 - G)|^2 for a symmetric pair."""
    gamma = gamma0 + gamma_deph
    return float(abs(1.0 + 1j * beta * gamma0 / (delta - 0.5j * gamma - G)) ** 2)


def norm_bound(N: int, beta: float, gamma0: float = 1.0, gamma_deph: float = 0.0) -> float:
    """Max-row-sum norm of Ainv(Delta = 0) in the far field, gamma_plus / 2."""
    return 0.5 * (gamma0 + gamma_deph + (N - 1) * beta * gamma0)


def mean_field_wavenumber(delta, N: int, Z: float, beta: float, gamma0: float = 1.0,
                          gamma_deph: float = 0.0, k: float = TWO_PI, shift: float = 0.0):
    """Effective wavenumber of a homogeneously filled guide.

    q^2 = k^2 + 2 k (N beta / Z) alpha Im[G(0)], with the root taken so that
    Im q >= 0 (forward wave decays). ``shift`` is a global blue shift of the
    resonance (e.g. from near-field coupling): alpha = 1/(Delta + shift - i Gamma/2).
    ``n_tilde`` is the dressed mode index q/k. Vectorized over ``delta``.
    """
    if Z <= 0:
        raise ValidationError("Z must be positive")
    delta = np.asarray(delta, dtype=float)
    alpha = 1.0 / (delta + shift - 0.5j * (gamma0 + gamma_deph))
    q = np.sqrt(k**2 + 2.0 * k * (N * beta / Z) * alpha * 0.5 * gamma0 + 0j)
    q = np.where(q.imag < 0, -q, q)
    if q.ndim == 0:
        return MeanFieldResult(complex(q), complex(q / k))
    return MeanFieldResult(q, q / k)


def clausius_mossotti_index(delta, N: int, Z: float, beta: float, gamma0: float = 1.0,
                            gamma_deph: float = 0.0, k: float = TWO_PI):
    """Dressed index from the reduced-unit Clausius-Mossotti relation.

    Solves (n^2 - 1)/(n^2 + 2) = (2 alpha / 3k)(N/Z) beta Im[G(0)] for n, with
    the same root convention as :func:`mean_field_wavenumber`.
    """
    delta = np.asarray(delta, dtype=float)
    alpha = 1.0 / (delta - 0.5j * (gamma0 + gamma_deph))
    X = 2.0 * alpha / (3.0 * k) * (N / Z) * beta * 0.5 * gamma0
    n = np.sqrt((1.0 + 2.0 * X) / (1.0 - X) + 0j)
    return np.where(n.imag < 0, -n, n)


def near_field_shift(L: float, model: GreenModel) -> float:
    """Blue shift -Re[G(L)] of the composite propagator at the lattice spacing."""
    composite = GreenModel(Variant.COMPOSITE, model.k, model.beta, model.gamma0)
    return float(-np.real(green(L, composite)))
