"""Polariton eigenspectrum of the inverse collective polarizability.

Eigenvalues are read at Delta = 0 as ``delta - i gamma/2``: ``delta`` is the
collective shift and ``gamma`` the collective linewidth. A resonance at shift
``delta`` appears in driven spectra at detuning Delta = -delta.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import EigenConvergenceError, FitError, PreconditionError, ValidationError
from .green import GreenModel, Variant
from .solver import build_interaction_matrix
from .system import ChainRealization

EIG_RESIDUAL_TOL = 1e-8
FIT_THRESHOLD = 1e-8
LOCALIZED_R2 = 0.9


class Classification(str, enum.Enum):
    EXTENDED = "extended"
    LOCALIZED = "localized"
    PAIR = "pair"


@dataclass(frozen=True, eq=False)
class PolaritonMode:
    shift: float
    linewidth: float
    mode_function: np.ndarray
    participation: float
    residual: float

    @property
    def eigenvalue(self) -> complex:
        return complex(self.shift, -0.5 * self.linewidth)


@dataclass(frozen=True)
class LocalizationFit:
    center: int
    xi: float
    r_squared: float
    classification: Classification


def participation(psi) -> float:
    """Participation number 1 / sum |psi_n|^4 of a normalized mode function."""
    psi = np.asarray(psi)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-8:
        raise ValidationError(f"mode function must be normalized, |psi| = {norm!r}")
    return float(1.0 / np.sum(np.abs(psi) ** 4))


def collective_spectrum(chain: ChainRealization, model: GreenModel) -> list[PolaritonMode]:
    """All N polariton modes, sorted by shift (then linewidth).

    Raises EigenConvergenceError when an eigenpair misses the residual bound
    ||Ainv psi - mu psi|| <= 1e-8 ||Ainv||_F.
    """
    A = build_interaction_matrix(chain, model, 0.0).entries
    w, V = np.linalg.eig(A)
    V = V / np.linalg.norm(V, axis=0)
    fro = np.linalg.norm(A)
    res = np.linalg.norm(A @ V - V * w, axis=0) / fro
    if np.any(~np.isfinite(res)) or np.any(res > EIG_RESIDUAL_TOL):
        raise EigenConvergenceError(
            f"eigenpair residual {np.nanmax(res):.3g} exceeds {EIG_RESIDUAL_TOL}", matrix=A, residuals=res
        )
    order = np.lexsort((-2.0 * w.imag, w.real))
    p = 1.0 / np.sum(np.abs(V) ** 4, axis=0)
    return [
        PolaritonMode(float(w[j].real), float(-2.0 * w[j].imag), V[:, j].copy(), float(p[j]), float(res[j]))
        for j in order
    ]


def spectrum_arrays(modes):
    """(shift, linewidth, participation) arrays of a mode list."""
    return (np.array([m.shift for m in modes]),
            np.array([m.linewidth for m in modes]),
            np.array([m.participation for m in modes]))


def _bragg_order(chain: ChainRealization, model: GreenModel) -> int:
    spec = chain.spec
    if model.variant is not Variant.FAR_FIELD:
        raise PreconditionError("the circulant diagonalization needs the far-field model")
    if spec.l != 0:
        raise PreconditionError("the circulant diagonalization needs an ordered chain (l = 0)")
    if chain.N % 2:
        raise PreconditionError("the circulant diagonalization needs even N")
    order = model.k * spec.L / np.pi
    if abs(order - round(order)) > 1e-9:
        raise PreconditionError(f"kL/pi = {order:.6g} is not an integer (no Bragg condition)")
    return int(round(order))


def fourier_check(chain: ChainRealization, model: GreenModel) -> np.ndarray:
    """Eigenvalues at Delta = 0 from the Fourier transform of the circulant row.

    At a Bragg condition with even N, exp(ikL|m-n|) = s^(m-n) with s = +-1 is
    N-periodic in m-n, so the coupling matrix is circulant and its spectrum is
    the discrete Fourier transform of its first column.
    """
    p = _bragg_order(chain, model)
    spec = chain.spec
    N = chain.N
    s = -1.0 if p % 2 else 1.0
    col = -1j * model.beta * 0.5 * model.gamma0 * s ** np.arange(N)
    col[0] = -0.5j * spec.gamma
    return np.fft.fft(col)


def bragg_bright_mode(chain: ChainRealization, model: GreenModel) -> np.ndarray:
    """Superradiant Bragg mode (1, +-1, 1, ...)/sqrt(N); sign from the parity of kL/pi."""
    p = _bragg_order(chain, model)
    s = -1.0 if p % 2 else 1.0
    return s ** np.arange(chain.N) / np.sqrt(chain.N)


def classify(p: float, N: int, L: float, xi: float, r_squared: float) -> Classification:
    """Artifact convention: a good exponential fit wins, then participation decides.

    Localized if R^2 >= 0.9 and xi < N L / 4; otherwise Extended if p > N/4,
    Pair if p < 3, and Localized for the remaining confined modes.
    """
    if r_squared >= LOCALIZED_R2 and 0 < xi < N * L / 4:
        return Classification.LOCALIZED
    if p > N / 4:
        return Classification.EXTENDED
    if p < 3:
        return Classification.PAIR
    return Classification.LOCALIZED


def fit_localization(psi, chain: ChainRealization) -> LocalizationFit:
    """Fit an exponential envelope to a mode function.

    A straight line is fitted through log|psi_n|^2 against |z_n - z_peak| over
    the sites whose intensity exceeds 1e-8 of the peak. ``xi`` is the amplitude
    decay length, |psi|^2 ~ exp(-2|z|/xi), i.e. xi = -2/slope.
    """
    psi = np.asarray(psi)
    if chain.N < 8:
        raise PreconditionError("localization fits need N >= 8")
    intensity = np.abs(psi) ** 2
    center = int(np.argmax(intensity))
    use = intensity > FIT_THRESHOLD * intensity[center]
    if use.sum() < 4:
        raise FitError(f"only {int(use.sum())} usable sites for the envelope fit")
    x = np.abs(chain.positions - chain.positions[center])[use]
    y = np.log(intensity[use])
    if np.ptp(x) == 0:
        raise FitError("all usable sites at the same distance from the peak")
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = np.sum((y - (slope * x + intercept)) ** 2)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = float(min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)) if ss_tot > 0 else 0.0
    xi = float(-2.0 / slope) if slope < 0 else np.inf
    p = 1.0 / np.sum(np.abs(psi / np.linalg.norm(psi)) ** 4)
    return LocalizationFit(center, xi, r2, classify(p, chain.N, chain.spec.L, xi, r2))


def classify_modes(modes, chain: ChainRealization):
    """LocalizationFit per mode; modes that cannot be fitted get xi = nan, R^2 = nan."""
    fits = []
    for m in modes:
        try:
            fits.append(fit_localization(m.mode_function, chain))
        except (FitError, PreconditionError):
            center = int(np.argmax(np.abs(m.mode_function)))
            cls = classify(m.participation, chain.N, chain.spec.L, np.nan, np.nan)
            fits.append(LocalizationFit(center, np.nan, np.nan, cls))
    return fits
