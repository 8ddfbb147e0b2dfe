"""Driven coupled-dipole problem on an emitter chain.

The inverse collective polarizability has entries

    Ainv[m, n] = delta_mn (Delta - i Gamma/2) - G(z_n - z_m) (1 - delta_mn)

and the induced dipoles solve ``Ainv @ d = E_ext(z)``. Observables are read
from the guided channel only; out-of-guide scattering and dephasing show up
as ``loss``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, GeometryError, SingularSystemError, ValidationError
from .green import GreenModel, green
from .system import EPS_MIN, ChainRealization, polarizability

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class InteractionMatrix:
    entries: np.ndarray
    delta: float
    chain: ChainRealization
    model: GreenModel


@dataclass(frozen=True)
class DriveField:
    """External field E0 exp(i q z); q defaults to the guided wavenumber."""

    amplitude: complex = 1.0
    q: float | None = None

    def __post_init__(self):
        if abs(self.amplitude) == 0:
            raise ValidationError("drive amplitude must be nonzero")

    def wavenumber(self, model: GreenModel) -> float:
        return model.k if self.q is None else float(self.q)

    def sample(self, z, model: GreenModel):
        return self.amplitude * np.exp(1j * self.wavenumber(model) * np.asarray(z, dtype=float))


@dataclass(frozen=True, eq=False)
class Response:
    dipoles: np.ndarray
    transmission: float
    reflection: float
    loss: float
    absorption: float


def coupling_matrix(chain: ChainRealization, model: GreenModel) -> np.ndarray:
    """Detuning-independent part -G(z_n - z_m) with a zero diagonal."""
    z = chain.positions
    if chain.N > 1 and chain.min_separation() < EPS_MIN:
        raise GeometryError("emitters closer than the minimal separation")
    dz = z[None, :] - z[:, None]
    C = -np.asarray(green(dz, model), dtype=complex).reshape(dz.shape)
    np.fill_diagonal(C, 0.0)
    return C


def build_interaction_matrix(chain: ChainRealization, model: GreenModel, delta: float = 0.0,
                             coupling: np.ndarray | None = None) -> InteractionMatrix:
    C = coupling_matrix(chain, model) if coupling is None else coupling
    A = C.copy()
    np.fill_diagonal(A, 1.0 / polarizability(delta, chain.spec))
    return InteractionMatrix(A, float(delta), chain, model)


def solve_dipoles(matrix: InteractionMatrix, drive: DriveField | np.ndarray, positions=None) -> np.ndarray:
    """Solve Ainv d = E_ext by LU factorization.

    ``drive`` is either a DriveField (sampled at ``positions``, by default the
    chain positions) or an explicit right-hand side of shape (N,) or (N, k).
    """
    if isinstance(drive, DriveField):
        z = matrix.chain.positions if positions is None else np.asarray(positions, dtype=float)
        rhs = drive.sample(z, matrix.model)
    else:
        rhs = np.asarray(drive, dtype=complex)
    A = matrix.entries
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(A, check_finite=True)
    except (ValueError, scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
        raise SingularSystemError(str(exc)) from exc
    d = scipy.linalg.lu_solve(lu, rhs)
    res = np.linalg.norm(A @ d - rhs, axis=0)
    scale = np.linalg.norm(rhs, axis=0)
    if not np.all(np.isfinite(d)) or np.any(res > RESIDUAL_TOL * scale):
        raise SingularSystemError(
            f"linear solve residual {np.max(res / np.where(scale > 0, scale, 1)):.3g} exceeds {RESIDUAL_TOL}"
        )
    return d


def total_field(z, dipoles, chain: ChainRealization, model: GreenModel, drive: DriveField,
                guided_only: bool = False):
    """E_ext(z) + sum_n G(z - z_n) d_n at observation points ``z``.

    With ``guided_only`` only the guided-mode part of G is propagated, which is
    what a detector far down the waveguide sees.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    sep = z[:, None] - chain.positions[None, :]
    if np.any(np.abs(sep) < EPS_MIN):
        raise DomainError("total field requested at an emitter position")
    if guided_only:
        G = 1j * model.beta * 0.5 * model.gamma0 * np.exp(1j * model.k * np.abs(sep))
    else:
        G = green(sep, model)
    E = drive.sample(z, model) + G @ np.asarray(dipoles)
    return E


def _guided_amplitudes(chain, model, drive, d):
    q = drive.wavenumber(model)
    if not np.isclose(abs(q), model.k, rtol=1e-12, atol=0):
        raise ValidationError("transmission/reflection need a guided drive with |q| = k")
    s = np.sign(q)
    c = 1j * model.beta * 0.5 * model.gamma0
    z = chain.positions
    t = 1.0 + c * np.sum(np.exp(-1j * s * model.k * z) * d, axis=0) / drive.amplitude
    r = c * np.sum(np.exp(1j * s * model.k * z) * d, axis=0) / drive.amplitude
    return t, r


def _absorption(chain, model, drive, d, E):
    alpha0 = polarizability(0.0, chain.spec)
    norm = chain.N * alpha0.imag * abs(drive.amplitude) ** 2
    return np.sum((d * np.conj(E)).imag, axis=0) / norm


def respond(chain: ChainRealization, model: GreenModel, delta: float,
            drive: DriveField | None = None, coupling: np.ndarray | None = None) -> Response:
    """Dipoles, guided T/R, loss and normalized absorption at one detuning."""
    drive = DriveField() if drive is None else drive
    M = build_interaction_matrix(chain, model, delta, coupling)
    E = drive.sample(chain.positions, model)
    d = solve_dipoles(M, E)
    t, r = _guided_amplitudes(chain, model, drive, d)
    T, R = float(abs(t) ** 2), float(abs(r) ** 2)
    return Response(d, T, R, 1.0 - T - R, float(_absorption(chain, model, drive, d, E)))


def transmission_reflection(chain: ChainRealization, model: GreenModel, delta: float,
                            drive: DriveField | None = None):
    """Guided (T, R, loss) with loss = 1 - T - R."""
    resp = respond(chain, model, delta, drive)
    return resp.transmission, resp.reflection, resp.loss


def absorption(chain: ChainRealization, model: GreenModel, delta: float,
               drive: DriveField | None = None) -> float:
    """sum_m Im[d_m conj(E_ext(z_m))] normalized to N uncoupled resonant emitters."""
    drive = DriveField() if drive is None else drive
    M = build_interaction_matrix(chain, model, delta)
    E = drive.sample(chain.positions, model)
    d = solve_dipoles(M, E)
    return float(_absorption(chain, model, drive, d, E))


def response_spectrum(chain: ChainRealization, model: GreenModel, deltas, drive: DriveField | None = None):
    """T, R, loss and absorption on a detuning grid.

    Returns a dict of arrays keyed by ``delta``, ``T``, ``R``, ``loss`` and
    ``absorption``.
    """
    drive = DriveField() if drive is None else drive
    deltas = np.asarray(deltas, dtype=float)
    C = coupling_matrix(chain, model)
    out = {key: np.empty(len(deltas)) for key in ("T", "R", "loss", "absorption")}
    for i, delta in enumerate(deltas):
        resp = respond(chain, model, delta, drive, coupling=C)
        out["T"][i] = resp.transmission
        out["R"][i] = resp.reflection
        out["loss"][i] = resp.loss
        out["absorption"][i] = resp.absorption
    out["delta"] = deltas
    return out


def dispersion_map(chain: ChainRealization, model: GreenModel, q_grid, delta_grid,
                   amplitude: complex = 1.0) -> np.ndarray:
    """Normalized absorption for drives E0 exp(i q z).

    ``q_grid`` is in units of k, ``delta_grid`` in units of gamma0. The result
    has shape (len(delta_grid), len(q_grid)): rows are detunings, columns are
    wavenumbers.
    """
    q_grid = np.asarray(q_grid, dtype=float)
    delta_grid = np.asarray(delta_grid, dtype=float)
    if q_grid.size == 0 or delta_grid.size == 0:
        raise ValidationError("dispersion grids must be nonempty")
    if not (np.all(np.isfinite(q_grid)) and np.all(np.isfinite(delta_grid))):
        raise ValidationError("dispersion grids must be finite")
    C = coupling_matrix(chain, model)
    E = amplitude * np.exp(1j * np.outer(chain.positions, q_grid * model.k))
    drive = DriveField(amplitude)
    out = np.empty((len(delta_grid), len(q_grid)))
    for i, delta in enumerate(delta_grid):
        M = build_interaction_matrix(chain, model, delta, C)
        d = solve_dipoles(M, E)
        out[i] = _absorption(chain, model, drive, d, E)
    return out
