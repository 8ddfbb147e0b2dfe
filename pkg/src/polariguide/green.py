"""Emitter-to-emitter propagator G(z) of the nanoguide.

Two variants are provided. ``FAR_FIELD`` keeps only the guided mode,
``i beta (Gamma0/2) exp(ik|z|)``. ``COMPOSITE`` adds a (1 - beta) weighted
free-space transverse dipole field, which carries the -1/z^3 near field
between close emitters. In both variants the self term is G(0) = i Gamma0/2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .system import EPS_MIN, TWO_PI, ChainSpec


class Variant(str, enum.Enum):
    FAR_FIELD = "far-field"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class GreenModel:
    variant: Variant = Variant.FAR_FIELD
    k: float = TWO_PI
    beta: float = 0.4
    gamma0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))

    @classmethod
    def from_spec(cls, spec: ChainSpec, variant=Variant.FAR_FIELD) -> "GreenModel":
        return cls(Variant(variant), spec.k, spec.beta, spec.gamma0)

    def __call__(self, z):
        return green(z, self)


def guided_green(z, k=TWO_PI, beta=0.4, gamma0=1.0):
    """Guided-mode far field i beta (gamma0/2) exp(ik|z|), z != 0."""
    z = np.asarray(z, dtype=float)
    if np.any(z == 0):
        raise DomainError("guided_green is undefined at z = 0; use green() for the self term")
    return 1j * beta * 0.5 * gamma0 * np.exp(1j * k * np.abs(z))


def free_transverse_green(z, k=TWO_PI, gamma0=1.0):
    """Free-space field of a transverse dipole on its own axis.

    ``(3 gamma0/4) exp(ix) (1/x + i/x^2 - 1/x^3)`` with x = k|z|. Its imaginary
    part tends to gamma0/2 and its real part to -(3 gamma0/4)/x^3 as x -> 0.
    """
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) < EPS_MIN):
        raise DomainError(f"free_transverse_green needs |z| >= {EPS_MIN}")
    x = k * np.abs(z)
    return 0.75 * gamma0 * np.exp(1j * x) * (1.0 / x + 1j / x**2 - 1.0 / x**3)


def green(z, model: GreenModel):
    """G(z) for the given model; G(0) = i gamma0/2 exactly."""
    z = np.asarray(z, dtype=float)
    az = np.abs(z)
    if np.any((az > 0) & (az < EPS_MIN)):
        raise DomainError(f"0 < |z| < {EPS_MIN}: emitters closer than the minimal separation")
    out = np.full(z.shape, 0.5j * model.gamma0, dtype=complex)
    off = az > 0
    if np.any(off):
        zo = z[off]
        g = guided_green(zo, model.k, model.beta, model.gamma0)
        if model.variant is Variant.COMPOSITE and model.beta < 1.0:
            g = g + (1.0 - model.beta) * free_transverse_green(zo, model.k, model.gamma0)
        out[off] = g
    if out.ndim == 0:
        return complex(out)
    return out
