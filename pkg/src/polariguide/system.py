"""Chain geometry, emitter parameters and disorder realizations.

Units throughout the package: lengths in wavelengths (lambda = 1, so the
guided wavenumber is k = 2*pi), rates and detunings in units of the
radiative linewidth Gamma0 (by default Gamma0 = 1), dipole matrix element
and hbar set to one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, ValidationError

TWO_PI = 2.0 * np.pi

#: Minimal emitter separation in wavelengths; guards the 1/z^3 near field.
EPS_MIN = 1e-6


@dataclass(frozen=True)
class ChainSpec:
    """Physical configuration of an emitter chain inside the nanoguide.

    Parameters
    ----------
    N : int
        Number of emitters.
    L : float
        Lattice spacing in wavelengths.
    l : float
        Maximal longitudinal displacement of an emitter from its lattice
        site, in wavelengths.
    beta : float
        Fraction of single-emitter emission going into the guided mode.
    gamma0 : float
        Radiative linewidth.
    gamma_deph : float
        Additional dephasing rate. It broadens the polarizability only.
    k : float
        Guided wavenumber, 2*pi in units of 1/lambda.
    """

    N: int
    L: float
    l: float = 0.0
    beta: float = 0.4
    gamma0: float = 1.0
    gamma_deph: float = 0.0
    k: float = TWO_PI

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ValidationError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        checks = [
            (np.isfinite(self.L) and self.L > 0, f"L must be positive, got {self.L!r}"),
            (np.isfinite(self.l) and self.l >= 0, f"l must be non-negative, got {self.l!r}"),
            (0.0 <= self.beta <= 1.0, f"beta must lie in [0,1], got {self.beta!r}"),
            (np.isfinite(self.gamma0) and self.gamma0 > 0, f"gamma0 must be positive, got {self.gamma0!r}"),
            (np.isfinite(self.gamma_deph) and self.gamma_deph >= 0,
             f"gamma_deph must be non-negative, got {self.gamma_deph!r}"),
            (np.isfinite(self.k) and self.k > 0, f"k must be positive, got {self.k!r}"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ValidationError(msg)

    @property
    def gamma(self) -> float:
        """Total linewidth entering the polarizability."""
        return self.gamma0 + self.gamma_deph

    @property
    def length(self) -> float:
        """Filled length Z = N L."""
        return self.N * self.L


@dataclass(frozen=True, eq=False)
class ChainRealization:
    positions: np.ndarray
    seed: int
    spec: ChainSpec = field(repr=False)

    def __post_init__(self):
        z = np.array(self.positions, dtype=float)
        z.setflags(write=False)
        object.__setattr__(self, "positions", z)

    @property
    def N(self) -> int:
        return len(self.positions)

    def min_separation(self) -> float:
        if self.N < 2:
            return np.inf
        return float(np.min(np.diff(self.positions)))


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox-4x64) generator for a 64-bit seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed of realization ``index`` in an ensemble.

    Depends only on (master_seed, index), so the order in which realizations
    are evaluated never changes the draws.
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generate_chain(spec: ChainSpec, seed: int = 0) -> ChainRealization:
    """Draw emitter positions z_n = n L + l_n, l_n ~ U[-l, l] i.i.d.

    Raises GeometryError when two emitters end up closer than EPS_MIN.
    """
    if not isinstance(spec, ChainSpec):
        raise ValidationError("spec must be a ChainSpec")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    z = np.arange(spec.N, dtype=float) * spec.L
    if spec.l > 0:
        z = z + make_rng(seed).uniform(-spec.l, spec.l, size=spec.N)
        # sorting preserves the per-site bound |z_n - nL| <= l
        z = np.sort(z)
    chain = ChainRealization(z, seed, spec)
    if chain.min_separation() < EPS_MIN:
        raise GeometryError(
            f"minimal separation {chain.min_separation():.3g} below {EPS_MIN} (seed {seed})"
        )
    return chain


def chain_from_positions(positions, spec: ChainSpec, seed: int = 0) -> ChainRealization:
    """Wrap explicit positions (sorted on the way in) into a realization."""
    z = np.sort(np.asarray(positions, dtype=float).ravel())
    if len(z) != spec.N:
        raise ValidationError(f"got {len(z)} positions for N={spec.N}")
    chain = ChainRealization(z, seed, spec)
    if chain.min_separation() < EPS_MIN:
        raise GeometryError(f"minimal separation {chain.min_separation():.3g} below {EPS_MIN}")
    return chain


def polarizability(delta, spec: ChainSpec):
    """Semiclassical polarizability 1/(delta - i Gamma/2), Gamma = gamma0 + gamma_deph."""
    return 1.0 / (np.asarray(delta, dtype=float) - 0.5j * spec.gamma)
