"""Collective polariton states of emitter chains in a single-mode nanoguide."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DomainError,
    EigenConvergenceError,
    FitError,
    GeometryError,
    PolariguideError,
    PreconditionError,
    RealizationError,
    SingularSystemError,
    ValidationError,
)
from .green import GreenModel, Variant, free_transverse_green, green, guided_green  # noqa: E402
from .solver import (  # noqa: E402
    DriveField,
    InteractionMatrix,
    Response,
    absorption,
    build_interaction_matrix,
    dispersion_map,
    respond,
    response_spectrum,
    solve_dipoles,
    total_field,
    transmission_reflection,
)
from .spectrum import (  # noqa: E402
    Classification,
    LocalizationFit,
    PolaritonMode,
    collective_spectrum,
    fit_localization,
    fourier_check,
    participation,
)
from .system import ChainRealization, ChainSpec, generate_chain, polarizability  # noqa: E402
