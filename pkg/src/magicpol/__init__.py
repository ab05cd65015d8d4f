"""Dynamic polarizabilities, magic lattice frequencies and trap-release heating for alkali atoms."""

__version__ = "0.1.0"

from .atomdata import (
    Coincidence,
    Dataset,
    Level,
    ModelConfig,
    PolarizabilityModel,
    ReducedDipole,
    build_model,
    bundled_config,
    find_coincidences,
    load_bundled,
    load_dataset,
    load_dipoles,
    load_levels,
)
from .errors import (
    DataError,
    DataWarning,
    DegenerateMatchError,
    DomainError,
    EmptyModelError,
    MagicPolError,
    ModelError,
    ResonanceProximityError,
    UnitError,
    UnsupportedTargetError,
)
from .heating import TrapSpec, heating_per_cycle, restored_energy, wavepacket_moments
from .matcher import (
    FREE_ELECTRON,
    ZERO,
    MagicPoint,
    Resonance,
    find_magic_wavelength,
    find_zero_crossings,
    list_resonances,
)
from .polarizability import (
    PolarizabilityResult,
    TermContribution,
    alpha_curve,
    free_electron_alpha,
    synthetic_model,
    total_alpha,
    valence_alpha,
)
from .units import CONSTANTS, convert_alpha, convert_energy, convert_omega
