"""Bell-state preparation, tomography and relaxation of a heteronuclear 1H-13C spin pair."""

from .core import BELL_KINDS, SpinSystem, bell_state, deviation_fidelity, equilibrium_state
from .relax import RateMatrix, fit_initial_exponential, simulate_decay
from .seq import builtin_program, execute, parse
from .spectra import antisymmetric_component, spectrum_of_state
from .tomo import RfErrorModel, simulate_tomography

__version__ = "0.1.0"
