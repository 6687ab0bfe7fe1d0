"""Squeezing of the vacuum by a sweep through a spectral collapse.

Modules:
    flow        classical flow and the SU(1,1) propagator of the swept oscillator
    weber       Gamma, Kummer M and the even/odd Weber solutions with their asymptotics
    bogoliubov  N-mode Bogoliubov transformations and quasi-free states
    squeezed    occupation statistics, fidelity and wavefunction of a squeezed vacuum
    geometry    Kähler structure of the squeezed-state manifold
    cli         command-line front end
"""
__version__ = "0.1.0"

from .flow import (SU11, FrequencyProfile, FundamentalPair, IntegrationError,
                   InvalidBogoliubovError, SqueezeParam, instantaneous_trajectory,
                   integrate_fundamental, omega, propagator, squeeze_of_vacuum)
from .bogoliubov import BogoliubovN, QuasiFreeState
from .squeezed import fidelity, occupation_probs

__all__ = [
    "__version__", "SU11", "FrequencyProfile", "FundamentalPair", "IntegrationError",
    "InvalidBogoliubovError", "SqueezeParam", "instantaneous_trajectory", "integrate_fundamental",
    "omega", "propagator", "squeeze_of_vacuum", "BogoliubovN", "QuasiFreeState", "fidelity",
    "occupation_probs",
]
