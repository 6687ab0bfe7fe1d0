"""Observables of the single-mode squeezed vacuum.

The squeezed vacuum with parameter ``tau = r e^{i theta}`` is

    psi_tau = cosh(r)**-0.5 * sum_n e^{i n theta} (-tanh r)**n q_n |2n>,
    q_n = sqrt((2n - 1)!! / (2n)!!),

and :func:`fock_oracle` rebuilds it independently by exponentiating the
squeeze generator on a truncated Fock space.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .flow import SqueezeParam

MIN_DIM = 16
MAX_ORACLE_R = 1.5
NORM_LOSS_TOL = 1e-8

__all__ = [
    "OccupationSpectrum", "FockVector", "TruncationError", "NonNormalizableError",
    "q_squared", "occupation_probs", "fidelity", "series_amplitudes", "wavefunction",
    "rotate", "fock_oracle",
]


class TruncationError(ValueError):
    """The Fock-space truncation is too small for the requested squeezing."""


class NonNormalizableError(ValueError):
    """The Gaussian has no positive real width and cannot be normalized."""


@dataclass(frozen=True, eq=False)
class OccupationSpectrum:
    """Probabilities ``p_n`` for ``n = 0..n_max`` plus the weight beyond ``n_max``."""

    probs: np.ndarray
    tail_bound: float

    @property
    def n_max(self):
        return len(self.probs) - 1

    def mean(self):
        return float(np.dot(np.arange(len(self.probs)), self.probs))


@dataclass(frozen=True, eq=False)
class FockVector:
    """Amplitudes on ``|0>, ..., |dim - 1>``."""

    amplitudes: np.ndarray

    @property
    def dim(self):
        return len(self.amplitudes)

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other):
        """``|<self, other>|``, insensitive to a global phase."""
        a = np.asarray(other.amplitudes if isinstance(other, FockVector) else other, dtype=complex)
        m = min(len(a), self.dim)
        return abs(np.vdot(self.amplitudes[:m], a[:m]))


def q_squared(k_max):
    """``q_k**2 = (2k - 1)!! / (2k)!!`` for ``k = 0..k_max`` via ``q_k**2 = q_{k-1}**2 (2k - 1) / (2k)``."""
    out = np.empty(k_max + 1)
    out[0] = 1.0
    for k in range(1, k_max + 1):
        out[k] = out[k - 1] * (2 * k - 1) / (2 * k)
    return out


def occupation_probs(tau, n_max):
    """Excitation-number distribution of the squeezed vacuum up to ``n_max``.

    Even entries are ``tanh(r)**(2k) q_k**2 / cosh r``; odd entries are zero.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    k = np.arange(n_max // 2 + 1)
    t2 = math.tanh(tau.r) ** 2
    even = t2 ** k * q_squared(len(k) - 1) / math.cosh(tau.r)
    probs = np.zeros(n_max + 1)
    probs[0::2] = even
    tail = max(0.0, 1.0 - math.fsum(probs))
    return OccupationSpectrum(probs, tail)


def fidelity(tau):
    """Overlap probability ``|<0|psi_tau>|^2 = 1 / cosh r`` with the initial ground state."""
    return 1.0 / math.cosh(tau.r)


def series_amplitudes(tau, dim):
    """Amplitudes of the squeezed vacuum on ``|0>..|dim - 1>`` from the closed-form series."""
    if dim < 1:
        raise ValueError("dim must be positive")
    k = np.arange((dim + 1) // 2)
    coeff = (-math.tanh(tau.r)) ** k * np.sqrt(q_squared(len(k) - 1)) / math.sqrt(math.cosh(tau.r))
    amps = np.zeros(dim, dtype=complex)
    amps[0::2] = coeff * np.exp(1j * k * tau.theta)
    return FockVector(amps)


def wavefunction(tau, omega, x):
    """Normalized position-space wavefunction of the squeezed ground state of frequency ``omega``.

    ``psi(x) = N exp(-omega c x^2 / 2)`` with ``c = (1 + mu) / (1 - mu)``,
    ``mu = e^{i theta} tanh r``; ``psi(0)`` is real and positive. ``x`` may be an array.

    Raises:
        NonNormalizableError: when ``Re c <= 0`` (in particular ``mu = 1``).
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    mu = cmath.rect(math.tanh(tau.r), tau.theta)
    if abs(1.0 - mu) == 0.0:
        raise NonNormalizableError("mu = 1: the Gaussian width diverges")
    c = (1.0 + mu) / (1.0 - mu)
    if not c.real > 0:
        raise NonNormalizableError(f"width parameter {c} has non-positive real part")
    norm = (omega * c.real / math.pi) ** 0.25
    x = np.asarray(x, dtype=float)
    val = norm * np.exp(-0.5 * omega * c * x * x)
    return complex(val) if val.ndim == 0 else val


def rotate(tau, beta):
    """Squeezing after the phase rotation ``a -> e^{i beta} a``: ``theta -> theta + 2 beta``."""
    return SqueezeParam(tau.r, tau.theta + 2.0 * beta)


def _ladder(dim):
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def fock_oracle(tau, dim):
    """Squeezed vacuum from ``exp((conj(tau) a^2 - tau a*^2) / 2)|0>`` on a ``dim``-level truncation.

    The truncated generator stays anti-Hermitian, so norm leaking past the cut is
    invisible in the result; weight in the top quarter of levels is used as its proxy.

    Raises:
        ValueError: if ``dim < 16`` or ``r > 1.5``.
        TruncationError: if more than ``1e-8`` of the weight sits in the top quarter.
    """
    if dim < MIN_DIM:
        raise ValueError(f"dim must be at least {MIN_DIM}")
    if tau.r > MAX_ORACLE_R:
        raise ValueError(f"r must not exceed {MAX_ORACLE_R} for the truncated oracle")
    a = _ladder(dim)
    ad = a.conj().T
    t = tau.tau
    gen = 0.5 * (t.conjugate() * (a @ a) - t * (ad @ ad))
    vec = expm(gen)[:, 0]
    top = float(np.sum(np.abs(vec[dim - dim // 4:]) ** 2))
    if top > NORM_LOSS_TOL:
        raise TruncationError(f"weight {top:.2e} in the top quarter of {dim} levels; increase dim")
    return FockVector(vec)
