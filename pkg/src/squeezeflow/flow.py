"""Classical flow of the swept oscillator and the Bogoliubov propagator it induces.

The Hamiltonian ``H_t = (p^2 + omega_t^2 x^2) / 2`` with ``omega_t^2 = alpha^2 t^2 + g^2``
is quadratic, so the Heisenberg evolution of ``a = (omega x + i p) / sqrt(2 omega)`` is
a linear map ``a -> U a + conj(V) a^*`` fixed entirely by the even/odd solutions of
Newton's equation ``x'' = -omega_t^2 x``. Everything here is built on that pair.
"""
import cmath
import math
from dataclasses import dataclass

from ._rk import IntegrationError, dop853

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-10
OMEGA_FLOOR = 1e-6
Z_CLAMP = 1.0 - 1e-12

__all__ = [
    "FrequencyProfile", "FundamentalPair", "SU11", "SqueezeParam", "IntegrationError",
    "InvalidBogoliubovError", "omega", "integrate_fundamental", "fundamental_pairs",
    "mode_amplitudes", "propagator", "propagator_from_pairs", "squeeze_of_vacuum",
    "rescale_alpha", "instantaneous_trajectory", "circular_distance",
]


class InvalidBogoliubovError(ValueError):
    """The matrix does not squeeze the vacuum into a normalizable state (|V| >= |U|)."""


@dataclass(frozen=True)
class FrequencyProfile:
    """Sweep ``omega_t^2 = alpha^2 t^2 + g^2`` with rate ``alpha > 0`` and gap ``g >= 0``."""

    alpha: float
    g: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.g >= 0:
            raise ValueError(f"g must be non-negative, got {self.g}")

    @property
    def delta_sq(self):
        """Dimensionless gap ``g^2 / alpha`` controlling the asymptotic squeezing."""
        return self.g * self.g / self.alpha

    def omega_sq(self, t):
        return self.alpha * self.alpha * t * t + self.g * self.g


@dataclass(frozen=True)
class FundamentalPair:
    """Even/odd solutions at time ``t``, normalized so their Wronskian is one."""

    t: float
    x_plus: float
    xdot_plus: float
    x_minus: float
    xdot_minus: float

    @property
    def wronskian(self):
        return self.x_plus * self.xdot_minus - self.xdot_plus * self.x_minus

    def reflect(self):
        """The pair at ``-t``: ``x_+`` is even and ``x_-`` odd."""
        return FundamentalPair(-self.t, self.x_plus, -self.xdot_plus, -self.x_minus, self.xdot_minus)

    def scaled(self, c):
        """Rescale ``x_+ -> c x_+`` and ``x_- -> x_- / c``, keeping the Wronskian."""
        return FundamentalPair(self.t, c * self.x_plus, c * self.xdot_plus,
                               self.x_minus / c, self.xdot_minus / c)


@dataclass(frozen=True)
class SqueezeParam:
    """Squeezing ``tau = r e^{i theta}``; the state obeys ``(a + z a^*) psi = 0`` up to
    normalization with ``mu / lambda = z = e^{i theta} tanh r``."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError(f"r must be non-negative, got {self.r}")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @classmethod
    def from_z(cls, z):
        z = complex(z)
        if abs(z) >= 1.0:
            raise ValueError(f"disk coordinate must satisfy |z| < 1, got {abs(z)}")
        return cls(math.atanh(abs(z)), cmath.phase(z) if z != 0 else 0.0)

    @property
    def tanh_r(self):
        return math.tanh(self.r)

    @property
    def z(self):
        return cmath.rect(math.tanh(self.r), self.theta)

    @property
    def tau(self):
        return cmath.rect(self.r, self.theta)


@dataclass(frozen=True)
class SU11:
    """Single-mode Bogoliubov matrix ``[[U, conj(V)], [V, conj(U)]]`` acting on ``(a, conj(a))``."""

    U: complex
    V: complex

    @property
    def defect(self):
        """``|U|^2 - |V|^2 - 1``, zero for an exact SU(1,1) element."""
        return abs(self.U) ** 2 - abs(self.V) ** 2 - 1.0

    def matrix(self):
        return ((self.U, self.V.conjugate()), (self.V, self.U.conjugate()))

    def __matmul__(self, other):
        """Composition: ``(self @ other)`` applies ``other`` first."""
        return SU11(self.U * other.U + self.V.conjugate() * other.V,
                    self.V * other.U + self.U.conjugate() * other.V)

    def inverse(self):
        return SU11(self.U.conjugate(), -self.V)

    def decompose(self):
        """Split ``phi = phi_tau @ phi_beta`` into a rotation angle and a squeeze.

        Here ``phi_beta = diag(e^{i beta}, e^{-i beta})`` and ``phi_tau`` has entries
        ``cosh r`` and ``e^{-i theta} sinh r`` in the ``V`` slot. Returns
        ``(beta, SqueezeParam(r, theta))``.
        """
        beta = cmath.phase(self.U)
        r = math.acosh(max(1.0, abs(self.U)))
        theta = beta - cmath.phase(self.V) if self.V != 0 else 0.0
        return beta, SqueezeParam(r, theta)


def omega(profile, t):
    """Instantaneous frequency ``sqrt(alpha^2 t^2 + g^2)``."""
    return math.sqrt(profile.omega_sq(t))


def _rhs(profile):
    a2 = profile.alpha * profile.alpha
    g2 = profile.g * profile.g

    def f(t, y):
        w2 = a2 * t * t + g2
        return [y[1], -w2 * y[0], y[3], -w2 * y[2]]

    return f


def fundamental_pairs(profile, times, tol=DEFAULT_TOL):
    """Fundamental pairs at several non-negative times, from a single integration pass.

    Returns a list aligned with ``times`` (which need not be sorted).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    ts = [float(t) for t in times]
    if any(t < 0 for t in ts):
        raise ValueError("times must be non-negative")
    order = sorted(set(ts))
    states = dop853(_rhs(profile), 0.0, [1.0, 0.0, 0.0, 1.0], order, tol)
    by_t = {t: FundamentalPair(t, *s) for t, s in zip(order, states)}
    return [by_t[t] for t in ts]


def integrate_fundamental(profile, t, tol=DEFAULT_TOL):
    """Even/odd solutions at ``t >= 0`` from ``x_+(0)=1, x_+'(0)=0, x_-(0)=0, x_-'(0)=1``.

    Raises:
        IntegrationError: on step-size underflow, carrying the last good time.
    """
    return fundamental_pairs(profile, [t], tol)[0]


def mode_amplitudes(pair, omega_ref):
    """``a_pm = (omega x_pm + i xdot_pm) / sqrt(2 omega)`` for a reference frequency."""
    norm = math.sqrt(2.0 * omega_ref)
    a_plus = complex(omega_ref * pair.x_plus, pair.xdot_plus) / norm
    a_minus = complex(omega_ref * pair.x_minus, pair.xdot_minus) / norm
    return a_plus, a_minus


def propagator_from_pairs(pair1, pair2, omega1, omega2):
    """Bogoliubov matrix taking ``(a, conj a)`` at ``pair1.t`` to ``pair2.t``.

    ``omega1`` and ``omega2`` are the reference frequencies defining ``a`` at
    the two ends.
    """
    p1, m1 = mode_amplitudes(pair1, omega1)
    p2, m2 = mode_amplitudes(pair2, omega2)
    U = 1j * p2 * m1.conjugate() - 1j * m2 * p1.conjugate()
    V_bar = -1j * p2 * m1 + 1j * m2 * p1
    return SU11(U, V_bar.conjugate())


def _pairs_at(profile, times, tol):
    pairs = fundamental_pairs(profile, [abs(t) for t in times], tol)
    return [p if t >= 0 else p.reflect() for p, t in zip(pairs, times)]


def _reference(profile, t, omega_ref):
    if omega_ref is None:
        return max(omega(profile, t), OMEGA_FLOOR)
    if not omega_ref > 0:
        raise ValueError("reference frequencies must be positive")
    return omega_ref


def propagator(profile, t1, t2, omega1=None, omega2=None, tol=DEFAULT_TOL):
    """Exact propagator on ``[t1, t2]`` as an SU(1,1) matrix.

    The reference frequencies default to the instantaneous ``omega_t`` at each
    end (floored at ``OMEGA_FLOOR`` where the gap closes).
    """
    if t2 < t1:
        raise ValueError("only forward evolution is supported (t1 <= t2)")
    w1 = _reference(profile, t1, omega1)
    w2 = _reference(profile, t2, omega2)
    pair1, pair2 = _pairs_at(profile, [t1, t2], tol)
    return propagator_from_pairs(pair1, pair2, w1, w2)


def squeeze_of_vacuum(phi):
    """Squeezing of the evolved vacuum: ``e^{i theta} tanh r = -conj(V) / conj(U)``.

    Raises:
        InvalidBogoliubovError: if ``|V| >= |U|``.
    """
    if not abs(phi.V) < abs(phi.U):
        raise InvalidBogoliubovError(f"|V| = {abs(phi.V)} is not below |U| = {abs(phi.U)}")
    z = -phi.V.conjugate() / phi.U.conjugate()
    return SqueezeParam.from_z(z)


def rescale_alpha(t_prime, alpha):
    """Physical time for unit-rate time ``t_prime``: ``t = t_prime / sqrt(alpha)``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return t_prime / math.sqrt(alpha)


def circular_distance(a, b):
    """Distance between two angles on the circle, in ``[0, pi]``."""
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


def instantaneous_trajectory(profile, t_grid, tol=DEFAULT_TOL, omega_floor=OMEGA_FLOOR):
    """Squeezing of the state relative to the instantaneous ground state along a grid.

    The state starts in the ground state of ``H_{t_grid[0]}``. Returns a list of
    ``(t, z, w)`` with ``z`` the disk coordinate relative to the ground state of
    ``H_t`` and ``w = exp(i alpha t^2) z``. ``|z|`` is clamped below one; near
    the gap closing the reference frequency is floored at ``omega_floor``.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        return []
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be sorted ascending")
    pairs = _pairs_at(profile, ts, tol)
    w_start = max(omega(profile, ts[0]), omega_floor)
    rows = []
    for t, pair in zip(ts, pairs):
        w_t = max(omega(profile, t), omega_floor)
        phi = propagator_from_pairs(pairs[0], pair, w_start, w_t)
        z = -phi.V.conjugate() / phi.U.conjugate()
        if abs(z) > Z_CLAMP:
            z = z / abs(z) * Z_CLAMP
        rows.append((t, z, cmath.exp(1j * profile.alpha * t * t) * z))
    return rows
