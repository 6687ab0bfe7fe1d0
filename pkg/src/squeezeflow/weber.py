"""Special functions for the Weber equation ``x'' + (t**2 + delta_sq) x = 0``.

Provides a complex Gamma function, Kummer's confluent hypergeometric function
``M(a, b, z)`` (Taylor series near the origin, the large-``|z|`` asymptotic
expansion beyond ``Z_SWITCH``), the even and odd solutions normalized at
``t = 0``, and their large-``t`` asymptotic data.
"""
import cmath
import math
from dataclasses import dataclass, field

import mpmath

Z_SWITCH = 30.0
TERM_CAP = 10_000

# Lanczos approximation with g = 7, n = 9 (Godfrey's coefficient set, as used in
# Numerical Recipes 3rd ed. and many ports). Relative error below 1e-14 over the
# strip 0 < Re z <= 10, |Im z| <= 10; see tests/test_weber.py for the check
# against mpmath.
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


class EvaluationError(ArithmeticError):
    """A series failed to converge within its term budget."""


def _is_nonpositive_integer(z):
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def gamma_complex(z):
    """Principal Gamma function of a complex argument.

    Raises:
        ValueError: at the poles ``z = 0, -1, -2, ...``.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise ValueError(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1.0 - z))
    z -= 1.0
    x = LANCZOS_COEFFS[0]
    for i, p in enumerate(LANCZOS_COEFFS[1:], start=1):
        x += p / (z + i)
    t = z + LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def rgamma_complex(z):
    """``1 / Gamma(z)``, equal to zero at the poles."""
    if _is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma_complex(z)


def _taylor_double(a, b, z):
    terms_re = [1.0]
    terms_im = [0.0]
    term = 1.0 + 0j
    for n in range(TERM_CAP):
        term *= (a + n) / (b + n) * z / (n + 1)
        terms_re.append(term.real)
        terms_im.append(term.imag)
        if n + 1 > abs(z) and abs(term) < 1e-18:
            return complex(math.fsum(terms_re), math.fsum(terms_im))
    raise EvaluationError(f"Taylor series of M({a}, {b}, {z}) exceeded {TERM_CAP} terms")


def _taylor_mp(a, b, z):
    # Terms peak near e^{|z|} while M(a, b, i y) stays O(1); carry enough bits to
    # absorb the cancellation.
    prec = 53 + int(math.ceil(abs(z) / math.log(2.0))) + 24
    with mpmath.workprec(prec):
        am, bm, zm = mpmath.mpc(a), mpmath.mpc(b), mpmath.mpc(z)
        term = mpmath.mpc(1)
        total = mpmath.mpc(1)
        tiny = mpmath.mpf(2) ** (-60)
        for n in range(TERM_CAP):
            term *= (am + n) / (bm + n) * zm / (n + 1)
            total += term
            if n + 1 > abs(z) and abs(term) <= tiny * abs(total):
                return complex(total)
    raise EvaluationError(f"Taylor series of M({a}, {b}, {z}) exceeded {TERM_CAP} terms")


def m_taylor(a, b, z):
    """Taylor series of ``M(a, b, z)``.

    Uses double precision with exact (``math.fsum``) accumulation for ``|z| <= 1``
    and raised working precision otherwise.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if z == 0:
        return 1.0 + 0j
    if abs(z) <= 1.0:
        return _taylor_double(a, b, z)
    return _taylor_mp(a, b, z)


def _asymptotic_sum(p, q, w):
    """Sum ``sum_n (p)_n (q)_n / n! * w**n`` up to its smallest term.

    Returns ``(sum, last_term_magnitude)``.
    """
    total = 1.0 + 0j
    term = 1.0 + 0j
    prev = 1.0
    for n in range(TERM_CAP):
        nxt = term * (p + n) * (q + n) / (n + 1) * w
        if abs(nxt) > prev:
            break
        term = nxt
        total += term
        prev = abs(term)
        if prev < 1e-17 * abs(total):
            break
    return total, prev


def m_asymptotic(a, b, z):
    """Large-``|z|`` expansion of ``M(a, b, z)``, each series cut at its smallest term."""
    a, b, z = complex(a), complex(b), complex(z)
    log_z = cmath.log(z)
    sign = 1.0 if z.imag >= 0.0 else -1.0
    s1, r1 = _asymptotic_sum(a, 1.0 + a - b, -1.0 / z)
    s2, r2 = _asymptotic_sum(b - a, 1.0 - a, 1.0 / z)
    pref1 = cmath.exp(sign * 1j * math.pi * a - a * log_z) * rgamma_complex(b - a)
    pref2 = cmath.exp(z + (a - b) * log_z) * rgamma_complex(a)
    g_b = gamma_complex(b)
    value = g_b * (pref1 * s1 + pref2 * s2)
    remainder = abs(g_b) * (abs(pref1) * r1 + abs(pref2) * r2)
    if remainder > 1e-8 * max(abs(value), 1e-300):
        raise EvaluationError(
            f"asymptotic expansion of M({a}, {b}, {z}) stalls at relative size {remainder:.1e}"
        )
    return value


def hyp_m(a, b, z, z_switch=Z_SWITCH):
    """Kummer's confluent hypergeometric function ``M(a, b, z)``.

    Args:
        a, b, z: complex parameters and argument; ``b`` must not be 0, -1, -2, ...
        z_switch: radius in ``|z|`` above which the asymptotic expansion is used.

    Raises:
        ValueError: if ``b`` is a non-positive integer.
        EvaluationError: if the selected expansion does not converge.
    """
    if _is_nonpositive_integer(b):
        raise ValueError(f"M(a, b, z) is undefined for b = {b}")
    if abs(z) <= z_switch:
        return m_taylor(a, b, z)
    return m_asymptotic(a, b, z)


def even_solution(t, delta_sq):
    """Even solution ``x_+`` and its derivative, with ``x_+(0) = 1, x_+'(0) = 0``.

    Built from ``exp(-i t^2/2) M((1 + i delta_sq)/4, 1/2, i t^2)``, which is real.
    """
    if t < 0:
        raise ValueError("t must be non-negative; use parity for t < 0")
    a = (1.0 + 1j * delta_sq) / 4.0
    z = 1j * t * t
    phase = cmath.exp(-0.5j * t * t)
    m = hyp_m(a, 0.5, z)
    dm = (a / 0.5) * hyp_m(a + 1.0, 1.5, z)
    x = phase * m
    xdot = phase * (-1j * t * m + 2j * t * dm)
    return x.real, xdot.real


def odd_solution(t, delta_sq):
    """Odd solution ``x_-`` and its derivative, with ``x_-(0) = 0, x_-'(0) = 1``."""
    if t < 0:
        raise ValueError("t must be non-negative; use parity for t < 0")
    a = (3.0 + 1j * delta_sq) / 4.0
    z = 1j * t * t
    phase = cmath.exp(-0.5j * t * t)
    m = hyp_m(a, 1.5, z)
    dm = (a / 1.5) * hyp_m(a + 1.0, 2.5, z)
    x = t * phase * m
    xdot = phase * (m + t * (-1j * t * m + 2j * t * dm))
    return x.real, xdot.real


@dataclass(frozen=True)
class AsymptoticData:
    """Large-``t`` behaviour of the normalized even/odd Weber solutions.

    For ``t -> inf``::

        x_pm(t) ~ amp_pm * t**-0.5 * (gamma_pm * exp(i theta_pm(t)) + c.c.)
        theta_pm(t) = t**2 / 2 + (delta_sq / 2) log t + phase_pm

    with ``gamma_+ = 1/Gamma((1 + i delta_sq)/4)``, ``gamma_- = 1/Gamma((3 + i delta_sq)/4)``.
    """

    delta_sq: float
    gamma_plus: complex = field(init=False)
    gamma_minus: complex = field(init=False)
    phase_plus: float = -math.pi / 8.0
    phase_minus: float = -3.0 * math.pi / 8.0

    def __post_init__(self):
        if self.delta_sq < 0:
            raise ValueError("delta_sq must be non-negative")
        object.__setattr__(self, "gamma_plus", rgamma_complex((1.0 + 1j * self.delta_sq) / 4.0))
        object.__setattr__(self, "gamma_minus", rgamma_complex((3.0 + 1j * self.delta_sq) / 4.0))

    def theta_plus(self, t):
        return 0.5 * t * t + 0.5 * self.delta_sq * math.log(t) + self.phase_plus

    def theta_minus(self, t):
        return 0.5 * t * t + 0.5 * self.delta_sq * math.log(t) + self.phase_minus

    @property
    def amp_plus(self):
        # Amplitudes fixed by the t = 0 normalization of even_solution/odd_solution.
        return math.sqrt(math.pi) * math.exp(-math.pi * self.delta_sq / 8.0)

    @property
    def amp_minus(self):
        return 0.5 * math.sqrt(math.pi) * math.exp(-math.pi * self.delta_sq / 8.0)

    def leading_even(self, t):
        return self.amp_plus / math.sqrt(t) * 2.0 * (self.gamma_plus * cmath.exp(1j * self.theta_plus(t))).real

    def leading_odd(self, t):
        return self.amp_minus / math.sqrt(t) * 2.0 * (self.gamma_minus * cmath.exp(1j * self.theta_minus(t))).real

    def squeeze_ratio(self):
        """``tanh r`` evaluated from the Gamma values rather than the closed form."""
        cross = self.gamma_plus * self.gamma_minus.conjugate()
        return abs((cross * cmath.exp(0.25j * math.pi)).real) / abs(cross)


def asymptotic_squeeze(delta_sq):
    """Closed-form asymptotic squeezing for the gapped sweep.

    Returns:
        ``(tanh_r, theta_offset)`` with ``tanh_r = (1 + exp(pi delta_sq))**-0.5`` and
        ``theta_offset = -pi/2 - arg(gamma_+ gamma_-)``, the ``t``-independent part
        of the squeezing phase ``-t^2 - delta_sq log t + theta_offset``.
    """
    if delta_sq < 0:
        raise ValueError("delta_sq must be non-negative")
    e = math.exp(-math.pi * delta_sq)
    tanh_r = math.sqrt(e) / math.sqrt(1.0 + e)
    data = AsymptoticData(delta_sq)
    offset = -0.5 * math.pi - cmath.phase(data.gamma_plus * data.gamma_minus)
    return tanh_r, offset


def asymptotic_theta(t, delta_sq):
    """Leading squeezing phase at time ``t > 0`` (unit sweep rate), reduced to ``[0, 2 pi)``."""
    _, offset = asymptotic_squeeze(delta_sq)
    log_term = delta_sq * math.log(t) if delta_sq else 0.0
    return (-t * t - log_term + offset) % (2.0 * math.pi)
