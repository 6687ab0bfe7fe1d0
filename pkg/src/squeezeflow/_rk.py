"""Explicit adaptive DOP853 and fixed-step Gauss-Legendre integrators.

Both work on small state vectors stored as plain Python lists; the systems
integrated here have four components, where interpreter overhead dominates and
numpy temporaries would only slow things down.
"""
import math

import numpy as np

from . import _dop853 as _tab

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 6.0
# PI controller exponents (Gustafsson), for an error estimate of order 7.
_K = 8.0
PI_ALPHA = 0.7 / _K
PI_BETA = 0.4 / _K
# The per-step controller runs this much tighter than the requested tolerance
# so that accumulated drift over ~1e4 steps stays within O(100) * tol.
STEP_MARGIN = 0.1
MAX_STEPS = 5_000_000


class IntegrationError(RuntimeError):
    """Raised when the step size underflows or the step budget runs out.

    Attributes:
        t_last: the last time reached with an accepted step.
    """

    def __init__(self, message, t_last):
        super().__init__(f"{message} (last good t = {t_last!r})")
        self.t_last = t_last


def _error_norm(k, h, y, y_new, tol):
    n = len(y)
    e3 = e5 = 0.0
    for i in range(n):
        scale = tol + tol * max(abs(y[i]), abs(y_new[i]))
        s3 = 0.0
        for j, c in _tab.E3:
            s3 += c * k[j][i]
        s5 = 0.0
        for j, c in _tab.E5:
            s5 += c * k[j][i]
        e3 += (s3 / scale) ** 2
        e5 += (s5 / scale) ** 2
    if e5 == 0.0 and e3 == 0.0:
        return 0.0
    return abs(h) * e5 / math.sqrt((e5 + 0.01 * e3) * n)


def _initial_step(rhs, t0, y0, f0, tol):
    # Hairer-Norsett-Wanner starting step heuristic.
    d0 = math.sqrt(sum((v / (tol + tol * abs(v))) ** 2 for v in y0) / len(y0))
    d1 = math.sqrt(sum((v / (tol + tol * abs(u))) ** 2 for v, u in zip(f0, y0)) / len(y0))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = [u + h0 * v for u, v in zip(y0, f0)]
    f1 = rhs(t0 + h0, y1)
    d2 = math.sqrt(
        sum(((b - a) / (tol + tol * abs(u))) ** 2 for a, b, u in zip(f0, f1, y0)) / len(y0)
    ) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, 1e-3 * h0)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / 8.0)
    return min(100 * h0, h1)


def dop853(rhs, t0, y0, t_out, tol):
    """Integrate ``y' = rhs(t, y)`` forward and record ``y`` at each time in ``t_out``.

    ``t_out`` must be sorted ascending with every entry ``>= t0``. Steps are clipped
    to land exactly on the requested output times. Returns a list of state lists,
    one per output time.
    """
    rtol = tol * STEP_MARGIN
    t = float(t0)
    y = [float(v) for v in y0]
    out = []
    targets = [float(s) for s in t_out]
    if any(b < a for a, b in zip(targets, targets[1:])) or (targets and targets[0] < t):
        raise ValueError("output times must be sorted and not precede t0")

    f = rhs(t, y)
    h = None
    err_old = 1e-4
    n_steps = 0
    n = len(y)
    stages = _tab.A
    nodes = _tab.C
    weights = _tab.B
    for target in targets:
        while t < target:
            if target - t <= 10.0 * abs(math.nextafter(t, math.inf) - t):
                # Output times within a few ulps of each other share one state.
                t = target
                break
            if h is None:
                h = _initial_step(rhs, t, y, f, rtol)
            last = False
            h_try = h
            if t + h_try >= target:
                h_try = target - t
                last = True
            while True:
                min_step = 10.0 * abs(math.nextafter(t, math.inf) - t)
                if h_try < min_step:
                    raise IntegrationError("step size underflow", t)
                k = [f]
                for s in range(1, 12):
                    ys = list(y)
                    for j, a in stages[s]:
                        kj = k[j]
                        for i in range(n):
                            ys[i] += h_try * a * kj[i]
                    k.append(rhs(t + nodes[s] * h_try, ys))
                y_new = list(y)
                for j, b in weights:
                    kj = k[j]
                    for i in range(n):
                        y_new[i] += h_try * b * kj[i]
                f_new = rhs(t + h_try, y_new)
                k.append(f_new)
                err = _error_norm(k, h_try, y, y_new, rtol)
                if err <= 1.0:
                    break
                h_try *= max(MIN_FACTOR, SAFETY * err ** (-1.0 / _K))
                last = False
            n_steps += 1
            if n_steps > MAX_STEPS:
                raise IntegrationError("step budget exhausted", t)
            t = target if last else t + h_try
            y = y_new
            f = f_new
            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = SAFETY * err ** (-PI_ALPHA) * err_old ** PI_BETA
                factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
            err_old = max(err, 1e-4)
            if not last:
                h = h_try * factor
        out.append(list(y))
    return out


# Gauss-Legendre collocation with three stages (order 6).
_R15 = math.sqrt(15.0)
GL_C = np.array([0.5 - _R15 / 10.0, 0.5, 0.5 + _R15 / 10.0])
GL_A = np.array([
    [5.0 / 36.0, 2.0 / 9.0 - _R15 / 15.0, 5.0 / 36.0 - _R15 / 30.0],
    [5.0 / 36.0 + _R15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - _R15 / 24.0],
    [5.0 / 36.0 + _R15 / 30.0, 2.0 / 9.0 + _R15 / 15.0, 5.0 / 36.0],
])
GL_B = np.array([5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0])


def gauss_legendre_linear(coeff, t0, y0, t1, n_steps):
    """Fixed-step 3-stage Gauss-Legendre for the linear system ``y' = coeff(t) @ y``.

    ``y0`` may be a vector or a matrix of column vectors. Being a collocation
    method, the scheme preserves quadratic invariants such as the Wronskian.
    """
    y = np.array(y0, dtype=float)
    d = y.shape[0]
    h = (t1 - t0) / n_steps
    eye = np.eye(3 * d)
    for step in range(n_steps):
        t = t0 + step * h
        mats = [np.asarray(coeff(t + c * h), dtype=float) for c in GL_C]
        # Stage slopes K_i = M_i (y + h sum_j a_ij K_j), solved as one block system.
        lhs = eye.copy()
        for i in range(3):
            for j in range(3):
                lhs[i * d:(i + 1) * d, j * d:(j + 1) * d] -= h * GL_A[i, j] * mats[i]
        rhs = np.concatenate([m @ y for m in mats], axis=0)
        k = np.linalg.solve(lhs, rhs)
        y = y + h * sum(GL_B[i] * k[i * d:(i + 1) * d] for i in range(3))
    return y


def gauss_legendre_to_tol(coeff, t0, y0, t1, tol, n_start=16, n_max=2**20):
    """Run :func:`gauss_legendre_linear`, doubling the step count until two successive
    results differ by at most ``tol`` (max-norm). Returns ``(y, n_steps)``."""
    n = n_start
    prev = gauss_legendre_linear(coeff, t0, y0, t1, n)
    while n < n_max:
        n *= 2
        cur = gauss_legendre_linear(coeff, t0, y0, t1, n)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur, n
        prev = cur
    raise IntegrationError("fixed-step refinement did not reach tolerance", t0)
