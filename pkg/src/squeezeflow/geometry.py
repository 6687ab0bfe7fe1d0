"""Kähler geometry of the manifold of squeezed states.

Squeezed states on ``N`` modes are labelled by symmetric ``Z`` with ``Z Z^* < 1``.
The pulled-back Hermitian structure is

    h(T1, T2) = tr((1 - Z Z^*)^{-1} T1 (1 - Z^* Z)^{-1} T2^*),

whose real part is the metric ``g`` and minus its imaginary part the 2-form ``omega``.
Its potential is ``K(Z) = -tr log(1 - Z Z^*)``, in the sense ``h = d d-bar K``.
For ``N = 1`` this is the Poincaré disk with ``g = |dz|^2 / (1 - |z|^2)^2``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import BogoliubovError, phi_from_z, takagi

DEFAULT_STEP = 1e-4
DISK_CURVATURE = -4.0

__all__ = [
    "TangentPair", "DiskTensors", "hermitian_form", "hermitian_form_alt", "metric", "two_form",
    "disk_tensors", "kahler_potential", "kahler_potential_takagi", "mixed_derivative",
    "fd_check", "gaussian_curvature_disk", "gaussian_curvature_fd",
]


def _as_point(Z):
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    if Z.shape[0] != Z.shape[1]:
        raise ValueError(f"base point must be square, got {Z.shape}")
    if np.max(np.abs(Z - Z.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(Z), initial=0.0)):
        raise BogoliubovError("base point must be symmetric")
    if Z.size and np.linalg.norm(Z, 2) >= 1.0:
        raise BogoliubovError("base point must be a strict contraction")
    return Z


def _as_tangent(T, n):
    T = np.atleast_2d(np.asarray(T, dtype=complex))
    if T.shape != (n, n):
        raise ValueError(f"tangent must be {n}x{n}, got {T.shape}")
    if np.max(np.abs(T - T.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(T), initial=0.0)):
        raise ValueError("tangent vectors must be symmetric")
    return T


@dataclass(frozen=True, eq=False)
class TangentPair:
    """Base point ``Z`` with two symmetric tangent directions."""

    Z: np.ndarray
    T1: np.ndarray
    T2: np.ndarray

    def __post_init__(self):
        Z = _as_point(self.Z)
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "T1", _as_tangent(self.T1, Z.shape[0]))
        object.__setattr__(self, "T2", _as_tangent(self.T2, Z.shape[0]))

    def swapped(self):
        return TangentPair(self.Z, self.T2, self.T1)


@dataclass(frozen=True)
class DiskTensors:
    """Coefficients of ``g = g_coeff |dz|^2`` and ``omega = omega_coeff (i/2) dz ^ dz-bar``."""

    g_coeff: float
    omega_coeff: float


def hermitian_form(tp):
    """``tr((1 - Z Z^*)^{-1} T1 (1 - Z^* Z)^{-1} T2^*)``."""
    Z, T1, T2 = tp.Z, tp.T1, tp.T2
    eye = np.eye(Z.shape[0])
    zh = Z.conj().T
    left = np.linalg.solve(eye - Z @ zh, T1)
    right = np.linalg.solve(eye - zh @ Z, T2.conj().T)
    return complex(np.trace(left @ right))


def hermitian_form_alt(tp, gauge=None):
    """Same structure as ``tr((U^* T1 conj U)(U^* T2 conj U)^*)`` with ``U`` from :func:`phi_from_z`.

    ``gauge`` optionally multiplies ``U`` by a unitary from the right, which must
    leave the value unchanged.
    """
    U = phi_from_z(tp.Z).U
    if gauge is not None:
        U = U @ np.asarray(gauge, dtype=complex)
    uh = U.conj().T
    a = uh @ tp.T1 @ U.conj()
    b = uh @ tp.T2 @ U.conj()
    return complex(np.trace(a @ b.conj().T))


def metric(tp):
    """Riemannian metric ``g(T1, T2) = Re h(T1, T2)``."""
    return hermitian_form(tp).real


def two_form(tp):
    """Kähler form ``omega(T1, T2) = -Im h(T1, T2)``."""
    return -hermitian_form(tp).imag


def disk_tensors(z):
    """Poincaré-disk coefficients at ``z``; both equal ``(1 - |z|^2)^{-2}``."""
    m = abs(complex(z))
    if m >= 1.0:
        raise ValueError(f"|z| must be below 1, got {m}")
    c = (1.0 - m * m) ** -2
    return DiskTensors(c, c)


def kahler_potential(Z):
    """``-tr log(1 - Z Z^*) = -log det(1 - Z Z^*)``."""
    Z = _as_point(Z)
    _, logdet = np.linalg.slogdet(np.eye(Z.shape[0]) - Z @ Z.conj().T)
    return float(-logdet)


def kahler_potential_takagi(Z):
    """The potential from the Takagi values: ``-sum log(1 - D_i^2)``."""
    _, d = takagi(_as_point(Z))
    return float(-np.sum(np.log1p(-d * d)))


def _margin(Z):
    return 1.0 - (np.linalg.norm(Z, 2) if Z.size else 0.0)


def mixed_derivative(f, Z, T1, T2, step):
    """``d^2/ds du-bar f(Z + s T1 + u T2)`` at ``s = u = 0`` by central differences.

    With ``s = p + i q`` and ``u = x + i y``, the Wirtinger derivative is
    ``(F_px + i F_py - i F_qx + F_qy) / 4``; each real mixed partial uses a
    four-point stencil.
    """
    def mixed(d1, d2):
        h = step
        return (f(Z + h * d1 + h * d2) - f(Z + h * d1 - h * d2)
                - f(Z - h * d1 + h * d2) + f(Z - h * d1 - h * d2)) / (4.0 * h * h)

    f_px = mixed(T1, T2)
    f_py = mixed(T1, 1j * T2)
    f_qx = mixed(1j * T1, T2)
    f_qy = mixed(1j * T1, 1j * T2)
    return 0.25 * complex(f_px + f_qy, f_py - f_qx)


def fd_check(Z, T1, T2, step=None):
    """``|d d-bar K(T1, T2) - h(T1, T2)|`` with ``K`` from :func:`kahler_potential`.

    The default step is ``1e-4`` times the distance of ``Z`` to the boundary
    (measured in operator norm, per unit tangent size).

    Raises:
        ValueError: if a stencil point leaves the manifold.
    """
    tp = TangentPair(Z, T1, T2)
    size = max(np.linalg.norm(tp.T1, 2), np.linalg.norm(tp.T2, 2), 1e-300)
    margin = _margin(tp.Z)
    if step is None:
        step = DEFAULT_STEP * margin / size
    if 2.0 * step * size >= margin:
        raise ValueError("finite-difference stencil leaves the unit ball; reduce step")
    fd = mixed_derivative(kahler_potential, tp.Z, tp.T1, tp.T2, step)
    return abs(fd - hermitian_form(tp))


def gaussian_curvature_disk(z):
    """Gaussian curvature of ``(1 - |z|^2)^{-2} |dz|^2``: ``-(2/g) d d-bar log g = -4`` everywhere."""
    if abs(complex(z)) >= 1.0:
        raise ValueError("|z| must be below 1")
    return DISK_CURVATURE


def gaussian_curvature_fd(z, step=None):
    """Curvature ``-Laplacian(log g) / (2 g)`` from a five-point Laplacian of ``log g``.

    The default step is ``1e-3`` times the distance of ``z`` to the unit circle.
    """
    z = complex(z)
    if step is None:
        step = 1e-3 * (1.0 - abs(z))
    if abs(z) + step >= 1.0:
        raise ValueError("stencil leaves the disk")

    def log_g(w):
        return -2.0 * math.log1p(-abs(w) ** 2)

    lap = (log_g(z + step) + log_g(z - step) + log_g(z + 1j * step) + log_g(z - 1j * step)
           - 4.0 * log_g(z)) / (step * step)
    return -lap / (2.0 * disk_tensors(z).g_coeff)
