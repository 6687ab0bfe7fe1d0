"""The single-mode squeezed states form the Poincaré disk.

The metric (1 - |z|^2)^{-2} |dz|^2 has constant curvature -4, and the Hermitian
structure on N-mode states is the mixed second derivative of
-log det(1 - Z Z*).
"""
import numpy as np

from squeezeflow.geometry import (TangentPair, disk_tensors, fd_check, gaussian_curvature_fd,
                                  hermitian_form, kahler_potential)

for z in (0.0, 0.5, 0.9j, 0.6 - 0.6j):
    t = disk_tensors(z)
    print(f"z = {z!s:>10}  g = {t.g_coeff:9.4f}  curvature (finite differences) = "
          f"{gaussian_curvature_fd(z):.6f}")

rng = np.random.default_rng(3)
n = 3
Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
Z = 0.7 * (Z + Z.T) / np.linalg.norm(Z + Z.T, 2)
T = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
T = (T + T.T) / np.linalg.norm(T + T.T, 2)

print("K(Z) =", kahler_potential(Z))
print("h(T, T) =", hermitian_form(TangentPair(Z, T, T)))
print("|dd-bar K - h| =", fd_check(Z, T, T))
