"""Quasi-free states of N modes: mix, transform, and diagonalize back.

A gauge-invariant (thermal) state is scrambled by a random Bogoliubov
transformation; diagonalization recovers its occupations, and purity is the
statement that P is a projection.
"""
import numpy as np
from scipy.linalg import expm

from squeezeflow.bogoliubov import (BogoliubovN, act_on_state, diagonalize, gauge_state, is_pure,
                                    norm_constant, norm_constant_takagi, takagi, z_matrix)

rng = np.random.default_rng(7)
n = 4

# A Bogoliubov transformation is exp of [[A, conj B], [B, conj A]] with A
# anti-Hermitian and B symmetric.
a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
gen = np.block([[a - a.conj().T, (b + b.T).conj() / 4], [(b + b.T) / 4, (a - a.conj().T).conj()]])
phi = BogoliubovN.from_matrix(expm(0.5 * gen))

rho = np.array([0.0, 0.3, 0.3, 1.5])
state = act_on_state(phi, gauge_state(rho))
_, found = diagonalize(state)
print("occupations in :", rho)
print("occupations out:", np.round(found, 12))
print("pure?", is_pure(state), "| pure vacuum image?", is_pure(act_on_state(phi, gauge_state(np.zeros(n)))))

# The squeezed vector exp(-(a*, Z a*)/2)|0> has squared norm det(1 - Z Z*)^{-1/2};
# the Takagi values of Z give the same number as a product.
Z = z_matrix(phi)
W, d = takagi(Z)
print("Takagi values:", np.round(d, 6))
print("norm^2:", norm_constant(Z), "via Takagi:", norm_constant_takagi(Z))
