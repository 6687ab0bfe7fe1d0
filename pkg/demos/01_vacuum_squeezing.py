"""Sweeping the frequency through zero squeezes the vacuum.

Start in the ground state at t = -T, let omega_t = |t| pass through the
collapse at t = 0, and look at the state at t = +T.
"""
import math

import numpy as np

from squeezeflow import FrequencyProfile, propagator, squeeze_of_vacuum
from squeezeflow.flow import circular_distance, instantaneous_trajectory
from squeezeflow.squeezed import occupation_probs

profile = FrequencyProfile(alpha=1.0, g=0.0)

# The propagator over [-T, T] is an SU(1,1) matrix; the evolved vacuum is
# squeezed with e^{i theta} tanh r = -conj(V) / conj(U).
for T in (10.0, 20.0, 40.0, 80.0):
    phi = propagator(profile, -T, T)
    tau = squeeze_of_vacuum(phi)
    phase_err = circular_distance(tau.theta, -T * T - math.pi / 2)
    print(f"T = {T:5.1f}  tanh r = {tau.tanh_r:.6f}  "
          f"(1/sqrt 2 = {1 / math.sqrt(2):.6f})  phase error = {phase_err:.1e}")

# Excitations come in pairs: only even occupation numbers appear.
tau = squeeze_of_vacuum(propagator(profile, -40.0, 40.0))
probs = occupation_probs(tau, 8).probs
print("p_n:", np.array2string(probs, precision=5))

# Relative to the instantaneous ground state the disk coordinate runs out to
# the boundary at t = 0 and settles on w = -i/sqrt 2 afterwards.
rows = instantaneous_trajectory(profile, np.linspace(-30, 30, 13))
for t, z, w in rows:
    print(f"t = {t:6.1f}  |z| = {abs(z):.4f}  w = {w.real:+.4f}{w.imag:+.4f}i")
