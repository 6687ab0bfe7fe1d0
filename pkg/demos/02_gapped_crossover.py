"""With a gap g the squeezing interpolates to zero as delta^2 = g^2/alpha grows.

Measured squeezing is compared with tanh r = (1 + exp(pi delta^2))^{-1/2} and the
tunneling probability 1 - p0 with its Landau-Zener-like asymptote.
"""
import math

from squeezeflow import FrequencyProfile, fidelity, propagator, squeeze_of_vacuum
from squeezeflow.weber import asymptotic_squeeze

T = 60.0
print(" delta^2   tanh r     closed form   1 - p0      (1/2) e^{-pi d}")
for d in (0.0, 0.25, 0.5, 1.0, 2.0, 3.0):
    profile = FrequencyProfile(1.0, math.sqrt(d))
    tau = squeeze_of_vacuum(propagator(profile, -T, T))
    closed, _ = asymptotic_squeeze(d)
    print(f"  {d:5.2f}   {tau.tanh_r:.6f}   {closed:.6f}     {1 - fidelity(tau):.3e}   "
          f"{0.5 * math.exp(-math.pi * d):.3e}")

# The rate alpha drops out once time is measured in units of alpha^{-1/2}.
for alpha in (1.0, 4.0, 9.0):
    t = T / math.sqrt(alpha)
    tau = squeeze_of_vacuum(propagator(FrequencyProfile(alpha), -t, t))
    print(f"alpha = {alpha}: tanh r = {tau.tanh_r:.12f}")
