"""Steering vectors and 1-bit measurements, the raw ingredients.

Run as: python3 demos/01_array_responses_and_quantization.py
"""

import numpy as np

from onebitbeam import ArrayGeometry, quantize_1bit, ula_response, upa_response

# A linear array steers with a single phase ramp; element 0 is the reference.
theta = np.deg2rad(25.0)
a = ula_response(theta, 8)
print("ULA response at 25 deg, 8 elements:")
print(np.round(a, 3))
print("all unit modulus:", np.allclose(np.abs(a), 1.0))

# A planar array is the Kronecker product of a vertical ramp (elevation) and
# a horizontal ramp (azimuth, foreshortened by cos(elevation)).
g = ArrayGeometry.upa(4, 4)
b = upa_response(np.deg2rad(30.0), np.deg2rad(-10.0), g)
print("\nUPA 4x4 response, first row of the array:")
print(np.round(b[:4], 3))

# One-bit ADCs keep only the sign of each quadrature component.  Noise is not
# a nuisance here: it dithers the signs, which is what makes the per-antenna
# bit statistics informative about sub-LSB amplitudes.
rng = np.random.default_rng(0)
signal = 0.1 * a  # a -20 dB path: far below the unit-variance noise floor
z = signal[:, None] + np.sqrt(0.5) * (
    rng.standard_normal((8, 2000)) + 1j * rng.standard_normal((8, 2000))
)
snap = quantize_1bit(z)
print("\nper-antenna positive-sign fractions (real part):")
print(np.round(snap.mu_counts / snap.n_slots, 3))
print("they trace the signal's real part:", np.round(signal.real, 3))
