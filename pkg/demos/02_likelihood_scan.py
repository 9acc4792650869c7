"""Scan the angle log-likelihood of a 1-bit snapshot and locate its peak.

Run as: python3 demos/02_likelihood_scan.py [out.csv]
"""

import sys

import numpy as np

from onebitbeam import ArrayGeometry, LogLikContext, quantize_1bit, ula_response
from onebitbeam.likelihood import loglik_ula_coherent

rng = np.random.default_rng(7)
m, n_d = 16, 40
theta_true = 0.35
path_gain = 10 ** (-12 / 20)  # -12 dB path SNR

v = path_gain * ula_response(theta_true, m)
z = v[:, None] + np.sqrt(0.5) * (rng.standard_normal((m, n_d)) + 1j * rng.standard_normal((m, n_d)))
ctx = LogLikContext(quantize_1bit(z), ArrayGeometry.ula(m))

thetas = np.arange(-np.pi / 2 + 0.01, np.pi / 2, 0.01)
values = np.array([loglik_ula_coherent(t, ctx) for t in thetas])

peak = thetas[np.argmax(values)]
print(f"true angle {theta_true:+.3f} rad, likelihood peak {peak:+.3f} rad")
print("curve summary: min {:.1f}, max {:.1f} (log domain)".format(values.min(), values.max()))

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as f:
        f.write("theta_rad,loglik\n")
        for t, val in zip(thetas, values):
            f.write(f"{t:.6f},{val:.6f}\n")
    print(f"wrote {len(thetas)} points to {sys.argv[1]}")
