"""End-to-end narrowband run: estimate three paths from 1-bit data, then beamform.

Run as: python3 demos/03_narrowband_beamforming.py
"""

import dataclasses

import numpy as np

from onebitbeam import beam_estimation, beam_ideal, beam_strong, estimate_gains, estimate_upa, quantize_1bit
from onebitbeam.harness import composite_receive_vector, config_from_mapping, generate_narrowband_scenario

cfg = config_from_mapping(
    {
        "scenario": "narrowband-upa",
        "seed": 11,
        "realizations": 1,
        "rx": [16, 16],
        "tx": [4, 4],
        "n_paths": 3,
        "path_snr_db": [-18, -18, -18],
        "n_d": [40],
    }
)
rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(0,)))
scenario = generate_narrowband_scenario(cfg, rng)
v = composite_receive_vector(scenario, cfg.rx)
n_d = cfg.n_d_schedule[0]
noise = np.sqrt(0.5) * (rng.standard_normal((cfg.rx.size, n_d)) + 1j * rng.standard_normal((cfg.rx.size, n_d)))
snapshot = quantize_1bit(v[:, None] + noise)

print(f"{cfg.rx.size}-antenna planar array, {len(scenario.path_set)} paths at -18 dB, {n_d} pilot slots\n")
estimates = estimate_upa(snapshot, cfg.rx, cfg.n_paths)
gains = estimate_gains(snapshot, cfg.rx, estimates)
estimates = [dataclasses.replace(e, gain=g) for e, g in zip(estimates, gains)]

print("path    true (az, el)      estimated (az, el)    |gain| est/true")
for p, zeta in zip(scenario.path_set, scenario.zetas):
    best = min(estimates, key=lambda e: abs(e.elevation - p.aoa_elevation))
    print(
        f"      ({p.aoa_azimuth:+.3f}, {p.aoa_elevation:+.3f})   "
        f"({best.azimuth:+.3f}, {best.elevation:+.3f})      {abs(best.gain):.3f}/{abs(zeta):.3f}"
    )

b_ideal = beam_ideal(scenario.zetas, [(p.aoa_azimuth, p.aoa_elevation) for p in scenario.path_set], cfg.rx)
b_est = beam_estimation(estimates, cfg.rx)
b_str = beam_strong(estimates, snapshot, cfg.rx)

ideal_power = np.abs(b_ideal.weights.conj() @ v) ** 2
print("\nfraction of the ideal post-combining power each scheme recovers:")
for beam in (b_ideal, b_est, b_str):
    eta = np.abs(beam.weights.conj() @ v) ** 2 / ideal_power
    print(f"  {beam.scheme:6s} eta = {eta:.3f}")
print("\nsteering at the single strongest path forfeits the other two, which is")
print("why the joint phase-aligned beamformer sits far above it here.")
