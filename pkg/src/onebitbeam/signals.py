"""Multipath channel synthesis, received-signal generation and 1-bit quantization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ArrayGeometry

__all__ = [
    "Path",
    "PathSet",
    "WidebandChannel",
    "QuantizedSnapshot",
    "narrowband_channel",
    "wideband_receive",
    "quantize_1bit",
]


@dataclass(frozen=True)
class Path:
    """One propagation path: complex coefficient, delay and angle pairs (radians)."""

    alpha: complex
    delay: float
    aoa_azimuth: float
    aoa_elevation: float
    aod_azimuth: float
    aod_elevation: float

    def __post_init__(self):
        for name in ("aoa_elevation", "aod_elevation"):
            value = getattr(self, name)
            if not -np.pi / 2 <= value <= np.pi / 2:
                raise ValueError(f"{name}={value} outside [-pi/2, pi/2]")
        for name in ("aoa_azimuth", "aod_azimuth"):
            value = getattr(self, name)
            if not -np.pi <= value <= np.pi:
                raise ValueError(f"{name}={value} outside [-pi, pi]")
        if self.delay < 0:
            raise ValueError(f"delay={self.delay} must be non-negative")


@dataclass(frozen=True)
class PathSet:
    paths: tuple[Path, ...]

    def __post_init__(self):
        if len(self.paths) < 1:
            raise ValueError("a PathSet needs at least one path")
        object.__setattr__(self, "paths", tuple(self.paths))

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


@dataclass(frozen=True)
class WidebandChannel:
    """Tapped delay-line channel: taps[d] is the M_r x M_t matrix at lag d."""

    taps: np.ndarray  # (D, M_r, M_t) complex
    chip_duration: float
    pulse: str = "raised-cosine"

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.complex128)
        if taps.ndim != 3 or taps.shape[0] < 1:
            raise ValueError("taps must have shape (D, M_r, M_t) with D >= 1")
        object.__setattr__(self, "taps", taps)

    @property
    def n_taps(self) -> int:
        return self.taps.shape[0]

    @property
    def m_receive(self) -> int:
        return self.taps.shape[1]

    @property
    def m_transmit(self) -> int:
        return self.taps.shape[2]


def narrowband_channel(paths: PathSet, rx: ArrayGeometry, tx: ArrayGeometry) -> np.ndarray:
    """Zero-delay channel matrix: sum of per-path rank-1 outer products.

    Raises if any path carries a nonzero delay; use the tapped model for
    delay-spread channels.
    """
    for p in paths:
        if p.delay != 0.0:
            raise ValueError("narrowband channel requires all path delays to be zero")
    h = np.zeros((rx.size, tx.size), dtype=np.complex128)
    for p in paths:
        a_r = rx.response(p.aoa_azimuth, p.aoa_elevation)
        a_t = tx.response(p.aod_azimuth, p.aod_elevation)
        h += p.alpha * np.outer(a_r, a_t.conj())
    return h


def wideband_receive(
    channel: WidebandChannel,
    pilots: np.ndarray,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Run pilots through the tapped channel and add unit-variance noise.

    ``pilots`` is M_t x N; slots before the first pilot are treated as zero,
    so every output column is well defined.  Returns ``(x, z)`` where x is
    the noiseless M_r x N receive matrix and z = x + w with w having i.i.d.
    CN(0, 1) entries (real/imaginary variance 1/2 each).
    """
    pilots = np.asarray(pilots, dtype=np.complex128)
    if pilots.ndim != 2 or pilots.shape[0] != channel.m_transmit:
        raise ValueError(
            f"pilots must be (M_t={channel.m_transmit}, N), got {pilots.shape}"
        )
    n = pilots.shape[1]
    x = np.zeros((channel.m_receive, n), dtype=np.complex128)
    for d in range(min(channel.n_taps, n)):
        x[:, d:] += channel.taps[d] @ pilots[:, : n - d]
    w = np.sqrt(0.5) * (
        rng.standard_normal((channel.m_receive, n))
        + 1j * rng.standard_normal((channel.m_receive, n))
    )
    return x, x + w


def _sign_plus(values: np.ndarray) -> np.ndarray:
    # sign(0) := +1 so the quantizer is total
    return np.where(values >= 0.0, 1.0, -1.0)


class QuantizedSnapshot:
    """1-bit complex measurements with their per-antenna count statistics.

    ``r`` is M x N_d with entries in {+-1 +- j}.  ``mu_counts[m]`` is the
    number of slots whose real part quantized to +1 at antenna m (``nu``
    likewise for the imaginary part); the per-slot bit matrices are kept so
    noncoherent objectives can weight each slot individually.
    """

    def __init__(self, r: np.ndarray):
        r = np.asarray(r, dtype=np.complex128)
        if r.ndim == 1:
            r = r[:, None]
        if r.ndim != 2:
            raise ValueError("quantized measurements must be a matrix")
        if r.size and not (
            np.all(np.abs(r.real) == 1.0) and np.all(np.abs(r.imag) == 1.0)
        ):
            raise ValueError("entries must have real and imaginary parts +-1")
        self.r = r
        self.mu_bits = (r.real + 1.0) / 2.0
        self.nu_bits = (r.imag + 1.0) / 2.0
        self.mu_counts = self.mu_bits.sum(axis=1)
        self.nu_counts = self.nu_bits.sum(axis=1)

    @property
    def n_antennas(self) -> int:
        return self.r.shape[0]

    @property
    def n_slots(self) -> int:
        return self.r.shape[1]


def quantize_1bit(z: np.ndarray) -> QuantizedSnapshot:
    """Quantize real and imaginary parts separately to their signs."""
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim == 1:
        z = z[:, None]
    return QuantizedSnapshot(_sign_plus(z.real) + 1j * _sign_plus(z.imag))
