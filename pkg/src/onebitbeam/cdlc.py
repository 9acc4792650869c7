"""Clustered delay-line profile ingestion and wideband channel realization.

The cluster table (delays, powers, angles) is never hardcoded: it ships as a
data file whose header records the source and the per-cluster angular-spread
scalars.  Realization expands each cluster into rays at tabulated offset
angles, couples them randomly, and builds pulse-shaped channel taps.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .geometry import ArrayGeometry
from .signals import WidebandChannel

__all__ = ["CdlCProfile", "OfdmConfig", "load_cdlc", "realize_cdlc", "packaged_profile_path", "raised_cosine"]

_REQUIRED_KEYS = ("delay_spread_ns", "c_asd_deg", "c_asa_deg", "c_zsd_deg", "c_zsa_deg")
_COLUMNS = ("delay_ns", "power_db", "aoa_az_deg", "aoa_zen_deg", "aod_az_deg", "aod_zen_deg")


@dataclass(frozen=True)
class CdlCProfile:
    """Cluster table plus the scalars needed to expand it into rays.

    ``delay_norm`` holds delays normalized to unit RMS delay spread (the file
    stores nanoseconds at its reference spread); ``weights`` are linear
    cluster powers normalized to sum to one.
    """

    delay_norm: np.ndarray
    power_db: np.ndarray
    weights: np.ndarray
    aoa_az_deg: np.ndarray
    aoa_zen_deg: np.ndarray
    aod_az_deg: np.ndarray
    aod_zen_deg: np.ndarray
    c_asd_deg: float
    c_asa_deg: float
    c_zsd_deg: float
    c_zsa_deg: float
    ray_offsets: np.ndarray
    reference_delay_spread_ns: float

    @property
    def n_clusters(self) -> int:
        return len(self.delay_norm)

    @property
    def n_rays(self) -> int:
        return len(self.ray_offsets)


def packaged_profile_path() -> Path:
    """Location of the CDL-C table shipped with the package."""
    return Path(resources.files("onebitbeam").joinpath("data/cdl_c_38901.txt"))


def load_cdlc(profile_file: str | Path) -> CdlCProfile:
    """Parse and validate a clustered delay-line profile file.

    The format is line-oriented: '#' comments, ``key = value`` header entries
    (angular spreads, reference delay spread, ray offsets), then one cluster
    per line in the declared column order.
    """
    path = Path(profile_file)
    if not path.exists():
        raise FileNotFoundError(
            f"cluster profile file not found: {path}; refusing to substitute built-in numbers"
        )
    header: dict[str, str] = {}
    rows: list[list[float]] = []
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
            continue
        fields = line.split()
        if len(fields) != len(_COLUMNS):
            raise ValueError(f"{path}:{line_no}: expected {len(_COLUMNS)} fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as err:
            raise ValueError(f"{path}:{line_no}: non-numeric field ({err})") from None

    for key in _REQUIRED_KEYS:
        if key not in header:
            raise ValueError(f"{path}: missing header entry {key!r}")
    if "ray_offsets" not in header:
        raise ValueError(f"{path}: missing header entry 'ray_offsets'")
    if not rows:
        raise ValueError(f"{path}: profile contains no cluster records")
    if header.get("columns", " ".join(_COLUMNS)).split() != list(_COLUMNS):
        raise ValueError(f"{path}: unexpected column declaration")

    table = np.asarray(rows)
    reference_ds = float(header["delay_spread_ns"])
    if reference_ds <= 0:
        raise ValueError(f"{path}: delay_spread_ns must be positive")
    ray_offsets = np.array([float(v) for v in header["ray_offsets"].split()])
    if len(ray_offsets) < 1:
        raise ValueError(f"{path}: ray_offsets must hold at least one value")

    power_db = table[:, 1]
    linear = 10.0 ** (power_db / 10.0)
    total = linear.sum()
    if not np.isfinite(total) or total <= 0:
        raise ValueError(f"{path}: cluster powers cannot be normalized")
    weights = linear / total
    if abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError(f"{path}: cluster power normalization failed")

    return CdlCProfile(
        delay_norm=table[:, 0] / reference_ds,
        power_db=power_db,
        weights=weights,
        aoa_az_deg=table[:, 2],
        aoa_zen_deg=table[:, 3],
        aod_az_deg=table[:, 4],
        aod_zen_deg=table[:, 5],
        c_asd_deg=float(header["c_asd_deg"]),
        c_asa_deg=float(header["c_asa_deg"]),
        c_zsd_deg=float(header["c_zsd_deg"]),
        c_zsa_deg=float(header["c_zsa_deg"]),
        ray_offsets=ray_offsets,
        reference_delay_spread_ns=reference_ds,
    )


@dataclass(frozen=True)
class OfdmConfig:
    """Sampling configuration; the chip rate is n_fft * subcarrier spacing."""

    carrier_hz: float = 28e9
    subcarrier_spacing_hz: float = 240e3
    n_fft: int = 256

    @property
    def chip_duration_s(self) -> float:
        return 1.0 / (self.n_fft * self.subcarrier_spacing_hz)


def raised_cosine(t_over_chip: np.ndarray, rolloff: float = 0.22, span_chips: int = 8) -> np.ndarray:
    """Raised-cosine pulse sampled at multiples of the chip duration.

    Truncated to ``span_chips`` chips total (zero outside +-span/2).
    """
    x = np.asarray(t_over_chip, dtype=np.float64)
    out = np.sinc(x)
    if rolloff > 0:
        denom = 1.0 - (2.0 * rolloff * x) ** 2
        singular = np.abs(denom) < 1e-10
        safe = np.where(singular, 1.0, denom)
        out = out * np.cos(np.pi * rolloff * x) / safe
        limit = np.pi / 4.0 * np.sinc(1.0 / (2.0 * rolloff))
        out = np.where(singular, limit, out)
    return np.where(np.abs(x) <= span_chips / 2.0, out, 0.0)


def _wrap_azimuth_rad(az: np.ndarray) -> np.ndarray:
    return np.mod(az + np.pi, 2.0 * np.pi) - np.pi


def _zenith_to_elevation_rad(zen_deg: np.ndarray) -> np.ndarray:
    # reflect out-of-range zeniths back into [0, 180] before converting
    zen = np.abs(zen_deg)
    zen = np.where(zen > 180.0, 360.0 - zen, zen)
    return np.deg2rad(90.0 - zen)


def realize_cdlc(
    profile: CdlCProfile,
    rng: np.random.Generator,
    rx: ArrayGeometry,
    tx: ArrayGeometry,
    ofdm: OfdmConfig = OfdmConfig(),
    delay_spread_ns: float | None = None,
    rolloff: float = 0.22,
    pulse_span_chips: int = 8,
    angular_spread_scale: float = 1.0,
) -> WidebandChannel:
    """Draw one wideband channel realization from the cluster profile.

    Per cluster, rays sit at the tabulated offset angles scaled by the
    angular spreads; arrival azimuth, arrival zenith and departure zenith
    rays are randomly coupled to the departure order, and each ray gets an
    independent uniform phase.  Tap d collects every ray weighted by the
    pulse sampled at d*T minus the ray delay.

    ``angular_spread_scale`` multiplies the profile's per-cluster spreads;
    zero collapses every cluster to a specular ray bundle at its centroid.
    """
    ds_ns = profile.reference_delay_spread_ns if delay_spread_ns is None else delay_spread_ns
    s = angular_spread_scale
    chip_ns = ofdm.chip_duration_s * 1e9
    delays_chips = profile.delay_norm * ds_ns / chip_ns
    n_rays = profile.n_rays
    half_span = pulse_span_chips / 2.0
    n_taps = int(np.ceil(delays_chips.max() + half_span)) + 1

    taps = np.zeros((n_taps, rx.size, tx.size), dtype=np.complex128)
    d_grid = np.arange(n_taps, dtype=np.float64)
    for c in range(profile.n_clusters):
        perm_aoa = rng.permutation(n_rays)
        perm_zoa = rng.permutation(n_rays)
        perm_zod = rng.permutation(n_rays)
        phases = rng.uniform(0.0, 2.0 * np.pi, n_rays)

        aoa_az = np.deg2rad(profile.aoa_az_deg[c] + s * profile.c_asa_deg * profile.ray_offsets[perm_aoa])
        aoa_el = _zenith_to_elevation_rad(profile.aoa_zen_deg[c] + s * profile.c_zsa_deg * profile.ray_offsets[perm_zoa])
        aod_az = np.deg2rad(profile.aod_az_deg[c] + s * profile.c_asd_deg * profile.ray_offsets)
        aod_el = _zenith_to_elevation_rad(profile.aod_zen_deg[c] + s * profile.c_zsd_deg * profile.ray_offsets[perm_zod])
        aoa_az = _wrap_azimuth_rad(aoa_az)
        aod_az = _wrap_azimuth_rad(aod_az)

        amp = np.sqrt(profile.weights[c] / n_rays)
        pulse_row = raised_cosine(d_grid - delays_chips[c], rolloff, pulse_span_chips)
        cluster_sum = np.zeros((rx.size, tx.size), dtype=np.complex128)
        for r in range(n_rays):
            a_r = rx.response(aoa_az[r], np.clip(aoa_el[r], -np.pi / 2, np.pi / 2))
            a_t = tx.response(aod_az[r], np.clip(aod_el[r], -np.pi / 2, np.pi / 2))
            cluster_sum += amp * np.exp(1j * phases[r]) * np.outer(a_r, a_t.conj())
        taps += pulse_row[:, None, None] * cluster_sum[None, :, :]

    descriptor = f"raised-cosine rolloff={rolloff} span={pulse_span_chips}"
    return WidebandChannel(taps=taps, chip_duration=ofdm.chip_duration_s, pulse=descriptor)
