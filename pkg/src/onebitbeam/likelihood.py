"""Log-domain likelihood objectives for 1-bit quantized array snapshots.

Every objective marginalizes the unknown effective path gain over a discrete
unit-circle grid.  All products run in the log domain and the gain
marginalization uses log-sum-exp, so the objectives stay finite even when a
count statistic sits at 0 or N_d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, logsumexp

from .geometry import ArrayGeometry
from .signals import QuantizedSnapshot

__all__ = [
    "GainGrid",
    "LogLikContext",
    "log_fN",
    "loglik_ula_coherent",
    "loglik_upa_elevation",
    "loglik_upa_azimuth",
    "loglik_noncoherent_elevation",
    "loglik_noncoherent_azimuth",
]

# exp() underflows just below this; clamping keeps long products finite when a
# count statistic is pinned at 0 or N_d.
LOG_FLOOR = -745.0

_SQRT2 = np.sqrt(2.0)

# slots per block when accumulating noncoherent objectives, to bound memory
_SLOT_BLOCK = 2048


def _log_q(upsilon):
    """log Q(-sqrt(2)*upsilon), i.e. log P(upsilon + noise > 0), clamped."""
    return np.maximum(log_ndtr(_SQRT2 * np.asarray(upsilon, dtype=np.float64)), LOG_FLOOR)


def log_fN(upsilon: float, lam: float, n: int) -> float:
    """Log-probability of seeing ``lam`` positive signs in ``n`` one-bit reads.

    The reads observe the real constant ``upsilon`` through zero-mean Gaussian
    noise of variance 1/2.
    """
    if not 0 <= lam <= n:
        raise ValueError(f"need 0 <= lam <= n, got lam={lam}, n={n}")
    return float(lam * _log_q(upsilon) + (n - lam) * _log_q(-upsilon))


@dataclass(frozen=True)
class GainGrid:
    """Discrete set of assumed gains: ``amplitude`` times N uniform phases."""

    amplitude: float = 0.1
    n_phases: int = 100

    def __post_init__(self):
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if self.n_phases < 1:
            raise ValueError("n_phases must be >= 1")

    @property
    def phases(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_phases) / self.n_phases

    @property
    def values(self) -> np.ndarray:
        return self.amplitude * np.exp(1j * self.phases)


class LogLikContext:
    """Immutable bundle of snapshot statistics used by the objectives.

    Antennas are grouped by planar-array column (a ULA is the single column
    ``m_horizontal == 1``); the grouped count matrices have shape
    (m_horizontal, m_vertical) and the grouped bit tensors
    (m_horizontal, m_vertical, n_slots).
    """

    def __init__(
        self,
        snapshot: QuantizedSnapshot,
        geometry: ArrayGeometry,
        mode: str = "coherent",
        grid: GainGrid | None = None,
    ):
        if mode not in ("coherent", "noncoherent"):
            raise ValueError(f"mode must be coherent or noncoherent, got {mode!r}")
        if snapshot.n_antennas != geometry.size:
            raise ValueError(
                f"snapshot has {snapshot.n_antennas} antennas but geometry has {geometry.size}"
            )
        self.snapshot = snapshot
        self.geometry = geometry
        self.mode = mode
        self.grid = grid if grid is not None else GainGrid()

        m_h, m_v = geometry.m_horizontal, geometry.m_vertical
        # flat antenna a sits in column a % m_h at vertical row a // m_h
        self.mu_col = snapshot.mu_counts.reshape(m_v, m_h).T.copy()
        self.nu_col = snapshot.nu_counts.reshape(m_v, m_h).T.copy()
        n_d = snapshot.n_slots
        self.mu_bits_col = snapshot.mu_bits.reshape(m_v, m_h, n_d).transpose(1, 0, 2).copy()
        self.nu_bits_col = snapshot.nu_bits.reshape(m_v, m_h, n_d).transpose(1, 0, 2).copy()

    @property
    def n_slots(self) -> int:
        return self.snapshot.n_slots


def _margin_tables(phase_offsets: np.ndarray, grid: GainGrid):
    """Per-(gain, antenna) log bit-probabilities.

    ``phase_offsets`` holds the response phase of each antenna; the gain k
    rotates all of them by the grid phase.  Returns (d_re, c_re, d_im, c_im)
    where the log-probability of a real bit pattern is
    ``bit * d_re + c_re`` per read (imaginary likewise).
    """
    angles = grid.phases[:, None] + phase_offsets[None, :]
    rho = grid.amplitude * np.cos(angles)
    kappa = grid.amplitude * np.sin(angles)
    lp_re, lm_re = _log_q(rho), _log_q(-rho)
    lp_im, lm_im = _log_q(kappa), _log_q(-kappa)
    return lp_re - lm_re, lm_re, lp_im - lm_im, lm_im


def _coherent_column_loglik(theta: float, ctx: LogLikContext) -> float:
    """Sum over columns of the gain-marginalized vertical-response likelihood."""
    n_d = ctx.n_slots
    offsets = np.pi * np.sin(theta) * np.arange(ctx.geometry.m_vertical)
    d_re, c_re, d_im, c_im = _margin_tables(offsets, ctx.grid)
    const = n_d * (c_re.sum(axis=1) + c_im.sum(axis=1))  # (n_phases,)
    # scores[i, k] = log-likelihood of column i under gain k
    scores = ctx.mu_col @ d_re.T + ctx.nu_col @ d_im.T + const[None, :]
    return float(np.sum(logsumexp(scores, axis=1)) - ctx.mu_col.shape[0] * np.log(ctx.grid.n_phases))


def loglik_ula_coherent(theta: float, ctx: LogLikContext) -> float:
    """Coherent single-path log-likelihood of a linear-array snapshot."""
    if ctx.mode != "coherent":
        raise ValueError("coherent objective needs a coherent context")
    if ctx.geometry.m_horizontal != 1:
        raise ValueError("linear-array objective needs a single-column geometry")
    return _coherent_column_loglik(theta, ctx)


def loglik_upa_elevation(theta: float, ctx: LogLikContext) -> float:
    """Coherent elevation objective: independent gain per array column."""
    if ctx.mode != "coherent":
        raise ValueError("coherent objective needs a coherent context")
    return _coherent_column_loglik(theta, ctx)


def _full_response_phases(phi: float, theta: float, geometry: ArrayGeometry) -> np.ndarray:
    return np.pi * (
        np.sin(theta) * geometry.vertical_index()
        + np.cos(theta) * np.sin(phi) * geometry.horizontal_index()
    )


def loglik_upa_azimuth(phi: float, theta_hat: float, ctx: LogLikContext) -> float:
    """Coherent azimuth objective at a fixed elevation estimate.

    Uses the full-array response and the whole-snapshot counts; one shared
    gain is marginalized across all antennas.
    """
    if ctx.mode != "coherent":
        raise ValueError("coherent objective needs a coherent context")
    n_d = ctx.n_slots
    offsets = _full_response_phases(phi, theta_hat, ctx.geometry)
    d_re, c_re, d_im, c_im = _margin_tables(offsets, ctx.grid)
    scores = (
        d_re @ ctx.snapshot.mu_counts
        + d_im @ ctx.snapshot.nu_counts
        + n_d * (c_re.sum(axis=1) + c_im.sum(axis=1))
    )
    return float(logsumexp(scores) - np.log(ctx.grid.n_phases))


def loglik_noncoherent_elevation(theta: float, ctx: LogLikContext) -> float:
    """Elevation objective for per-slot varying gains.

    The gain marginalization sits inside the product over slots: each
    (column, slot) cell is scored with single-read kernels and its own
    log-sum-exp over the gain grid.
    """
    if ctx.mode != "noncoherent":
        raise ValueError("noncoherent objective needs a noncoherent context")
    offsets = np.pi * np.sin(theta) * np.arange(ctx.geometry.m_vertical)
    d_re, c_re, d_im, c_im = _margin_tables(offsets, ctx.grid)
    const = c_re.sum(axis=1) + c_im.sum(axis=1)  # (n_phases,)
    log_n = np.log(ctx.grid.n_phases)
    total = 0.0
    for start in range(0, ctx.n_slots, _SLOT_BLOCK):
        mu = ctx.mu_bits_col[:, :, start : start + _SLOT_BLOCK]
        nu = ctx.nu_bits_col[:, :, start : start + _SLOT_BLOCK]
        # scores[k, i, t] = per-slot log-likelihood of column i, slot t, gain k
        scores = (
            np.tensordot(d_re, mu, axes=([1], [1]))
            + np.tensordot(d_im, nu, axes=([1], [1]))
            + const[:, None, None]
        )
        total += float(np.sum(logsumexp(scores, axis=0) - log_n))
    return total


def loglik_noncoherent_azimuth(phi: float, theta_hat: float, ctx: LogLikContext) -> float:
    """Azimuth objective for per-slot varying gains at a fixed elevation."""
    if ctx.mode != "noncoherent":
        raise ValueError("noncoherent objective needs a noncoherent context")
    offsets = _full_response_phases(phi, theta_hat, ctx.geometry)
    d_re, c_re, d_im, c_im = _margin_tables(offsets, ctx.grid)
    const = c_re.sum(axis=1) + c_im.sum(axis=1)
    log_n = np.log(ctx.grid.n_phases)
    total = 0.0
    for start in range(0, ctx.n_slots, _SLOT_BLOCK):
        mu = ctx.snapshot.mu_bits[:, start : start + _SLOT_BLOCK]
        nu = ctx.snapshot.nu_bits[:, start : start + _SLOT_BLOCK]
        scores = d_re @ mu + d_im @ nu + const[:, None]  # (n_phases, block)
        total += float(np.sum(logsumexp(scores, axis=0) - log_n))
    return total
