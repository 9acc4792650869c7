"""Two-step angle estimation: arcsine-spaced coarse scan, then bracketed ascent.

The coarse grid places 2M samples at arcsin(-1 + (q-1)/M), which is uniform
in spatial frequency, so every beamwidth of the array gets about two samples
regardless of angle.  Each detected peak is refined by a derivative-free
golden-section ascent inside the bracket formed by its grid neighbours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .geometry import ArrayGeometry
from .likelihood import (
    GainGrid,
    LogLikContext,
    _log_q,
    loglik_noncoherent_azimuth,
    loglik_noncoherent_elevation,
    loglik_upa_azimuth,
    loglik_upa_elevation,
)
from .signals import QuantizedSnapshot

__all__ = [
    "CoarseGrid",
    "AngleEstimate",
    "coarse_scan",
    "refine",
    "detect_peaks",
    "estimate_ula",
    "estimate_upa",
    "estimate_gains",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CoarseGrid:
    """Sampled objective: ``angles[q]`` with ``values[q]``, q = 0 .. 2M-1."""

    angles: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.angles)


def coarse_grid_angles(m: int) -> np.ndarray:
    """2M arcsine-spaced angles from -pi/2 up to arcsin(1 - 1/M)."""
    if m < 2:
        raise ValueError("coarse grid needs m >= 2")
    q = np.arange(1, 2 * m + 1)
    return np.arcsin(-1.0 + (q - 1.0) / m)


def coarse_scan(objective: Callable[[float], float], m: int) -> CoarseGrid:
    """Evaluate the objective on the 2M-point arcsine grid."""
    angles = coarse_grid_angles(m)
    values = np.array([objective(a) for a in angles])
    return CoarseGrid(angles=angles, values=values)


def refine(
    objective: Callable[[float], float],
    bracket: tuple[float, float],
    init: float,
    max_iter: int = 80,
    tol: float = 1e-6,
) -> float:
    """Golden-section ascent of the objective inside ``bracket``.

    Returns the best point seen, never worse than ``init``; the result always
    stays inside the bracket.
    """
    lo, hi = bracket
    if hi <= lo:
        raise ValueError(f"bracket inverted: [{lo}, {hi}]")
    if not lo <= init <= hi:
        raise ValueError(f"init {init} outside bracket [{lo}, {hi}]")

    best_x, best_v = init, objective(init)
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = objective(c), objective(d)
    for x, v in ((c, fc), (d, fd)):
        if v > best_v:
            best_x, best_v = x, v
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(c)
            if fc > best_v:
                best_x, best_v = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = objective(d)
            if fd > best_v:
                best_x, best_v = d, fd
    return best_x


def _local_maxima(values: np.ndarray) -> list[int]:
    n = len(values)
    if n == 1:
        return [0]
    out = []
    for i in range(n):
        left_ok = i == 0 or values[i] > values[i - 1]
        right_ok = i == n - 1 or values[i] > values[i + 1]
        if left_ok and right_ok:
            out.append(i)
    return out


def _best_nonadjacent_dp(values: np.ndarray, count: int) -> list[int]:
    # exact max-value selection of `count` pairwise non-adjacent indices
    n = len(values)
    neg = -math.inf
    best = [[neg] * (count + 1) for _ in range(n + 1)]
    take = [[False] * (count + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        best[i][0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, count + 1):
            skip = best[i - 1][j]
            grab = (best[i - 2][j - 1] if i >= 2 else (0.0 if j == 1 else neg)) + values[i - 1]
            if grab > skip:
                best[i][j], take[i][j] = grab, True
            else:
                best[i][j] = skip
    if best[n][count] == neg:
        raise ValueError(f"no {count} pairwise non-adjacent samples exist")
    picked, i, j = [], n, count
    while j > 0:
        if take[i][j]:
            picked.append(i - 1)
            i, j = i - 2, j - 1
        else:
            i -= 1
    return picked


def detect_peaks(grid: CoarseGrid, n_peaks: int) -> list[int]:
    """Indices of the ``n_peaks`` most prominent samples, strongest first.

    Local maxima (strictly above both neighbours; endpoints above their one
    neighbour) are taken first in value order; if too few exist, the highest
    remaining samples fill in.  Selected indices are pairwise non-adjacent and
    ties break toward the lower index.
    """
    n = len(grid)
    if not 1 <= n_peaks <= n // 2:
        raise ValueError(f"need 1 <= n_peaks <= {n // 2}, got {n_peaks}")
    maxima = set(_local_maxima(grid.values))
    order = sorted(range(n), key=lambda i: (i not in maxima, -grid.values[i], i))
    selected: list[int] = []
    for i in order:
        if len(selected) == n_peaks:
            break
        if all(abs(i - j) > 1 for j in selected):
            selected.append(i)
    if len(selected) < n_peaks:
        # greedy can block itself on pathological ties; fall back to exact DP
        selected = _best_nonadjacent_dp(grid.values, n_peaks)
    return sorted(selected, key=lambda i: (-grid.values[i], i))


@dataclass(frozen=True)
class AngleEstimate:
    """One estimated path: refined elevation, azimuth (planar arrays only),
    its effective gain once fitted, and the coarse peak the refinement used."""

    elevation: float
    azimuth: float | None = None
    gain: complex | None = None
    coarse_index: int = 0
    bracket: tuple[float, float] = (-np.pi / 2, np.pi / 2)


def _elevation_brackets(grid: CoarseGrid, picks: Sequence[int]) -> list[tuple[float, float]]:
    """Neighbour brackets, clipped at midpoints between nearby detections."""
    angles = grid.angles
    n = len(grid)
    ordered = sorted(picks)
    out = {}
    for rank, q in enumerate(ordered):
        lo = angles[max(q - 1, 0)]
        hi = angles[min(q + 1, n - 1)]
        if rank > 0:
            lo = max(lo, 0.5 * (angles[ordered[rank - 1]] + angles[q]))
        if rank + 1 < len(ordered):
            hi = min(hi, 0.5 * (angles[ordered[rank + 1]] + angles[q]))
        out[q] = (lo, hi)
    return [out[q] for q in picks]


def _estimate_elevations(ctx: LogLikContext, n_paths: int) -> list[AngleEstimate]:
    if ctx.mode == "coherent":
        objective = lambda t: loglik_upa_elevation(t, ctx)
    else:
        objective = lambda t: loglik_noncoherent_elevation(t, ctx)
    grid = coarse_scan(objective, ctx.geometry.m_vertical)
    picks = detect_peaks(grid, n_paths)
    brackets = _elevation_brackets(grid, picks)
    estimates = []
    for q, bracket in zip(picks, brackets):
        theta = refine(objective, bracket, grid.angles[q])
        estimates.append(AngleEstimate(elevation=theta, coarse_index=q, bracket=bracket))
    return estimates


def _azimuth_grid(m_h: int, theta_hat: float) -> np.ndarray:
    """Arcsine grid mapped through the cos(theta) foreshortening factor."""
    u = -1.0 + (np.arange(1, 2 * m_h + 1) - 1.0) / m_h
    c = np.cos(theta_hat)
    feasible = u[np.abs(u) <= c]
    if len(feasible) < 4:
        # nearly vertical elevation: fall back to plain arcsine spacing
        return coarse_grid_angles(m_h)
    return np.arcsin(feasible / c)


def _estimate_azimuth(ctx: LogLikContext, theta_hat: float) -> float:
    if ctx.geometry.m_horizontal < 2:
        return 0.0
    if ctx.mode == "coherent":
        objective = lambda p: loglik_upa_azimuth(p, theta_hat, ctx)
    else:
        objective = lambda p: loglik_noncoherent_azimuth(p, theta_hat, ctx)
    angles = _azimuth_grid(ctx.geometry.m_horizontal, theta_hat)
    values = np.array([objective(a) for a in angles])
    grid = CoarseGrid(angles=angles, values=values)
    q = detect_peaks(grid, 1)[0]
    lo = angles[max(q - 1, 0)]
    hi = angles[min(q + 1, len(angles) - 1)]
    if hi <= lo:  # single-point degenerate grid
        return float(angles[q])
    return refine(objective, (lo, hi), angles[q])


def estimate_ula(
    snapshot: QuantizedSnapshot,
    n_paths: int,
    mode: str = "coherent",
    grid: GainGrid | None = None,
) -> list[AngleEstimate]:
    """Estimate ``n_paths`` arrival angles from a linear-array snapshot."""
    if snapshot.n_slots == 0:
        raise ValueError("cannot estimate from an empty snapshot")
    geometry = ArrayGeometry.ula(snapshot.n_antennas)
    ctx = LogLikContext(snapshot, geometry, mode=mode, grid=grid)
    return _estimate_elevations(ctx, n_paths)


def estimate_upa(
    snapshot: QuantizedSnapshot,
    geometry: ArrayGeometry,
    n_paths: int,
    mode: str = "coherent",
    grid: GainGrid | None = None,
) -> list[AngleEstimate]:
    """Estimate ``n_paths`` (elevation, azimuth) pairs from a planar array.

    Elevations come first from the per-column objective; each is then fixed
    while the full-array objective locates its azimuth, which ties every
    azimuth to its elevation.
    """
    if snapshot.n_slots == 0:
        raise ValueError("cannot estimate from an empty snapshot")
    if geometry.kind != "upa":
        raise ValueError("estimate_upa needs a planar-array geometry")
    ctx = LogLikContext(snapshot, geometry, mode=mode, grid=grid)
    estimates = _estimate_elevations(ctx, n_paths)
    return [replace(e, azimuth=_estimate_azimuth(ctx, e.elevation)) for e in estimates]


def _joint_gain_loglik(
    zetas: np.ndarray,
    responses: np.ndarray,
    mu: np.ndarray,
    nu: np.ndarray,
    n_d: int,
) -> float:
    v = responses @ zetas
    return float(
        mu @ _log_q(v.real)
        + (n_d - mu) @ _log_q(-v.real)
        + nu @ _log_q(v.imag)
        + (n_d - nu) @ _log_q(-v.imag)
    )


def _gain_candidate_logliks(
    candidates: np.ndarray,
    rest: np.ndarray,
    response: np.ndarray,
    mu: np.ndarray,
    nu: np.ndarray,
    n_d: int,
) -> np.ndarray:
    v = rest[None, :] + candidates[:, None] * response[None, :]
    return (
        _log_q(v.real) @ mu
        + _log_q(-v.real) @ (n_d - mu)
        + _log_q(v.imag) @ nu
        + _log_q(-v.imag) @ (n_d - nu)
    )


def estimate_gains(
    snapshot: QuantizedSnapshot,
    geometry: ArrayGeometry,
    estimates: Sequence[AngleEstimate],
    n_amplitudes: int = 16,
    n_phases: int = 64,
    amp_range_db: tuple[float, float] = (-35.0, 0.0),
    max_sweeps: int = 10,
    trace: list | None = None,
) -> np.ndarray:
    """Fit per-path effective gains by 1-bit ML under the superposition model.

    Cyclic coordinate ascent over paths: each gain in turn is optimized on a
    log-amplitude x phase grid and then polished by two golden-section passes
    (phase, then log-amplitude, clamped to the grid span).  The joint
    log-likelihood never decreases; if ``trace`` is given, its value after
    each sweep is appended.
    """
    mu, nu = snapshot.mu_counts, snapshot.nu_counts
    n_d = snapshot.n_slots
    responses = np.column_stack(
        [geometry.response(e.azimuth if e.azimuth is not None else 0.0, e.elevation) for e in estimates]
    )
    n_paths = responses.shape[1]

    amps_db = np.linspace(amp_range_db[0], amp_range_db[1], n_amplitudes)
    amps = 10.0 ** (amps_db / 20.0)
    phases = 2.0 * np.pi * np.arange(n_phases) / n_phases
    candidates = (amps[:, None] * np.exp(1j * phases)[None, :]).ravel()
    amp_step_db = amps_db[1] - amps_db[0]
    phase_step = 2.0 * np.pi / n_phases

    # start every path at the smallest grid amplitude; uninformative snapshots
    # then stay there instead of wandering
    zetas = np.full(n_paths, amps[0], dtype=np.complex128)
    current = _joint_gain_loglik(zetas, responses, mu, nu, n_d)
    for _ in range(max_sweeps):
        previous = current
        for l in range(n_paths):
            rest = responses @ zetas - zetas[l] * responses[:, l]
            cand = np.append(candidates, zetas[l])
            scores = _gain_candidate_logliks(cand, rest, responses[:, l], mu, nu, n_d)
            best = int(np.argmax(scores))
            zeta_l = cand[best]

            def phase_obj(p, a=np.abs(zeta_l)):
                return _gain_candidate_logliks(
                    np.array([a * np.exp(1j * p)]), rest, responses[:, l], mu, nu, n_d
                )[0]

            ph = float(np.angle(zeta_l))
            ph = refine(phase_obj, (ph - phase_step, ph + phase_step), ph, max_iter=40, tol=1e-4)

            def amp_obj(db, p=ph):
                return _gain_candidate_logliks(
                    np.array([10.0 ** (db / 20.0) * np.exp(1j * p)]),
                    rest,
                    responses[:, l],
                    mu,
                    nu,
                    n_d,
                )[0]

            db = 20.0 * np.log10(max(np.abs(zeta_l), amps[0]))
            db_lo = max(db - amp_step_db, amp_range_db[0])
            db_hi = min(db + amp_step_db, amp_range_db[1])
            db = refine(amp_obj, (db_lo, db_hi), min(max(db, db_lo), db_hi), max_iter=40, tol=1e-4)

            zeta_new = 10.0 ** (db / 20.0) * np.exp(1j * ph)
            trial = zetas.copy()
            trial[l] = zeta_new
            value = _joint_gain_loglik(trial, responses, mu, nu, n_d)
            if value >= current:
                zetas, current = trial, value
        if trace is not None:
            trace.append(current)
        if current - previous < 1e-6:
            break
    return zetas
