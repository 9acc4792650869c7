"""Phase-shifter beamformer constructions and post-combining SNR metrics.

All beamformers are unit-modulus weight vectors.  The narrowband schemes
phase-align against (estimated) path superpositions; the wideband schemes
maximize the quadratic form b^H A b over unit-modulus b for a sample
covariance A, via cyclic closed-form phase updates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .estimation import AngleEstimate, estimate_upa
from .geometry import ArrayGeometry
from .likelihood import GainGrid
from .signals import QuantizedSnapshot

__all__ = [
    "Beamformer",
    "SampleCovariance",
    "beam_ideal",
    "beam_estimation",
    "beam_strong",
    "sample_covariance",
    "maximize_unit_modulus",
    "beam_wopt",
    "beam_wunq",
    "beam_wq",
    "beam_wstrong",
    "snr_ratio",
]

logger = logging.getLogger(__name__)

SCHEMES = ("IDEAL", "EST", "STR", "WOPT", "WUNQ", "WQ", "WSTR")


@dataclass(frozen=True)
class Beamformer:
    weights: np.ndarray
    scheme: str

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.complex128)
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if np.max(np.abs(np.abs(w) - 1.0)) > 1e-9:
            raise ValueError("beamformer weights must all have unit modulus")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class SampleCovariance:
    matrix: np.ndarray
    source: str  # "noiseless" | "unquantized" | "quantized"
    n_slots: int

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=np.complex128)
        scale = max(np.abs(np.trace(a)), 1.0)
        if np.max(np.abs(a - a.conj().T)) > 1e-12 * scale:
            raise ValueError("sample covariance must be Hermitian")
        object.__setattr__(self, "matrix", a)


def _phase_align(v: np.ndarray, scheme: str) -> Beamformer:
    # angle(0) = 0, so zero-sum elements get weight exactly 1
    return Beamformer(weights=np.exp(1j * np.angle(v)), scheme=scheme)


def beam_ideal(
    gains: Sequence[complex],
    angles: Sequence[tuple[float, float]],
    geometry: ArrayGeometry,
) -> Beamformer:
    """Phase-align against the true path superposition.

    ``angles`` holds (azimuth, elevation) per path; the weights are the
    element-wise phases of sum_l gain_l * a(azimuth_l, elevation_l).
    """
    v = np.zeros(geometry.size, dtype=np.complex128)
    for zeta, (az, el) in zip(gains, angles, strict=True):
        v += zeta * geometry.response(az, el)
    return _phase_align(v, "IDEAL")


def beam_estimation(estimates: Sequence[AngleEstimate], geometry: ArrayGeometry) -> Beamformer:
    """Same construction as the ideal beamformer, from estimated paths."""
    if len(estimates) == 0:
        raise ValueError("need at least one path estimate")
    v = np.zeros(geometry.size, dtype=np.complex128)
    for e in estimates:
        if e.gain is None:
            raise ValueError("estimates must carry fitted gains")
        v += e.gain * geometry.response(e.azimuth if e.azimuth is not None else 0.0, e.elevation)
    return _phase_align(v, "EST")


def beam_strong(
    estimates: Sequence[AngleEstimate],
    snapshot: QuantizedSnapshot,
    geometry: ArrayGeometry,
) -> Beamformer:
    """Steer at the single estimated path that captures the most energy.

    Each candidate response is applied to the raw quantized slots; the one
    with the largest average |output|^2 wins, ties going to the earlier path.
    """
    best_l, best_energy = 0, -np.inf
    candidates = []
    for l, e in enumerate(estimates):
        b = geometry.response(e.azimuth if e.azimuth is not None else 0.0, e.elevation)
        candidates.append(b)
        y = b.conj() @ snapshot.r
        energy = float(np.mean(np.abs(y) ** 2)) if snapshot.n_slots else 0.0
        if energy > best_energy:
            best_l, best_energy = l, energy
    return Beamformer(weights=candidates[best_l], scheme="STR")


def sample_covariance(signal: np.ndarray, source: str) -> SampleCovariance:
    """Slot-averaged outer product, Hermitian-symmetrized."""
    signal = np.asarray(signal, dtype=np.complex128)
    if signal.ndim != 2 or signal.shape[1] < 1:
        raise ValueError("signal must be M x N_d with N_d >= 1")
    n = signal.shape[1]
    a = (signal @ signal.conj().T) / n
    a = 0.5 * (a + a.conj().T)
    return SampleCovariance(matrix=a, source=source, n_slots=n)


def _top_eigvec(a: np.ndarray, max_iter: int = 500, tol: float = 1e-10) -> np.ndarray:
    m = a.shape[0]
    # deterministic start; the ramp breaks symmetry if ones is an eigenvector
    v = np.ones(m) + 1e-3 * np.arange(m) / max(m - 1, 1)
    v = v.astype(np.complex128) / np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = a @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return v
        w /= norm
        if abs(norm - lam) <= tol * max(norm, 1e-300):
            return w
        v, lam = w, norm
    return v


def maximize_unit_modulus(
    a: SampleCovariance | np.ndarray,
    scheme: str = "WOPT",
    max_sweeps: int = 200,
    rel_tol: float = 1e-9,
    trace: list | None = None,
) -> Beamformer:
    """Maximize b^H A b over unit-modulus b by cyclic phase updates.

    Starts from the element-wise phases of the dominant eigenvector (power
    iteration).  Each update b_m <- exp(j*angle(sum_{n != m} A[m,n] b_n)) is
    the exact coordinate maximizer, so the objective never decreases; sweeps
    stop once the relative gain drops below ``rel_tol``.  If ``trace`` is
    given, the objective after each sweep is appended to it.
    """
    matrix = a.matrix if isinstance(a, SampleCovariance) else np.asarray(a, dtype=np.complex128)
    scale = max(np.abs(np.trace(matrix)), 1.0)
    if np.max(np.abs(matrix - matrix.conj().T)) > 1e-9 * scale:
        raise ValueError("matrix must be Hermitian")
    m = matrix.shape[0]
    b = np.exp(1j * np.angle(_top_eigvec(matrix)))
    off_diag = matrix.copy()
    np.fill_diagonal(off_diag, 0.0)
    objective = float(np.real(b.conj() @ matrix @ b))
    for _ in range(max_sweeps):
        for i in range(m):
            c = off_diag[i] @ b
            if c != 0.0:
                b[i] = np.exp(1j * np.angle(c))
        new_objective = float(np.real(b.conj() @ matrix @ b))
        if trace is not None:
            trace.append(new_objective)
        if new_objective - objective <= rel_tol * max(abs(objective), 1e-300):
            objective = new_objective
            break
        objective = new_objective
    return Beamformer(weights=b, scheme=scheme)


def beam_wopt(x: np.ndarray) -> Beamformer:
    """Quadratic-form maximizer for the noiseless signal covariance."""
    return maximize_unit_modulus(sample_covariance(x, "noiseless"), scheme="WOPT")


def beam_wunq(z: np.ndarray) -> Beamformer:
    """Quadratic-form maximizer for the noisy unquantized covariance."""
    return maximize_unit_modulus(sample_covariance(z, "unquantized"), scheme="WUNQ")


def beam_wq(snapshot: QuantizedSnapshot) -> Beamformer:
    """Quadratic-form maximizer for the 1-bit sample covariance."""
    cov = sample_covariance(snapshot.r, "quantized")
    return maximize_unit_modulus(cov, scheme="WQ")


def beam_wstrong(
    snapshot: QuantizedSnapshot,
    geometry: ArrayGeometry,
    grid: GainGrid | None = None,
) -> Beamformer:
    """Steer at the single dominant direction of a wideband 1-bit snapshot.

    Runs the noncoherent estimator with one path (per-slot gains absorb delay
    spread and unknown pilots) and steers the array response there.
    """
    (estimate,) = estimate_upa(snapshot, geometry, 1, mode="noncoherent", grid=grid)
    b = geometry.response(estimate.azimuth if estimate.azimuth is not None else 0.0, estimate.elevation)
    return Beamformer(weights=b, scheme="WSTR")


def snr_ratio(
    beam: Beamformer,
    signals: Sequence[np.ndarray],
    ideal_beams: Sequence[Beamformer],
    degenerate_floor: float = 1e-30,
) -> float:
    """Average per-realization ratio |b^H x|^2 / |b_ideal^H x|^2.

    Realizations whose ideal-combined power falls below ``degenerate_floor``
    are dropped from the average (logged with a count).
    """
    ratios = []
    dropped = 0
    for x, ideal in zip(signals, ideal_beams, strict=True):
        denom = np.abs(ideal.weights.conj() @ x) ** 2
        if denom < degenerate_floor:
            dropped += 1
            continue
        ratios.append(float(np.abs(beam.weights.conj() @ x) ** 2 / denom))
    if dropped:
        logger.warning("snr_ratio dropped %d degenerate realization(s)", dropped)
    if not ratios:
        raise ValueError("no usable realizations for the SNR ratio")
    return float(np.mean(ratios))
