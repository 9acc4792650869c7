"""Seeded Monte-Carlo experiment runner.

A config describes one scenario family (narrowband synthetic paths or a
clustered wideband profile); the runner executes K independent realizations,
each driving the estimate -> beamform -> evaluate pipeline, and emits one CSV
row per (realization, schedule point, scheme).  A master seed spawns one
substream per realization, so results are bit-reproducible and unaffected by
changing K.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path as FsPath
from typing import Mapping, Sequence

import numpy as np
import yaml
from scipy.optimize import linear_sum_assignment

from .beamforming import (
    Beamformer,
    beam_estimation,
    beam_ideal,
    beam_strong,
    beam_wopt,
    beam_wq,
    beam_wstrong,
    beam_wunq,
)
from .cdlc import CdlCProfile, OfdmConfig, load_cdlc, packaged_profile_path, realize_cdlc
from .estimation import estimate_gains, estimate_ula, estimate_upa
from .geometry import ArrayGeometry
from .likelihood import LogLikContext, loglik_noncoherent_elevation, loglik_upa_elevation
from .signals import Path, PathSet, quantize_1bit, wideband_receive

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ResultRow",
    "NarrowbandScenario",
    "load_config",
    "generate_narrowband_scenario",
    "run_experiment",
    "scan_objective",
    "default_wideband_n_d",
    "CSV_COLUMNS",
]

SCENARIOS = ("narrowband-ula", "narrowband-upa", "cdlc-wideband")
NARROWBAND_SCHEMES = ("IDEAL", "EST", "STR")
WIDEBAND_SCHEMES = ("WOPT", "WUNQ", "WQ", "WSTR")

CSV_COLUMNS = (
    "scenario",
    "master_seed",
    "realization",
    "scheme",
    "n_d",
    "pre_snr_db",
    "elev_err_rad",
    "azim_err_rad",
    "eta",
    "post_snr_db",
    "wall_time_s",
)

# pilot lengths pinned to the reference wideband sweep; each +3 dB halves N_d
_WIDEBAND_N_D_ANCHORS = {-30: 12288, -27: 4096, -24: 1024, -21: 512, -18: 128}


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


def default_wideband_n_d(pre_snr_db: float) -> int:
    """Pilot length for a wideband sweep point on the 3 dB lattice."""
    key = round(pre_snr_db / 3.0) * 3
    if abs(pre_snr_db - key) > 1e-9:
        raise ConfigError(
            f"pre_snr_db: {pre_snr_db} is off the 3 dB lattice; give n_d explicitly"
        )
    if key < -30:
        raise ConfigError(f"pre_snr_db: no default pilot length below -30 dB (got {pre_snr_db})")
    if key in _WIDEBAND_N_D_ANCHORS:
        return _WIDEBAND_N_D_ANCHORS[key]
    return max(128 >> ((key + 18) // 3), 1)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    seed: int
    k_realizations: int
    rx: ArrayGeometry
    tx: ArrayGeometry
    n_paths: int = 1
    path_snr_db: tuple[float, ...] = ()
    n_d_schedule: tuple[int, ...] = ()
    pre_snr_db: tuple[float, ...] = ()
    schemes: tuple[str, ...] = ()
    mode: str = "coherent"
    enforce_separation: bool = True
    label: str = ""
    record_timings: bool = False
    cdlc_profile: str = ""
    carrier_hz: float = 28e9
    subcarrier_hz: float = 240e3
    n_fft: int = 256
    delay_spread_ns: float = 30.0
    rolloff: float = 0.22
    pulse_span_chips: int = 8
    angular_spread_scale: float = 1.0
    min_observed_slots: int = 512

    @property
    def is_wideband(self) -> bool:
        return self.scenario == "cdlc-wideband"

    def ofdm(self) -> OfdmConfig:
        return OfdmConfig(self.carrier_hz, self.subcarrier_hz, self.n_fft)


def _geometry_from(value, field_name: str) -> ArrayGeometry:
    if isinstance(value, int):
        return ArrayGeometry.ula(value)
    if isinstance(value, Sequence) and len(value) == 2:
        h, v = int(value[0]), int(value[1])
        return ArrayGeometry.ula(v) if h == 1 else ArrayGeometry.upa(h, v)
    raise ConfigError(f"{field_name}: expected an int (ULA) or [horizontal, vertical]")


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def config_from_mapping(raw: Mapping) -> ExperimentConfig:
    """Build and validate a config; errors name the offending field."""
    known = {
        "scenario", "seed", "realizations", "rx", "tx", "n_paths", "path_snr_db",
        "n_d", "pre_snr_db", "schemes", "mode", "enforce_separation", "label",
        "record_timings", "cdlc",
    }
    for key in raw:
        if key not in known:
            raise ConfigError(f"{key}: unknown config field")

    scenario = raw.get("scenario")
    _require(scenario in SCENARIOS, f"scenario: must be one of {SCENARIOS}, got {scenario!r}")
    _require(isinstance(raw.get("seed"), int), "seed: required integer")
    k = raw.get("realizations")
    _require(isinstance(k, int) and k >= 1, "realizations: required integer >= 1")
    rx = _geometry_from(raw.get("rx"), "rx")
    tx = _geometry_from(raw.get("tx", 1), "tx")
    wideband = scenario == "cdlc-wideband"

    n_paths = raw.get("n_paths", 1)
    _require(isinstance(n_paths, int) and n_paths >= 1, "n_paths: must be an integer >= 1")

    mode = raw.get("mode", "coherent")
    _require(mode in ("coherent", "noncoherent"), "mode: must be coherent or noncoherent")

    schemes = tuple(raw.get("schemes", WIDEBAND_SCHEMES if wideband else NARROWBAND_SCHEMES))
    allowed = WIDEBAND_SCHEMES if wideband else NARROWBAND_SCHEMES
    for s in schemes:
        _require(s in allowed, f"schemes: {s!r} not valid for scenario {scenario}")
    _require(len(schemes) >= 1, "schemes: need at least one")

    path_snr_db: tuple[float, ...] = ()
    n_d_schedule: tuple[int, ...] = ()
    pre_snr_db: tuple[float, ...] = ()
    cdlc = dict(raw.get("cdlc") or {})
    if wideband:
        pre = raw.get("pre_snr_db")
        _require(isinstance(pre, Sequence) and len(pre) >= 1, "pre_snr_db: required list for cdlc-wideband")
        pre_snr_db = tuple(float(v) for v in pre)
        n_d_raw = raw.get("n_d")
        if n_d_raw is None:
            n_d_schedule = tuple(default_wideband_n_d(v) for v in pre_snr_db)
        else:
            _require(
                isinstance(n_d_raw, Sequence) and len(n_d_raw) == len(pre_snr_db),
                "n_d: must match pre_snr_db length",
            )
            n_d_schedule = tuple(int(v) for v in n_d_raw)
        for v in n_d_schedule:
            _require(v >= 1, f"n_d: schedule entries must be positive, got {v}")
        known_cdlc = {
            "profile", "carrier_hz", "subcarrier_hz", "n_fft", "delay_spread_ns",
            "rolloff", "pulse_span_chips", "angular_spread_scale", "min_observed_slots",
        }
        for key in cdlc:
            _require(key in known_cdlc, f"cdlc.{key}: unknown config field")
    else:
        snrs = raw.get("path_snr_db")
        _require(
            isinstance(snrs, Sequence) and len(snrs) == n_paths,
            f"path_snr_db: must list exactly n_paths={n_paths} values",
        )
        path_snr_db = tuple(float(v) for v in snrs)
        n_d_raw = raw.get("n_d")
        _require(isinstance(n_d_raw, Sequence) and len(n_d_raw) >= 1, "n_d: required schedule list")
        n_d_schedule = tuple(int(v) for v in n_d_raw)
        for v in n_d_schedule:
            _require(v >= 1, f"n_d: schedule entries must be positive, got {v}")
        if scenario == "narrowband-ula":
            _require(rx.kind == "ula", "rx: narrowband-ula needs a ULA receive array")
        else:
            _require(rx.kind == "upa", "rx: narrowband-upa needs a UPA receive array")

    profile = str(cdlc.get("profile", "")) if wideband else ""
    if wideband and (not profile or profile == "packaged"):
        profile = str(packaged_profile_path())

    return ExperimentConfig(
        scenario=scenario,
        seed=raw["seed"],
        k_realizations=k,
        rx=rx,
        tx=tx,
        n_paths=n_paths,
        path_snr_db=path_snr_db,
        n_d_schedule=n_d_schedule,
        pre_snr_db=pre_snr_db,
        schemes=schemes,
        mode=mode,
        enforce_separation=bool(raw.get("enforce_separation", True)),
        label=str(raw.get("label", scenario)),
        record_timings=bool(raw.get("record_timings", False)),
        cdlc_profile=profile,
        carrier_hz=float(cdlc.get("carrier_hz", 28e9)),
        subcarrier_hz=float(cdlc.get("subcarrier_hz", 240e3)),
        n_fft=int(cdlc.get("n_fft", 256)),
        delay_spread_ns=float(cdlc.get("delay_spread_ns", 30.0)),
        rolloff=float(cdlc.get("rolloff", 0.22)),
        pulse_span_chips=int(cdlc.get("pulse_span_chips", 8)),
        angular_spread_scale=float(cdlc.get("angular_spread_scale", 1.0)),
        min_observed_slots=int(cdlc.get("min_observed_slots", 512)),
    )


def load_config(path: str | FsPath) -> ExperimentConfig:
    with open(path) as f:
        raw = yaml.safe_load(f)
    if not isinstance(raw, Mapping):
        raise ConfigError("config file must hold a mapping")
    return config_from_mapping(raw)


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    master_seed: int
    realization: int
    scheme: str
    n_d: int
    pre_snr_db: float
    elev_err_rad: tuple[float, ...] | None
    azim_err_rad: tuple[float, ...] | None
    eta: float | None
    post_snr_db: float | None
    wall_time_s: float

    def csv_fields(self) -> list[str]:
        def fmt(v) -> str:
            if v is None:
                return ""
            return format(float(v), ".9g")

        def fmt_list(vs) -> str:
            return "" if vs is None else ";".join(fmt(v) for v in vs)

        return [
            self.scenario,
            str(self.master_seed),
            str(self.realization),
            self.scheme,
            str(self.n_d),
            fmt(self.pre_snr_db),
            fmt_list(self.elev_err_rad),
            fmt_list(self.azim_err_rad),
            fmt(self.eta),
            fmt(self.post_snr_db),
            fmt(self.wall_time_s),
        ]


@dataclass(frozen=True)
class NarrowbandScenario:
    path_set: PathSet
    pilots: np.ndarray  # (M_t,) repeated across slots
    zetas: np.ndarray  # effective per-path gains; |zeta|^2 is the path SNR


def _separation_ok(angles: np.ndarray, minimum: float) -> bool:
    if len(angles) < 2 or minimum <= 0:
        return True
    diffs = np.abs(angles[:, None] - angles[None, :])
    return bool(np.all(diffs[np.triu_indices(len(angles), k=1)] >= minimum))


def generate_narrowband_scenario(config: ExperimentConfig, rng: np.random.Generator) -> NarrowbandScenario:
    """Draw path angles, pilots and coefficients for one realization.

    Arrival angles are uniform on [-pi/3, pi/3], redrawn until all pairwise
    elevation (and, for planar arrays, azimuth) separations reach twice the
    angular resolution.  Path coefficients are scaled so each effective gain
    hits its configured SNR exactly.
    """
    rx, tx, L = config.rx, config.tx, config.n_paths
    upa = rx.kind == "upa"
    sep_el = 3.56 / (rx.m_vertical - 1) if (config.enforce_separation and rx.m_vertical > 1) else 0.0
    sep_az = 3.56 / (rx.m_horizontal - 1) if (config.enforce_separation and rx.m_horizontal > 1) else 0.0

    span = (-np.pi / 3, np.pi / 3)
    for _ in range(100_000):
        aoa_el = rng.uniform(*span, L)
        aoa_az = rng.uniform(*span, L) if upa else np.zeros(L)
        if _separation_ok(aoa_el, sep_el) and (not upa or _separation_ok(aoa_az, sep_az)):
            break
    else:
        raise RuntimeError(
            f"could not draw {L} paths meeting the angular-separation constraint in 1e5 attempts"
        )

    aod_el = rng.uniform(*span, L)
    aod_az = rng.uniform(*span, L) if tx.kind == "upa" else np.zeros(L)

    for _ in range(100):
        pilots = np.sqrt(0.5) * (rng.standard_normal(tx.size) + 1j * rng.standard_normal(tx.size))
        couplings = np.array(
            [tx.response(aod_az[l], aod_el[l]).conj() @ pilots for l in range(L)]
        )
        if np.all(np.abs(couplings) > 1e-9):
            break
    else:
        raise RuntimeError("could not draw pilots with non-degenerate transmit coupling")

    beta = rng.uniform(0.0, 2.0 * np.pi, L)
    zetas = 10.0 ** (np.asarray(config.path_snr_db) / 20.0) * np.exp(1j * beta)
    alphas = zetas / couplings
    paths = tuple(
        Path(
            alpha=complex(alphas[l]),
            delay=0.0,
            aoa_azimuth=float(aoa_az[l]),
            aoa_elevation=float(aoa_el[l]),
            aod_azimuth=float(aod_az[l]),
            aod_elevation=float(aod_el[l]),
        )
        for l in range(L)
    )
    return NarrowbandScenario(path_set=PathSet(paths), pilots=pilots, zetas=zetas)


def composite_receive_vector(scenario: NarrowbandScenario, rx: ArrayGeometry) -> np.ndarray:
    """Noiseless per-slot receive vector: sum of gain-weighted responses."""
    v = np.zeros(rx.size, dtype=np.complex128)
    for zeta, p in zip(scenario.zetas, scenario.path_set):
        v += zeta * rx.response(p.aoa_azimuth, p.aoa_elevation)
    return v


def _matched_angle_errors(estimates, scenario, upa: bool):
    true_el = np.array([p.aoa_elevation for p in scenario.path_set])
    true_az = np.array([p.aoa_azimuth for p in scenario.path_set])
    est_el = np.array([e.elevation for e in estimates])
    est_az = np.array([e.azimuth if e.azimuth is not None else 0.0 for e in estimates])
    cost = np.abs(est_el[:, None] - true_el[None, :])
    if upa:
        cost = cost + np.abs(est_az[:, None] - true_az[None, :])
    est_idx, true_idx = linear_sum_assignment(cost)
    order = np.argsort(true_idx)
    matched = est_idx[order]
    elev_err = tuple(float(abs(est_el[i] - true_el[j])) for j, i in enumerate(matched))
    azim_err = tuple(float(abs(est_az[i] - true_az[j])) for j, i in enumerate(matched)) if upa else None
    return elev_err, azim_err


def _narrowband_rows(config: ExperimentConfig, k: int) -> list[ResultRow]:
    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed, spawn_key=(k,)))
    scenario = generate_narrowband_scenario(config, rng)
    rx = config.rx
    upa = rx.kind == "upa"
    v = composite_receive_vector(scenario, rx)
    n_max = max(config.n_d_schedule)
    noise = np.sqrt(0.5) * (
        rng.standard_normal((rx.size, n_max)) + 1j * rng.standard_normal((rx.size, n_max))
    )
    pre_snr_db = 10.0 * np.log10(np.sum(np.abs(scenario.zetas) ** 2))
    angles = [(p.aoa_azimuth, p.aoa_elevation) for p in scenario.path_set]
    b_ideal = beam_ideal(scenario.zetas, angles, rx)
    ideal_power = np.abs(b_ideal.weights.conj() @ v) ** 2

    rows = []
    for n_d in config.n_d_schedule:
        started = time.perf_counter()
        snapshot = quantize_1bit(v[:, None] + noise[:, :n_d])
        if upa:
            estimates = estimate_upa(snapshot, rx, config.n_paths, mode=config.mode)
        else:
            estimates = estimate_ula(snapshot, config.n_paths, mode=config.mode)
        gains = estimate_gains(snapshot, rx, estimates)
        estimates = [replace(e, gain=complex(g)) for e, g in zip(estimates, gains)]
        beams: dict[str, Beamformer] = {"IDEAL": b_ideal}
        if "EST" in config.schemes:
            beams["EST"] = beam_estimation(estimates, rx)
        if "STR" in config.schemes:
            beams["STR"] = beam_strong(estimates, snapshot, rx)
        elev_err, azim_err = _matched_angle_errors(estimates, scenario, upa)
        elapsed = (time.perf_counter() - started) if config.record_timings else 0.0
        for scheme in config.schemes:
            eta = float(np.abs(beams[scheme].weights.conj() @ v) ** 2 / ideal_power)
            rows.append(
                ResultRow(
                    scenario=config.label,
                    master_seed=config.seed,
                    realization=k,
                    scheme=scheme,
                    n_d=n_d,
                    pre_snr_db=float(pre_snr_db),
                    elev_err_rad=elev_err,
                    azim_err_rad=azim_err,
                    eta=eta,
                    post_snr_db=None,
                    wall_time_s=elapsed,
                )
            )
    return rows


def _wideband_rows(config: ExperimentConfig, k: int, profile: CdlCProfile) -> list[ResultRow]:
    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed, spawn_key=(k,)))
    rx, tx = config.rx, config.tx
    channel = realize_cdlc(
        profile,
        rng,
        rx,
        tx,
        ofdm=config.ofdm(),
        delay_spread_ns=config.delay_spread_ns,
        rolloff=config.rolloff,
        pulse_span_chips=config.pulse_span_chips,
        angular_spread_scale=config.angular_spread_scale,
    )
    base_energy = float(np.sum(np.abs(channel.taps) ** 2))
    d = channel.n_taps
    needs_long = bool({"WOPT", "WUNQ"} & set(config.schemes))

    rows = []
    for pre_snr_db, n_d in zip(config.pre_snr_db, config.n_d_schedule):
        started = time.perf_counter()
        scale = np.sqrt(10.0 ** (pre_snr_db / 10.0) * rx.size / base_energy)
        taps = scale * channel.taps
        scaled = replace(channel, taps=taps)
        cov = np.zeros((rx.size, rx.size), dtype=np.complex128)
        for tap in taps:
            cov += tap @ tap.conj().T

        n_obs = max(n_d, config.min_observed_slots) if needs_long else n_d
        symbols = rng.integers(0, 4, size=(tx.size, n_obs + d - 1))
        pilots = np.exp(1j * (np.pi / 4.0 + np.pi / 2.0 * symbols))
        x_full, z_full = wideband_receive(scaled, pilots, rng)
        x, z = x_full[:, d - 1 :], z_full[:, d - 1 :]
        snapshot = quantize_1bit(z[:, :n_d])

        beams: dict[str, Beamformer] = {}
        if "WOPT" in config.schemes:
            beams["WOPT"] = beam_wopt(x[:, :n_obs])
        if "WUNQ" in config.schemes:
            beams["WUNQ"] = beam_wunq(z[:, :n_obs])
        if "WQ" in config.schemes:
            beams["WQ"] = beam_wq(snapshot)
        if "WSTR" in config.schemes:
            beams["WSTR"] = beam_wstrong(snapshot, rx)
        elapsed = (time.perf_counter() - started) if config.record_timings else 0.0
        for scheme in config.schemes:
            b = beams[scheme].weights
            post = float(np.real(b.conj() @ cov @ b) / rx.size)
            rows.append(
                ResultRow(
                    scenario=config.label,
                    master_seed=config.seed,
                    realization=k,
                    scheme=scheme,
                    n_d=n_obs if scheme in ("WOPT", "WUNQ") else n_d,
                    pre_snr_db=pre_snr_db,
                    elev_err_rad=None,
                    azim_err_rad=None,
                    eta=None,
                    post_snr_db=10.0 * np.log10(max(post, 1e-300)),
                    wall_time_s=elapsed,
                )
            )
    return rows


def _realization_rows(config: ExperimentConfig, profile: CdlCProfile | None, k: int) -> list[ResultRow]:
    if config.is_wideband:
        return _wideband_rows(config, k, profile)
    return _narrowband_rows(config, k)


def _csv_text(config: ExperimentConfig, rows: Sequence[ResultRow]) -> str:
    lines = [
        "# onebitbeam result rows, format v1",
        f"# scenario={config.label} master_seed={config.seed} realizations={config.k_realizations}",
        "# eta: |b^H x|^2 / |b_ideal^H x|^2 per realization (narrowband)",
        "# post_snr_db: 10*log10(b^H C b / M_r) with C = sum_d H[d] H[d]^H for white",
        "#   unit-power pilots; combined noise power is M_r for unit-modulus weights",
        ",".join(CSV_COLUMNS),
    ]
    lines.extend(",".join(row.csv_fields()) for row in rows)
    return "\n".join(lines) + "\n"


def run_experiment(
    config: ExperimentConfig,
    out_path: str | FsPath | None = None,
    seed: int | None = None,
    parallel: int = 1,
) -> list[ResultRow]:
    """Run all realizations and (optionally) write the CSV.

    The same seed always yields byte-identical CSV output; realizations may
    run in worker processes but rows are emitted in realization order.
    """
    if seed is not None:
        config = replace(config, seed=seed)
    profile = None
    if config.is_wideband:
        profile = load_cdlc(config.cdlc_profile)

    ks = range(config.k_realizations)
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            chunks = list(pool.map(_realization_rows, *zip(*((config, profile, k) for k in ks))))
    else:
        chunks = [_realization_rows(config, profile, k) for k in ks]
    rows = [row for chunk in chunks for row in chunk]

    if out_path is not None:
        FsPath(out_path).write_text(_csv_text(config, rows))
    return rows


def scan_objective(
    config: ExperimentConfig,
    theta_lo: float,
    theta_hi: float,
    theta_step: float,
    out_path: str | FsPath | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Dump the elevation objective of realization 0 on a dense angle grid."""
    if theta_step <= 0 or theta_hi <= theta_lo:
        raise ConfigError("theta grid: need lo < hi and a positive step")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed, spawn_key=(0,)))
    if config.is_wideband:
        profile = load_cdlc(config.cdlc_profile)
        channel = realize_cdlc(
            profile, rng, config.rx, config.tx,
            ofdm=config.ofdm(), delay_spread_ns=config.delay_spread_ns,
            rolloff=config.rolloff, pulse_span_chips=config.pulse_span_chips,
            angular_spread_scale=config.angular_spread_scale,
        )
        base_energy = float(np.sum(np.abs(channel.taps) ** 2))
        scale = np.sqrt(10.0 ** (config.pre_snr_db[0] / 10.0) * config.rx.size / base_energy)
        d = channel.n_taps
        n_d = config.n_d_schedule[0]
        symbols = rng.integers(0, 4, size=(config.tx.size, n_d + d - 1))
        pilots = np.exp(1j * (np.pi / 4.0 + np.pi / 2.0 * symbols))
        _, z = wideband_receive(replace(channel, taps=scale * channel.taps), pilots, rng)
        snapshot = quantize_1bit(z[:, d - 1 :])
        ctx = LogLikContext(snapshot, config.rx, mode="noncoherent")
        objective = lambda t: loglik_noncoherent_elevation(t, ctx)
    else:
        scenario = generate_narrowband_scenario(config, rng)
        v = composite_receive_vector(scenario, config.rx)
        n_d = max(config.n_d_schedule)
        noise = np.sqrt(0.5) * (
            rng.standard_normal((config.rx.size, n_d)) + 1j * rng.standard_normal((config.rx.size, n_d))
        )
        snapshot = quantize_1bit(v[:, None] + noise)
        ctx = LogLikContext(snapshot, config.rx, mode=config.mode)
        if config.mode == "coherent":
            objective = lambda t: loglik_upa_elevation(t, ctx)
        else:
            objective = lambda t: loglik_noncoherent_elevation(t, ctx)

    thetas = np.arange(theta_lo, theta_hi + theta_step / 2.0, theta_step)
    thetas = thetas[np.abs(thetas) <= np.pi / 2]
    values = np.array([objective(t) for t in thetas])
    if out_path is not None:
        lines = ["# onebitbeam objective scan", "theta_rad,loglik"]
        lines.extend(f"{format(t, '.9g')},{format(v, '.9g')}" for t, v in zip(thetas, values))
        FsPath(out_path).write_text("\n".join(lines) + "\n")
    return thetas, values
