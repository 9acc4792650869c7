"""Angle-of-arrival estimation and analog receive beamforming from 1-bit
quantized array snapshots, with a seeded Monte-Carlo experiment harness."""

from .beamforming import (
    Beamformer,
    SampleCovariance,
    beam_estimation,
    beam_ideal,
    beam_strong,
    beam_wopt,
    beam_wq,
    beam_wstrong,
    beam_wunq,
    maximize_unit_modulus,
    sample_covariance,
    snr_ratio,
)
from .cdlc import CdlCProfile, OfdmConfig, load_cdlc, packaged_profile_path, realize_cdlc
from .estimation import (
    AngleEstimate,
    CoarseGrid,
    coarse_scan,
    detect_peaks,
    estimate_gains,
    estimate_ula,
    estimate_upa,
    refine,
)
from .geometry import ArrayGeometry, ula_response, upa_response
from .harness import (
    ConfigError,
    ExperimentConfig,
    NarrowbandScenario,
    ResultRow,
    config_from_mapping,
    generate_narrowband_scenario,
    load_config,
    run_experiment,
    scan_objective,
)
from .likelihood import (
    GainGrid,
    LogLikContext,
    log_fN,
    loglik_noncoherent_azimuth,
    loglik_noncoherent_elevation,
    loglik_ula_coherent,
    loglik_upa_azimuth,
    loglik_upa_elevation,
)
from .signals import (
    Path,
    PathSet,
    QuantizedSnapshot,
    WidebandChannel,
    narrowband_channel,
    quantize_1bit,
    wideband_receive,
)

__version__ = "0.1.0"
