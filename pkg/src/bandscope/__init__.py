"""Subband spectral-balance and level-vs-distance analysis toolkit."""

from .balance import (
    BalanceDifference,
    BalanceResult,
    WeightEvolution,
    balance_difference,
    spectral_balance,
    weight_evolution,
)
from .campaign import (
    CampaignResult,
    ComparisonReport,
    ComparisonRow,
    IngestReport,
    SeriesAnalysis,
    SeriesError,
    analyze,
    analyze_report,
    compare_to_stimulus,
    export,
    ingest,
    run_campaign,
)
from .errors import BandscopeError
from .filterbank import (
    BAND_PRESETS,
    DEFAULT_TAPS,
    FAST_TAPS,
    BandMapping,
    FilterBank,
    apply_zero_phase,
    decompose,
    design_bank,
    load_mapping,
)
from .level import (
    GapPoint,
    LevelCurve,
    ValidityVerdict,
    gap_curve,
    measured_level_curve,
    theoretical_amplification,
    validity_limit,
)
from .series import MeasurementEntry, MeasurementSeries
from .signal import (
    SILENCE,
    LevelDbfs,
    Signal,
    mean_level_dbfs,
    normalize_to_level,
)
from .stimuli import StimulusSpec, gen_pink, gen_sine, gen_stimulus, spectral_slope
from .synthfield import (
    DirectivityModel,
    DistanceProfile,
    GroundTruth,
    SynthCampaignSpec,
    directivity_gain,
    synth_campaign,
    synth_recording,
)
from .wavio import load_wav, save_wav

__version__ = "0.1.0"

__all__ = [
    "BAND_PRESETS",
    "DEFAULT_TAPS",
    "FAST_TAPS",
    "SILENCE",
    "BalanceDifference",
    "BalanceResult",
    "BandMapping",
    "BandscopeError",
    "CampaignResult",
    "ComparisonReport",
    "ComparisonRow",
    "DirectivityModel",
    "DistanceProfile",
    "FilterBank",
    "GapPoint",
    "GroundTruth",
    "IngestReport",
    "LevelCurve",
    "LevelDbfs",
    "MeasurementEntry",
    "MeasurementSeries",
    "SeriesAnalysis",
    "SeriesError",
    "Signal",
    "StimulusSpec",
    "SynthCampaignSpec",
    "ValidityVerdict",
    "WeightEvolution",
    "analyze",
    "analyze_report",
    "apply_zero_phase",
    "balance_difference",
    "compare_to_stimulus",
    "decompose",
    "design_bank",
    "directivity_gain",
    "export",
    "gap_curve",
    "gen_pink",
    "gen_sine",
    "gen_stimulus",
    "ingest",
    "load_mapping",
    "load_wav",
    "mean_level_dbfs",
    "measured_level_curve",
    "normalize_to_level",
    "run_campaign",
    "save_wav",
    "spectral_balance",
    "spectral_slope",
    "synth_campaign",
    "synth_recording",
    "theoretical_amplification",
    "validity_limit",
    "weight_evolution",
]
