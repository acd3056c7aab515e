"""Time-lagged correlation spectra of multivariate traffic time series.

Pipeline: load counts -> normalized log rate changes -> symmetrized lagged
correlation matrices -> eigenvalues / eigenvector IPRs per lag -> power
spectra of their lag trajectories -> injection experiments probing how the
spectra react.
"""
from .errors import (
    ConfigInvalid,
    ConvergenceFailure,
    DegenerateAspect,
    IndexOutOfRange,
    LagspecError,
    LagTooLarge,
    LengthMismatch,
    NonPositiveCount,
    NotNormalized,
    ParseError,
    TooShort,
    UnknownSeries,
    WindowOutOfRange,
    ZeroVariance,
)
from .ingest import (
    CountMatrix,
    ReturnMatrix,
    load_counts,
    normalize,
    rate_changes,
    returns_from_counts,
)
from .lagcorr import LagCorrMatrix, equal_time_corr, lag_corr, write_matrix_csv
from .eigensys import (
    EigenSystem,
    RmtBounds,
    SpectrumSegmentation,
    eigendecompose,
    ipr,
    rmt_bounds,
    segment,
)
from .strobo import (
    PowerSpectrum,
    ResonanceEntry,
    ResonanceReport,
    SpectralPeak,
    StroboscopicSequence,
    Trajectory,
    characteristic_periods,
    compare_spectra,
    peak_report,
    power_spectrum,
    sweep,
    trajectory,
    write_spectrum_csv,
    write_trajectory_csv,
)
from .experiment import (
    DEFAULT_SYNTH,
    SYNTH_PRESETS,
    ExperimentReport,
    InjectionSpec,
    SynthConfig,
    WatchReport,
    default_targets,
    inject,
    load_injection_spec,
    run_experiment,
    synth_generate,
)

__version__ = "0.1.0"

__all__ = [
    "CountMatrix",
    "ReturnMatrix",
    "LagCorrMatrix",
    "EigenSystem",
    "RmtBounds",
    "SpectrumSegmentation",
    "StroboscopicSequence",
    "Trajectory",
    "PowerSpectrum",
    "SpectralPeak",
    "ResonanceEntry",
    "ResonanceReport",
    "SynthConfig",
    "InjectionSpec",
    "WatchReport",
    "ExperimentReport",
    "DEFAULT_SYNTH",
    "SYNTH_PRESETS",
    "load_counts",
    "rate_changes",
    "normalize",
    "returns_from_counts",
    "lag_corr",
    "equal_time_corr",
    "write_matrix_csv",
    "eigendecompose",
    "ipr",
    "rmt_bounds",
    "segment",
    "sweep",
    "trajectory",
    "power_spectrum",
    "characteristic_periods",
    "compare_spectra",
    "peak_report",
    "write_trajectory_csv",
    "write_spectrum_csv",
    "synth_generate",
    "inject",
    "default_targets",
    "run_experiment",
    "load_injection_spec",
    "LagspecError",
    "ParseError",
    "NonPositiveCount",
    "TooShort",
    "ZeroVariance",
    "LagTooLarge",
    "ConvergenceFailure",
    "NotNormalized",
    "DegenerateAspect",
    "IndexOutOfRange",
    "UnknownSeries",
    "WindowOutOfRange",
    "LengthMismatch",
    "ConfigInvalid",
]
