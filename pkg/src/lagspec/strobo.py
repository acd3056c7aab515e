"""Lag sweep of eigen systems, eigenvalue/IPR trajectories, and their power
spectra.

The sweep produces one EigenSystem per lag 0..tau_max.  Trajectories track a
fixed sorted position across lags 1..tau_max: the equal-time point carries
the trivial autocorrelation spike and is excluded from spectra, though it
stays available in the sequence.  Eigenvalues are identified by sorted
position, not by eigenvector continuity.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Sequence, Union

import numpy as np
from scipy.signal import find_peaks

from .eigensys import EigenSystem, eigendecompose
from .errors import (
    ConfigInvalid,
    IndexOutOfRange,
    LagTooLarge,
    LengthMismatch,
    TooShort,
)
from .ingest import ReturnMatrix
from .lagcorr import lag_corr

TrajectoryKind = Literal["eigenvalue", "ipr"]

_KINDS = ("eigenvalue", "ipr")
_DEFAULT_PROMINENCE_FACTOR = 5.0

ENHANCED = "enhanced"
SUPPRESSED = "suppressed"
UNCHANGED = "unchanged"


@dataclass(frozen=True)
class StroboscopicSequence:
    """Eigen systems for every lag 0..tau_max of one return matrix."""

    lags: tuple[int, ...]
    systems: tuple[EigenSystem, ...]
    n: int
    delta_t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lags", tuple(int(k) for k in self.lags))
        object.__setattr__(self, "systems", tuple(self.systems))
        if len(self.lags) != len(self.systems):
            raise ValueError("one eigen system per lag required")
        if list(self.lags) != list(range(len(self.lags))):
            raise ValueError("lags must run 0..tau_max in steps of 1")
        if any(s.n != self.n for s in self.systems):
            raise ValueError("all systems must share the dimension n")

    @property
    def tau_max(self) -> int:
        return len(self.systems) - 1


@dataclass(frozen=True)
class Trajectory:
    """One eigenvalue or IPR tracked by sorted position over lags 1..tau_max."""

    kind: str
    position: int
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class SpectralPeak:
    frequency: float  # cycles per lag step
    power: float
    prominence: float


@dataclass(frozen=True)
class PowerSpectrum:
    """Squared-magnitude DFT of a trajectory with detected peaks.

    ``frequencies`` covers 0..0.5 cycles per lag step; ``peaks`` holds the
    local maxima whose prominence exceeds the configured multiple of the
    median nonzero-frequency power, sorted by power descending.
    """

    frequencies: np.ndarray
    power: np.ndarray
    peaks: tuple[SpectralPeak, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "frequencies", np.asarray(self.frequencies, dtype=float))
        object.__setattr__(self, "power", np.asarray(self.power, dtype=float))
        object.__setattr__(self, "peaks", tuple(self.peaks))
        if self.frequencies.shape != self.power.shape:
            raise ValueError("frequencies and power disagree in shape")
        if np.any(self.power < 0.0):
            raise ValueError("power must be non-negative")

    @property
    def bin_width(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])


@dataclass(frozen=True)
class ResonanceEntry:
    period_steps: float
    before_power: float
    after_power: float
    ratio: float
    classification: str


@dataclass(frozen=True)
class ResonanceReport:
    """Per-period power ratios between an after and a before spectrum."""

    entries: tuple[ResonanceEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))

    def entry(self, period_steps: float) -> ResonanceEntry:
        for item in self.entries:
            if abs(item.period_steps - period_steps) < 1e-9:
                return item
        raise KeyError(f"no probe at period {period_steps}")


def _worker_count(explicit: int | None) -> int:
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get("LAGSPEC_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigInvalid(f"LAGSPEC_THREADS must be an integer, got {env!r}")
    return min(4, os.cpu_count() or 1)


def _system_at_lag(g: ReturnMatrix, lag: int) -> EigenSystem:
    try:
        return eigendecompose(lag_corr(g, lag))
    except LagTooLarge:
        raise
    except Exception as exc:  # attach the offending lag
        raise type(exc)(f"at lag {lag}: {exc}") from exc


def sweep(
    g: ReturnMatrix,
    tau_max: int,
    *,
    delta_t: float = 1.0,
    max_workers: int | None = None,
) -> StroboscopicSequence:
    """Eigen-decompose the lagged correlation matrix at every lag 0..tau_max.

    Lags are computed as an order-preserving parallel map; the worker count
    is capped by the LAGSPEC_THREADS environment variable.
    """
    tau_max = int(tau_max)
    if tau_max < 0:
        raise ValueError("tau_max must be non-negative")
    length = g.returns.shape[1]
    if tau_max > length // 2:
        raise LagTooLarge(f"tau_max {tau_max} exceeds half the record (L={length})")
    lags = range(tau_max + 1)
    workers = _worker_count(max_workers)
    if workers == 1 or tau_max == 0:
        systems = [_system_at_lag(g, k) for k in lags]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            systems = list(pool.map(lambda k: _system_at_lag(g, k), lags))
    return StroboscopicSequence(
        lags=tuple(lags), systems=tuple(systems), n=g.n_series, delta_t=delta_t
    )


def trajectory(
    seq: StroboscopicSequence, kind: TrajectoryKind, position: int
) -> Trajectory:
    """Extract the lag trajectory of one sorted spectral position.

    Covers lags 1..tau_max; the lowest position shows secular drift in lag
    and is excluded from default period reports, but stays extractable.
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    position = int(position)
    if not 0 <= position < seq.n:
        raise IndexOutOfRange(
            f"position {position} outside 0..{seq.n - 1}"
        )
    if kind == "eigenvalue":
        values = [s.eigenvalues[position] for s in seq.systems[1:]]
    else:
        values = [s.iprs[position] for s in seq.systems[1:]]
    return Trajectory(kind=kind, position=position, values=np.asarray(values))


def power_spectrum(
    traj: Trajectory,
    detrend: Literal["none", "mean"] = "mean",
    *,
    taper: Literal["none", "hann"] = "none",
    prominence_factor: float = _DEFAULT_PROMINENCE_FACTOR,
) -> PowerSpectrum:
    """Squared-magnitude DFT of a trajectory with peak detection.

    No zero padding: frequency resolution is 1/len(values) cycles per lag
    step.  The default transform is rectangular (no taper), matching a plain
    FFT of the trajectory.
    """
    values = traj.values
    m = values.shape[0]
    if m < 8:
        raise TooShort(f"trajectory has {m} samples, need at least 8")
    if detrend not in ("none", "mean"):
        raise ValueError(f"detrend must be 'none' or 'mean', got {detrend!r}")
    if taper not in ("none", "hann"):
        raise ValueError(f"taper must be 'none' or 'hann', got {taper!r}")
    x = values - values.mean() if detrend == "mean" else values
    if taper == "hann":
        x = x * np.hanning(m)
    transform = np.fft.rfft(x)
    power = transform.real**2 + transform.imag**2
    frequencies = np.fft.rfftfreq(m)
    peaks = _detect_peaks(frequencies, power, prominence_factor)
    return PowerSpectrum(frequencies=frequencies, power=power, peaks=peaks)


def _detect_peaks(
    frequencies: np.ndarray, power: np.ndarray, prominence_factor: float
) -> tuple[SpectralPeak, ...]:
    """Local maxima whose prominence exceeds prominence_factor times the
    median nonzero-frequency power.  The zero-frequency bin is never a peak
    because endpoints are not local maxima."""
    indices, props = find_peaks(power, prominence=0.0)
    if indices.size == 0:
        return ()
    prominences = props["prominences"]
    floor = float(np.median(power[1:]))
    keep = prominences > prominence_factor * floor
    peaks = [
        SpectralPeak(
            frequency=float(frequencies[i]),
            power=float(power[i]),
            prominence=float(p),
        )
        for i, p in zip(indices[keep], prominences[keep])
    ]
    peaks.sort(key=lambda p: (-p.power, p.frequency))
    return tuple(peaks)


def characteristic_periods(
    spec: PowerSpectrum, top_n: int
) -> list[tuple[float, float]]:
    """Periods (in lag steps) of the top_n detected peaks with their powers.

    The zero-frequency bin never participates.  A flat spectrum yields an
    empty list rather than an error.
    """
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    return [(1.0 / p.frequency, p.power) for p in spec.peaks[:top_n]]


def _power_near_period(spec: PowerSpectrum, period: float) -> float:
    width = spec.bin_width
    target = 1.0 / period
    if target > spec.frequencies[-1] + width:
        raise ValueError(
            f"period {period} is below the resolvable range (Nyquist)"
        )
    center = int(round(target / width))
    lo = max(center - 1, 0)
    hi = min(center + 1, spec.power.shape[0] - 1)
    return float(np.max(spec.power[lo : hi + 1]))


def compare_spectra(
    before: PowerSpectrum,
    after: PowerSpectrum,
    probe_periods: Sequence[float],
    *,
    enhanced_ratio: float = 2.0,
    suppressed_ratio: float = 0.5,
) -> ResonanceReport:
    """Power ratio after/before within one bin of each probe period.

    A period is classified enhanced when the ratio reaches
    ``enhanced_ratio`` (default 2), suppressed at or below
    ``suppressed_ratio`` (default 0.5), unchanged otherwise.
    """
    if before.power.shape != after.power.shape:
        raise LengthMismatch(
            "spectra must come from trajectories of equal length"
        )
    entries = []
    for period in probe_periods:
        if period <= 0:
            raise ValueError(f"probe period must be positive, got {period}")
        b = _power_near_period(before, period)
        a = _power_near_period(after, period)
        if b == 0.0:
            ratio = 1.0 if a == 0.0 else float("inf")
        else:
            ratio = a / b
        if ratio >= enhanced_ratio:
            label = ENHANCED
        elif ratio <= suppressed_ratio:
            label = SUPPRESSED
        else:
            label = UNCHANGED
        entries.append(
            ResonanceEntry(
                period_steps=float(period),
                before_power=b,
                after_power=a,
                ratio=ratio,
                classification=label,
            )
        )
    return ResonanceReport(entries=tuple(entries))


def write_trajectory_csv(traj: Trajectory, path: Union[str, Path]) -> None:
    """CSV export: header ``tau,value``, one row per lag 1..tau_max."""
    with open(path, "w") as handle:
        handle.write("tau,value\n")
        for tau, value in enumerate(traj.values, start=1):
            handle.write(f"{tau},{value:.17g}\n")


def write_spectrum_csv(spec: PowerSpectrum, path: Union[str, Path]) -> None:
    """CSV export: header ``frequency,power``."""
    with open(path, "w") as handle:
        handle.write("frequency,power\n")
        for f, p in zip(spec.frequencies, spec.power):
            handle.write(f"{f:.17g},{p:.17g}\n")


def peak_report(
    spec: PowerSpectrum, *, position: int, kind: str, delta_t: float
) -> dict:
    """JSON-ready peak summary for one trajectory's spectrum."""
    return {
        "position": int(position),
        "kind": kind,
        "peaks": [
            {
                "frequency": p.frequency,
                "period_steps": 1.0 / p.frequency,
                "period_seconds": delta_t / p.frequency,
                "power": p.power,
                "prominence": p.prominence,
            }
            for p in spec.peaks
        ],
    }
