"""Spectral balance: per-subband relative energy weights.

The weight of a subband is the sum of squares of its samples divided by the
sum of squares of the whole signal; expressed in dB that is 10*log10 of the
energy ratio (weights are power ratios, so 10*log10, not 20). Weights are
invariant under global gain, which is what makes stimulus/recording
comparisons and distance evolutions meaningful.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MappingMismatchError, MissingReferenceError, SilenceError
from .filterbank import BandMapping, FilterBank, decompose
from .series import MeasurementSeries
from .signal import LevelDbfs, Signal, mean_level_dbfs

__all__ = [
    "BalanceResult",
    "WeightEvolution",
    "BalanceDifference",
    "spectral_balance",
    "weight_evolution",
    "balance_difference",
]


@dataclass(frozen=True)
class BalanceResult:
    """Per-band weights of one analyzed signal plus its mean level."""

    mapping: BandMapping
    weights_linear: tuple[float, ...]
    weights_db: tuple[float, ...]  # -inf marks an empty band (silence sentinel)
    mean_level: LevelDbfs

    @property
    def n_bands(self) -> int:
        return len(self.weights_linear)

    def to_json(self) -> dict:
        return {
            "edges_hz": list(self.mapping.edges),
            "weights_linear": list(self.weights_linear),
            "weights_db": [None if w == -math.inf else w for w in self.weights_db],
            "mean_level_dbfs": self.mean_level.to_json(),
        }

    def to_csv(self) -> str:
        """One row per band: index, edges, linear weight, relative dB."""
        lines = ["band,low_hz,high_hz,weight_linear,weight_db"]
        for i in range(self.n_bands):
            lo, hi = self.mapping.band(i)
            db = self.weights_db[i]
            db_cell = "silence" if db == -math.inf else repr(db)
            lines.append(f"{i + 1},{lo:g},{hi:g},{repr(self.weights_linear[i])},{db_cell}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class WeightEvolution:
    """One band's weight vs distance, in dB relative to the reference distance."""

    band_index: int
    band_label: str
    reference_distance_cm: float
    points: tuple[tuple[float, float], ...]  # (distance_cm, delta_db)

    @property
    def distances(self) -> tuple[float, ...]:
        return tuple(d for d, _ in self.points)

    @property
    def deltas_db(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.points)


@dataclass(frozen=True)
class BalanceDifference:
    """Stimulus-minus-recording weight differences plus the mean-level pair.

    Positive difference: the band is more important in the stimulus balance
    than in the recording.
    """

    diffs_db: tuple[float, ...]
    stimulus_level: LevelDbfs
    recording_level: LevelDbfs

    def to_csv(self) -> str:
        """One row per band plus the mean-level pair as a trailing row."""
        lines = ["band,difference_db"]
        for i, d in enumerate(self.diffs_db):
            cell = "" if math.isnan(d) else repr(d)
            lines.append(f"{i + 1},{cell}")
        stim = "silence" if self.stimulus_level.is_silence else repr(self.stimulus_level.value)
        rec = "silence" if self.recording_level.is_silence else repr(self.recording_level.value)
        lines.append(f"mean_levels,{stim}/{rec}")
        return "\n".join(lines) + "\n"


def spectral_balance(signal: Signal, bank: FilterBank) -> BalanceResult:
    """Weights of every subband of ``signal`` under ``bank``'s mapping."""
    total = float(np.sum(np.square(signal.samples)))
    if total == 0.0:
        raise SilenceError("spectral balance of an all-zero signal is undefined")
    subbands = decompose(bank, signal)
    linear = tuple(float(np.sum(np.square(s.samples))) / total for s in subbands)
    db = tuple(10.0 * math.log10(w) if w > 0.0 else -math.inf for w in linear)
    return BalanceResult(
        mapping=bank.mapping,
        weights_linear=linear,
        weights_db=db,
        mean_level=mean_level_dbfs(signal),
    )


def weight_evolution(
    series: MeasurementSeries,
    bank: FilterBank,
    reference_distance_cm: float = 100.0,
) -> list[WeightEvolution]:
    """Per-band weight deltas against the reference distance, one curve per band.

    The reference point is pinned to exactly 0 dB. Bands with zero energy at
    some distance cannot form a delta there; such points are dropped from
    that band's curve with a warning rather than fabricated.
    """
    if not series.has_distance(reference_distance_cm):
        raise MissingReferenceError(
            f"series {series.key} has no recording at reference "
            f"{reference_distance_cm} cm (distances: {series.distances})"
        )
    balances = {
        entry.distance_cm: spectral_balance(sig, bank)
        for entry, sig in zip(series.entries, series.signals)
    }
    reference = balances[float(reference_distance_cm)]

    curves = []
    for band in range(bank.n_bands):
        ref_db = reference.weights_db[band]
        points = []
        for distance in series.distances:
            w_db = balances[distance].weights_db[band]
            if distance == float(reference_distance_cm):
                points.append((distance, 0.0))
            elif w_db == -math.inf or ref_db == -math.inf:
                warnings.warn(
                    f"band {band + 1} ({bank.mapping.band_label(band)}) is silent "
                    f"at {distance} cm or at the reference; point excluded",
                    stacklevel=2,
                )
            else:
                points.append((distance, w_db - ref_db))
        curves.append(
            WeightEvolution(
                band_index=band,
                band_label=bank.mapping.band_label(band),
                reference_distance_cm=float(reference_distance_cm),
                points=tuple(points),
            )
        )
    return curves


def balance_difference(
    stimulus: BalanceResult, recording: BalanceResult
) -> BalanceDifference:
    """Stimulus weights minus recording weights, band by band, in dB.

    Both results must come from the same mapping. Lengths of the underlying
    signals may differ: weights are normalized ratios.
    """
    if stimulus.mapping.edges != recording.mapping.edges:
        raise MappingMismatchError(
            f"stimulus mapping {stimulus.mapping.edges} != "
            f"recording mapping {recording.mapping.edges}"
        )
    # a silent band on either side has no defined difference; nan, not a
    # fabricated large negative
    diffs = tuple(
        (s - r) if (s != -math.inf and r != -math.inf) else math.nan
        for s, r in zip(stimulus.weights_db, recording.weights_db)
    )
    return BalanceDifference(
        diffs_db=diffs,
        stimulus_level=stimulus.mean_level,
        recording_level=recording.mean_level,
    )
