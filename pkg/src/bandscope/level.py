"""Mean-level curves vs distance and the spherical-wave comparison.

Amplifications are relative to a reference distance (0 dB there by
construction). The theoretical overlay is the inverse-distance law
20*log10(x_ref/x): +6.02 dB per halving. A validity verdict names the
smallest distance beyond which every measured deviation stays inside a
threshold; the rule is suffix-based, so a late excursion (the
"re-equalization" pattern) invalidates closer limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    InvalidInputError,
    MissingReferenceError,
    SingularityError,
)
from .series import MeasurementSeries
from .signal import mean_level_dbfs

__all__ = [
    "LevelCurve",
    "GapPoint",
    "ValidityVerdict",
    "theoretical_amplification",
    "measured_level_curve",
    "gap_curve",
    "validity_limit",
]


@dataclass(frozen=True)
class LevelCurve:
    """Measured amplification (dB) per distance, 0 dB at the reference."""

    points: tuple[tuple[float, float], ...]  # (distance_cm, amplification_db)
    reference_distance_cm: float

    def __post_init__(self) -> None:
        dists = [d for d, _ in self.points]
        if any(d < 0 for d in dists):
            raise InvalidInputError("distances must be >= 0 cm")
        if sorted(set(dists)) != dists:
            raise InvalidInputError("distances must be unique and ascending")

    @property
    def distances(self) -> tuple[float, ...]:
        return tuple(d for d, _ in self.points)

    @property
    def amplifications_db(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.points)

    def to_csv(self) -> str:
        lines = ["distance_cm,amplification_db"]
        lines += [f"{d:g},{repr(v)}" for d, v in self.points]
        return "\n".join(lines) + "\n"

    def plot_columns(self, with_theory: bool = False) -> str:
        """Whitespace-separated two-column block for plotting tools.

        With ``with_theory`` the theoretical overlay is appended as a second
        block (blank-line separated), covering the x > 0 points only.
        """
        rows = [f"{d:g} {v:.6f}" for d, v in self.points]
        if with_theory:
            rows.append("")
            rows += [
                f"{d:g} {theoretical_amplification(d, self.reference_distance_cm):.6f}"
                for d, _ in self.points
                if d > 0
            ]
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class GapPoint:
    """Measured-minus-theoretical deviation at one distance.

    At x = 0 the law diverges, so the point is carried with
    ``theory_defined = False`` and no gap value.
    """

    distance_cm: float
    gap_db: float | None
    theory_defined: bool


@dataclass(frozen=True)
class ValidityVerdict:
    """Outcome of the wave-validity check for one deviation curve."""

    limit_distance_cm: float | None
    threshold_db: float
    rule: str

    @property
    def has_limit(self) -> bool:
        return self.limit_distance_cm is not None


def theoretical_amplification(x_cm: float, x_ref_cm: float) -> float:
    """Spherical-wave level gain at ``x_cm`` relative to ``x_ref_cm``: 20*log10(x_ref/x)."""
    if x_cm <= 0:
        raise SingularityError(f"1/x law diverges at distance {x_cm} cm")
    if x_ref_cm <= 0:
        raise SingularityError(f"reference distance must be positive, got {x_ref_cm}")
    return 20.0 * math.log10(x_ref_cm / x_cm)


def measured_level_curve(
    series: MeasurementSeries, reference_distance_cm: float = 100.0
) -> LevelCurve:
    """Mean-level amplification of each recording relative to the reference.

    Invariant under any global gain applied to the whole series; the
    reference point is pinned to exactly 0 dB.
    """
    if not series.has_distance(reference_distance_cm):
        raise MissingReferenceError(
            f"series {series.key} has no recording at reference "
            f"{reference_distance_cm} cm (distances: {series.distances})"
        )
    ref_level = mean_level_dbfs(series.signal_at(reference_distance_cm))
    if ref_level.is_silence:
        raise InvalidInputError(
            f"reference recording at {reference_distance_cm} cm is silent"
        )
    points = []
    for entry, sig in zip(series.entries, series.signals):
        if entry.distance_cm == float(reference_distance_cm):
            points.append((entry.distance_cm, 0.0))
            continue
        level = mean_level_dbfs(sig)
        if level.is_silence:
            raise InvalidInputError(
                f"recording at {entry.distance_cm} cm is silent; no level defined"
            )
        points.append((entry.distance_cm, level.value - ref_level.value))
    return LevelCurve(
        points=tuple(points), reference_distance_cm=float(reference_distance_cm)
    )


def gap_curve(measured: LevelCurve, x_ref_cm: float | None = None) -> list[GapPoint]:
    """Measured minus theoretical amplification, per point.

    Negative gap: measurement sits below the 1/x law. Points at x = 0 are
    flagged theory-undefined instead of extrapolating the law.
    """
    ref = measured.reference_distance_cm if x_ref_cm is None else float(x_ref_cm)
    out = []
    for distance, amp_db in measured.points:
        if distance <= 0:
            out.append(GapPoint(distance_cm=distance, gap_db=None, theory_defined=False))
        else:
            gap = amp_db - theoretical_amplification(distance, ref)
            out.append(GapPoint(distance_cm=distance, gap_db=gap, theory_defined=True))
    return out


def validity_limit(
    deviations: list[tuple[float, float]] | tuple[tuple[float, float], ...],
    threshold_db: float = 1.0,
) -> ValidityVerdict:
    """Smallest distance past which every deviation stays within the threshold.

    ``deviations`` is (distance_cm, deviation_db) pairs; at least two are
    required. Every point at or beyond the returned limit satisfies
    |deviation| <= threshold; if even the farthest point violates, there is
    no limit. Suffix-based by design: a compliant stretch followed by a late
    excursion does not count.
    """
    if threshold_db <= 0:
        raise InvalidInputError(f"threshold must be positive, got {threshold_db}")
    pts = sorted((float(d), float(v)) for d, v in deviations)
    if len(pts) < 2:
        raise InvalidInputError(f"need at least 2 deviation points, got {len(pts)}")
    if len({d for d, _ in pts}) != len(pts):
        raise InvalidInputError("deviation distances must be unique")

    limit = None
    for distance, value in reversed(pts):
        if abs(value) <= threshold_db:
            limit = distance
        else:
            break
    rule = (
        f"every measured point at distance >= limit deviates by at most "
        f"{threshold_db:g} dB in magnitude"
    )
    return ValidityVerdict(limit_distance_cm=limit, threshold_db=threshold_db, rule=rule)
