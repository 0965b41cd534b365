"""Campaign ingestion, batch analysis, comparison reports and export.

A manifest is one JSON document with an ``entries`` array; each entry names
a recording file, its distance in cm and the (microphone, directivity,
stimulus) labels. Entries sharing labels form a series. Analysis runs the
level and balance chains per series; export writes one level CSV and one
CSV per band plus a summary JSON, deterministically.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
from dataclasses import dataclass
from pathlib import Path

from . import wavio
from .balance import (
    BalanceDifference,
    WeightEvolution,
    balance_difference,
    spectral_balance,
    weight_evolution,
)
from .errors import (
    BandscopeError,
    DuplicateDistanceError,
    ManifestError,
    RateMismatchError,
)
from .filterbank import FilterBank
from .level import (
    GapPoint,
    LevelCurve,
    ValidityVerdict,
    gap_curve,
    measured_level_curve,
    validity_limit,
)
from .series import MeasurementEntry, MeasurementSeries
from .signal import LevelDbfs, Signal, mean_level_dbfs

__all__ = [
    "IngestReport",
    "SeriesError",
    "SeriesAnalysis",
    "CampaignResult",
    "ComparisonRow",
    "ComparisonReport",
    "ingest",
    "analyze",
    "run_campaign",
    "analyze_report",
    "compare_to_stimulus",
    "export",
]


@dataclass(frozen=True)
class SeriesError:
    """A series that produced no result, and why."""

    key: tuple[str, str, str]
    kind: str
    message: str


@dataclass(frozen=True)
class IngestReport:
    """Loaded series plus the per-series errors for excluded ones."""

    series: tuple[MeasurementSeries, ...]
    errors: tuple[SeriesError, ...]


def _manifest_entries(manifest_path: str | os.PathLike) -> list[MeasurementEntry]:
    path = Path(manifest_path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise ManifestError(f"manifest not found: {path}")
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: not valid JSON ({exc})")
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise ManifestError(f"{path}: expected an object with an 'entries' array")
    entries = []
    for i, row in enumerate(doc["entries"]):
        try:
            entries.append(
                MeasurementEntry(
                    distance_cm=float(row["distance_cm"]),
                    microphone=str(row["microphone"]),
                    directivity=str(row["directivity"]),
                    stimulus=str(row["stimulus"]),
                    path=str(row["path"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"{path}: entry {i} invalid: {exc}")
    if not entries:
        raise ManifestError(f"{path}: manifest holds no entries")
    return entries


def ingest(manifest_path: str | os.PathLike) -> IngestReport:
    """Load a manifest into series, grouped and sorted by distance.

    Duplicate distances within a series and sample-rate mixtures raise;
    a series with a missing or unreadable file is excluded and listed in
    the report's errors instead (no silent drops).
    """
    entries = _manifest_entries(manifest_path)
    base = Path(manifest_path).parent

    groups: dict[tuple[str, str, str], list[MeasurementEntry]] = {}
    for entry in entries:
        groups.setdefault(entry.key, []).append(entry)

    series_list: list[MeasurementSeries] = []
    errors: list[SeriesError] = []
    for key in sorted(groups):
        group = groups[key]
        dists = [e.distance_cm for e in group]
        if len(set(dists)) != len(dists):
            dup = sorted(d for d in set(dists) if dists.count(d) > 1)
            raise DuplicateDistanceError(
                f"series {key}: duplicate distance(s) {dup} cm in manifest"
            )
        signals = []
        failure: SeriesError | None = None
        for entry in group:
            file_path = Path(entry.path) if os.path.isabs(entry.path) else base / entry.path
            try:
                signals.append(wavio.load_wav(file_path))
            except (OSError, BandscopeError) as exc:
                failure = SeriesError(key=key, kind="load", message=f"{file_path}: {exc}")
                break
        if failure is not None:
            errors.append(failure)
            continue
        rates = {s.sample_rate for s in signals}
        if len(rates) > 1:
            raise RateMismatchError(f"series {key}: mixed sample rates {sorted(rates)}")
        series_list.append(MeasurementSeries(entries=tuple(group), signals=tuple(signals)))
    return IngestReport(series=tuple(series_list), errors=tuple(errors))


@dataclass(frozen=True)
class SeriesAnalysis:
    """Full analysis of one series."""

    key: tuple[str, str, str]
    level_curve: LevelCurve
    gaps: tuple[GapPoint, ...]
    level_verdict: ValidityVerdict | None
    weight_evolutions: tuple[WeightEvolution, ...]
    band_verdicts: tuple[ValidityVerdict, ...]
    reequalized_bands: tuple[int, ...]  # band indices with a rise after an interior minimum
    mean_levels: tuple[tuple[float, LevelDbfs], ...]
    analyzed_length: int

    @property
    def label(self) -> str:
        return "_".join(self.key)

    @property
    def max_abs_gap_db(self) -> float | None:
        defined = [abs(g.gap_db) for g in self.gaps if g.theory_defined]
        return max(defined) if defined else None


def _detect_reequalization(evolution: WeightEvolution, threshold_db: float) -> bool:
    """A weight minimum at an interior distance followed by a rise beyond the
    threshold: the pattern that forbids naming a validity limit."""
    deltas = evolution.deltas_db
    if len(deltas) < 3:
        return False
    i_min = min(range(len(deltas)), key=lambda i: deltas[i])
    if i_min == 0 or i_min == len(deltas) - 1:
        return False
    return (deltas[-1] - deltas[i_min]) > threshold_db


def analyze(
    series: MeasurementSeries,
    bank: FilterBank,
    reference_distance_cm: float = 100.0,
    threshold_db: float = 1.0,
) -> SeriesAnalysis:
    """Level curve, gap curve, weight evolutions and validity verdicts.

    Recordings are trimmed to the common length first. Band verdicts use the
    weight deltas as deviations; a band showing the re-equalization pattern
    gets no validity limit regardless of its suffix, because the late rise
    is exactly what the limit is supposed to exclude.
    """
    series = series.trimmed_to_common_length()
    curve = measured_level_curve(series, reference_distance_cm)
    gaps = tuple(gap_curve(curve))

    defined = [(g.distance_cm, g.gap_db) for g in gaps if g.theory_defined]
    level_verdict = validity_limit(defined, threshold_db) if len(defined) >= 2 else None

    evolutions = tuple(weight_evolution(series, bank, reference_distance_cm))
    band_verdicts = []
    reequalized = []
    for evo in evolutions:
        if _detect_reequalization(evo, threshold_db):
            reequalized.append(evo.band_index)
            band_verdicts.append(
                ValidityVerdict(
                    limit_distance_cm=None,
                    threshold_db=threshold_db,
                    rule=(
                        "no validity limit: weight rises by more than "
                        f"{threshold_db:g} dB after an interior minimum"
                    ),
                )
            )
        elif len(evo.points) >= 2:
            band_verdicts.append(validity_limit(evo.points, threshold_db))
        else:
            band_verdicts.append(
                ValidityVerdict(
                    limit_distance_cm=None,
                    threshold_db=threshold_db,
                    rule="no validity limit: fewer than 2 usable points",
                )
            )

    mean_levels = tuple(
        (entry.distance_cm, mean_level_dbfs(sig))
        for entry, sig in zip(series.entries, series.signals)
    )
    return SeriesAnalysis(
        key=series.key,
        level_curve=curve,
        gaps=gaps,
        level_verdict=level_verdict,
        weight_evolutions=evolutions,
        band_verdicts=tuple(band_verdicts),
        reequalized_bands=tuple(reequalized),
        mean_levels=mean_levels,
        analyzed_length=len(series.signals[0]),
    )


@dataclass(frozen=True)
class CampaignResult:
    """Analyses, recorded per-series errors, and the configuration block."""

    analyses: tuple[SeriesAnalysis, ...]
    errors: tuple[SeriesError, ...]
    provenance: dict

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.provenance, sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def analyze_report(
    report: IngestReport,
    bank: FilterBank,
    reference_distance_cm: float = 100.0,
    threshold_db: float = 1.0,
) -> CampaignResult:
    """Analyze every ingested series; failures become recorded errors,
    never silent drops."""
    analyses = []
    errors = list(report.errors)
    for series in report.series:
        try:
            analyses.append(analyze(series, bank, reference_distance_cm, threshold_db))
        except BandscopeError as exc:
            errors.append(
                SeriesError(key=series.key, kind=type(exc).__name__, message=str(exc))
            )
    provenance = {
        "mapping_edges_hz": list(bank.mapping.edges),
        "filter_length": bank.length,
        "sample_rate_hz": bank.sample_rate,
        "reference_distance_cm": reference_distance_cm,
        "threshold_db": threshold_db,
    }
    return CampaignResult(
        analyses=tuple(analyses), errors=tuple(errors), provenance=provenance
    )


def run_campaign(
    manifest_path: str | os.PathLike,
    bank: FilterBank,
    reference_distance_cm: float = 100.0,
    threshold_db: float = 1.0,
) -> CampaignResult:
    """Ingest a manifest and analyze it in one step."""
    return analyze_report(ingest(manifest_path), bank, reference_distance_cm, threshold_db)


@dataclass(frozen=True)
class ComparisonRow:
    """One stimulus-vs-recording line: label, per-band diffs, level pair."""

    label: str
    difference: BalanceDifference
    distance_cm: float


@dataclass(frozen=True)
class ComparisonReport:
    """Stimulus-vs-recording rows in a fixed column layout.

    Columns: label, one signed dB figure per subband (positive means the
    band weighs more in the stimulus), then the stimulus/recording mean
    level pair.
    """

    stimulus_label: str
    rows: tuple[ComparisonRow, ...]
    n_bands: int

    def to_csv(self) -> str:
        head = ",".join(f"band{i + 1}" for i in range(self.n_bands))
        lines = [f"comparison,{head},stimulus_level_dbfs,recording_level_dbfs"]
        for row in self.rows:
            diffs = ",".join(_csv_float(v) for v in row.difference.diffs_db)
            lines.append(
                f"{self.stimulus_label}/{row.label},{diffs},"
                f"{_level_csv(row.difference.stimulus_level)},"
                f"{_level_csv(row.difference.recording_level)}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        head = ["comparison"] + [f"b{i + 1}" for i in range(self.n_bands)] + ["levels"]
        widths = [28] + [7] * self.n_bands + [16]
        out = ["".join(h.rjust(w) for h, w in zip(head, widths))]
        for row in self.rows:
            cells = [f"{self.stimulus_label}/{row.label}"]
            for v in row.difference.diffs_db:
                cells.append("n/a" if math.isnan(v) else f"{v:+.1f}")
            pair = (
                f"{_level_text(row.difference.stimulus_level)}/"
                f"{_level_text(row.difference.recording_level)}"
            )
            cells.append(pair)
            out.append("".join(c.rjust(w) for c, w in zip(cells, widths)))
        return "\n".join(out) + "\n"


def compare_to_stimulus(
    stimulus_signal: Signal,
    series: MeasurementSeries,
    bank: FilterBank,
    at_distance_cm: float = 100.0,
) -> ComparisonRow:
    """Balance difference between a stimulus and one series recording."""
    recording = series.signal_at(at_distance_cm)  # raises MissingDistanceError
    diff = balance_difference(
        spectral_balance(stimulus_signal, bank), spectral_balance(recording, bank)
    )
    label = f"{series.key[0]} {series.key[1]}".strip()
    return ComparisonRow(label=label, difference=diff, distance_cm=float(at_distance_cm))


# --- export ---------------------------------------------------------------

def _safe_name(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", label)


def _csv_float(v: float | None) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return repr(float(v))


def _level_csv(level: LevelDbfs) -> str:
    return "silence" if level.is_silence else repr(level.value)


def _level_text(level: LevelDbfs) -> str:
    return "silence" if level.is_silence else f"{level.value:.1f}"


def _verdict_json(v: ValidityVerdict | None) -> dict | None:
    if v is None:
        return None
    return {
        "limit_distance_cm": v.limit_distance_cm,
        "threshold_db": v.threshold_db,
        "rule": v.rule,
    }


def export(result: CampaignResult, out_dir: str | os.PathLike) -> list[Path]:
    """Write per-series curve CSVs and the summary JSON into ``out_dir``.

    File naming is {microphone}_{directivity}_{stimulus}_{metric}.csv and
    the output is byte-deterministic for identical inputs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    summary: dict = {
        "provenance": result.provenance,
        "config_hash": result.config_hash,
        "series": [],
        "errors": [
            {"series": list(e.key), "kind": e.kind, "message": e.message}
            for e in sorted(result.errors, key=lambda e: e.key)
        ],
    }

    for analysis in sorted(result.analyses, key=lambda a: a.key):
        stem = _safe_name(analysis.label)
        theory_by_distance = {
            g.distance_cm: g for g in analysis.gaps
        }
        lines = ["distance_cm,amplification_db,theory_db,gap_db"]
        for distance, amp in analysis.level_curve.points:
            gap = theory_by_distance[distance]
            if gap.theory_defined:
                theory = amp - gap.gap_db
                lines.append(
                    f"{distance:g},{_csv_float(amp)},{_csv_float(theory)},{_csv_float(gap.gap_db)}"
                )
            else:
                lines.append(f"{distance:g},{_csv_float(amp)},,")
        level_path = out / f"{stem}_level.csv"
        level_path.write_text("\n".join(lines) + "\n")
        written.append(level_path)

        for evo in analysis.weight_evolutions:
            lines = ["distance_cm,delta_weight_db"]
            for distance, delta in evo.points:
                lines.append(f"{distance:g},{_csv_float(delta)}")
            band_path = out / f"{stem}_band{evo.band_index + 1:02d}_weight.csv"
            band_path.write_text("\n".join(lines) + "\n")
            written.append(band_path)

        summary["series"].append(
            {
                "series": list(analysis.key),
                "n_points": len(analysis.level_curve.points),
                "analyzed_length_samples": analysis.analyzed_length,
                "mean_levels_dbfs": [
                    [d, lv.to_json()] for d, lv in analysis.mean_levels
                ],
                "max_abs_gap_db": analysis.max_abs_gap_db,
                "level_verdict": _verdict_json(analysis.level_verdict),
                "band_verdicts": [
                    _verdict_json(v) for v in analysis.band_verdicts
                ],
                "reequalized_bands": [b + 1 for b in analysis.reequalized_bands],
            }
        )

    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    written.append(summary_path)
    return written
