"""Command-line surface.

Subcommands: synth, synth-campaign, analyze, compare, normalize, bands.
Exit codes: 0 success, 1 domain error, 2 usage error. Every run prints a
provenance block (configuration actually in effect) before doing work.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .campaign import (
    ComparisonReport,
    analyze_report,
    compare_to_stimulus,
    export,
    ingest,
)
from .errors import BandscopeError, InvalidSpecError, ManifestError
from .filterbank import (
    BAND_PRESETS,
    DEFAULT_TAPS,
    FAST_TAPS,
    BandMapping,
    FilterBank,
    design_bank,
    load_mapping,
)
from .signal import LevelDbfs, mean_level_dbfs, normalize_to_level
from .stimuli import StimulusSpec, gen_stimulus
from .synthfield import (
    DirectivityModel,
    DistanceProfile,
    SynthCampaignSpec,
    synth_campaign,
)
from .wavio import load_wav, save_wav

_OUT_ENV = "BANDSCOPE_OUT"


def _add_mapping_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--preset", choices=sorted(BAND_PRESETS), default="ids10",
                   help="built-in band mapping (default: ids10)")
    g.add_argument("--mapping", metavar="FILE",
                   help="plain-text mapping file, one edge in Hz per line")
    p.add_argument("--length", type=int, default=DEFAULT_TAPS,
                   help=f"FIR tap count, odd (default {DEFAULT_TAPS})")
    p.add_argument("--fast", action="store_true",
                   help=f"short filters ({FAST_TAPS} taps) for quick runs")


def _add_out_arg(p: argparse.ArgumentParser, required: bool = False) -> None:
    default = os.environ.get(_OUT_ENV)
    p.add_argument("--out", default=default, required=required and default is None,
                   help=f"output directory (or ${_OUT_ENV})")


def _resolve_mapping(args) -> BandMapping:
    if args.mapping:
        return load_mapping(args.mapping)
    return BandMapping(BAND_PRESETS[args.preset])


def _resolve_length(args) -> int:
    return FAST_TAPS if args.fast else args.length


def _build_bank(args, sample_rate: int) -> FilterBank:
    return design_bank(_resolve_mapping(args), sample_rate, _resolve_length(args))


def _provenance(lines: list[str]) -> None:
    print(f"# bandscope {__version__}")
    for line in lines:
        print(f"# {line}")


def _bank_provenance(args, extra: list[str] | None = None) -> list[str]:
    mapping = _resolve_mapping(args)
    name = args.mapping if args.mapping else args.preset
    lines = [
        f"mapping: {name} [{', '.join(f'{e:g}' for e in mapping.edges)}] "
        f"({mapping.n_bands} bands)",
        f"filter length: {_resolve_length(args)} taps",
    ]
    return lines + (extra or [])


def _cmd_bands(args) -> int:
    mapping = _resolve_mapping(args)
    for edge in mapping.edges:
        print(f"{edge:g}")
    return 0


def _cmd_synth(args) -> int:
    spec = StimulusSpec(
        kind=args.kind,
        duration=args.dur,
        sample_rate=args.rate,
        target_level=args.level,
        frequency=args.freq,
        seed=args.seed,
    )
    _provenance([
        f"synth: kind={spec.kind} dur={spec.duration:g}s rate={spec.sample_rate}Hz "
        f"level={spec.target_level:g}dBFS freq={spec.frequency} seed={spec.seed}",
        f"encoding: {args.bits}",
    ])
    signal = gen_stimulus(spec)
    out = Path(args.out_file)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_wav(signal, out, encoding=args.bits)
    sidecar = out.with_suffix(out.suffix + ".json")
    sidecar.write_text(json.dumps(spec.to_json(), sort_keys=True, indent=2) + "\n")
    print(f"wrote {out} ({len(signal)} samples, {mean_level_dbfs(signal)})")
    print(f"wrote {sidecar}")
    return 0


def _load_campaign_spec(path: Path) -> dict:
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise InvalidSpecError(f"campaign spec not found: {path}")
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"{path}: not valid JSON ({exc})")
    if not isinstance(doc, dict):
        raise InvalidSpecError(f"{path}: expected a JSON object")
    return doc


def _cmd_synth_campaign(args) -> int:
    spec_path = Path(args.spec)
    doc = _load_campaign_spec(spec_path)
    try:
        stim_doc = doc["stimulus"]
        distances = [float(d) for d in doc["distances_cm"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpecError(f"{spec_path}: {exc}")

    if "file" in stim_doc:
        stim_file = spec_path.parent / stim_doc["file"]
        stimulus = load_wav(stim_file)
        stim_json = {"file": str(stim_doc["file"])}
    else:
        sspec = StimulusSpec(
            kind=stim_doc.get("kind", "pink"),
            duration=float(stim_doc.get("duration_s", 2.0)),
            sample_rate=int(stim_doc.get("sample_rate_hz", 44100)),
            target_level=float(stim_doc.get("target_level_dbfs", -20.0)),
            frequency=stim_doc.get("frequency_hz"),
            seed=stim_doc.get("seed"),
        )
        stimulus = gen_stimulus(sspec)
        stim_json = sspec.to_json()

    profile = None
    raw_profile = doc.get("profile")
    if raw_profile:
        profile = DistanceProfile(
            bands={
                int(band) - 1: tuple((float(d), float(g)) for d, g in pts)
                for band, pts in raw_profile.items()
            }
        )

    cspec = SynthCampaignSpec(
        stimulus=stimulus,
        distances_cm=tuple(distances),
        model=DirectivityModel(float(doc.get("directivity_m", 1.0))),
        theta_rad=float(doc.get("theta_rad", 0.0)),
        reference_distance_cm=float(doc.get("reference_distance_cm", 100.0)),
        profile=profile,
        microphone=str(doc.get("microphone", "synthetic")),
        stimulus_label=str(doc.get("stimulus_label", "stimulus")),
    )

    bank = None
    extra = [f"campaign spec: {spec_path}"]
    if profile is not None:
        bank = _build_bank(args, stimulus.sample_rate)
        extra = _bank_provenance(args, extra)
    _provenance(extra)

    series, truth = synth_campaign(cspec, bank)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for entry, signal in zip(series.entries, series.signals):
        name = f"{series.label}_{entry.distance_cm:g}cm.wav"
        save_wav(signal, out / name, encoding="float32")
        entries.append(
            {
                "path": name,
                "distance_cm": entry.distance_cm,
                "microphone": entry.microphone,
                "directivity": entry.directivity,
                "stimulus": entry.stimulus,
            }
        )
    (out / "manifest.json").write_text(
        json.dumps({"entries": entries}, sort_keys=True, indent=2) + "\n"
    )
    save_wav(stimulus, out / "stimulus.wav", encoding="float32")
    (out / "ground_truth.csv").write_text(truth.to_csv())
    (out / "campaign_spec.json").write_text(
        json.dumps({**doc, "stimulus": stim_json}, sort_keys=True, indent=2) + "\n"
    )
    print(f"wrote {len(entries)} recordings, manifest.json, ground_truth.csv to {out}")
    return 0


def _cmd_analyze(args) -> int:
    report = ingest(args.manifest)
    rates = {s.sample_rate for s in report.series}
    if not report.series:
        for err in report.errors:
            print(f"error: {err.key}: {err.message}", file=sys.stderr)
        raise ManifestError(f"{args.manifest}: no loadable series")
    if len(rates) > 1:
        raise ManifestError(f"manifest mixes sample rates across series: {sorted(rates)}")
    bank = _build_bank(args, rates.pop())
    _provenance(
        _bank_provenance(
            args,
            [
                f"reference: {args.reference:g} cm",
                f"threshold: {args.threshold:g} dB",
                f"manifest: {args.manifest}",
            ],
        )
    )
    result = analyze_report(report, bank, args.reference, args.threshold)
    files = export(result, args.out)
    for err in result.errors:
        print(f"warning: series {err.key}: {err.message}", file=sys.stderr)
    print(f"analyzed {len(result.analyses)} series, wrote {len(files)} files to {args.out}")
    if not result.analyses:
        return 1
    return 0


def _cmd_compare(args) -> int:
    stimulus = load_wav(args.stimulus)
    report = ingest(args.manifest)
    if not report.series:
        raise ManifestError(f"{args.manifest}: no loadable series")
    bank = _build_bank(args, stimulus.sample_rate)
    _provenance(
        _bank_provenance(args, [f"comparison distance: {args.distance:g} cm"])
    )
    rows = tuple(
        compare_to_stimulus(stimulus, series, bank, args.distance)
        for series in report.series
    )
    table = ComparisonReport(
        stimulus_label=args.label, rows=rows, n_bands=bank.n_bands
    )
    print(table.to_text(), end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "comparison.csv").write_text(table.to_csv())
        print(f"wrote {out / 'comparison.csv'}")
    return 0


def _cmd_normalize(args) -> int:
    signal = load_wav(args.in_file)
    _provenance([f"normalize: {args.in_file} -> {args.out_file} at {args.level:g} dB FS"])
    result = normalize_to_level(signal, LevelDbfs(args.level))
    save_wav(result, args.out_file, encoding=args.bits)
    print(f"wrote {args.out_file} ({mean_level_dbfs(result)})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandscope",
        description="Subband spectral-balance and level-vs-distance analysis.",
    )
    parser.add_argument("--version", action="version", version=f"bandscope {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bands", help="print the edges of a band mapping")
    _add_mapping_args(p)
    p.set_defaults(func=_cmd_bands)

    p = sub.add_parser("synth", help="synthesize a stimulus WAV")
    p.add_argument("--kind", choices=["sine", "pink"], required=True)
    p.add_argument("--freq", type=float, help="sine frequency in Hz")
    p.add_argument("--level", type=float, default=-20.0, help="target mean level dB FS")
    p.add_argument("--dur", type=float, required=True, help="duration in seconds")
    p.add_argument("--rate", type=int, default=44100, help="sample rate in Hz")
    p.add_argument("--seed", type=int, help="random seed (pink)")
    p.add_argument("--bits", choices=["float32", "pcm16", "pcm24"], default="float32")
    p.add_argument("--out-file", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("synth-campaign", help="generate a synthetic campaign")
    p.add_argument("--spec", required=True, metavar="FILE", help="campaign spec JSON")
    _add_mapping_args(p)
    _add_out_arg(p, required=True)
    p.set_defaults(func=_cmd_synth_campaign)

    p = sub.add_parser("analyze", help="analyze a measurement manifest")
    p.add_argument("--manifest", required=True, metavar="FILE")
    _add_mapping_args(p)
    p.add_argument("--reference", type=float, default=100.0, metavar="CM")
    p.add_argument("--threshold", type=float, default=1.0, metavar="DB")
    _add_out_arg(p, required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("compare", help="stimulus-vs-recordings balance table")
    p.add_argument("--stimulus", required=True, metavar="FILE")
    p.add_argument("--manifest", required=True, metavar="FILE")
    p.add_argument("--distance", type=float, default=100.0, metavar="CM")
    p.add_argument("--label", default="stimulus", help="stimulus label in the table")
    _add_mapping_args(p)
    _add_out_arg(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("normalize", help="rescale a WAV to a target mean level")
    p.add_argument("--in-file", required=True, metavar="FILE")
    p.add_argument("--level", type=float, required=True, help="target mean level dB FS")
    p.add_argument("--bits", choices=["float32", "pcm16", "pcm24"], default="float32")
    p.add_argument("--out-file", required=True, metavar="FILE")
    p.set_defaults(func=_cmd_normalize)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BandscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
