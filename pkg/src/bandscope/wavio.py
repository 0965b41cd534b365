"""Minimal RIFF/WAVE reader and writer.

Supports the three encodings used by the measurement chain: PCM16, PCM24
and 32-bit float, little-endian, mono or multichannel (one channel is
selected on load). The fmt-chunk sample rate is authoritative. Everything
else (LIST, fact, bext, ...) is skipped on read.

Full-scale convention: 16-bit divides by 32768, 24-bit by 8388608, so a
positive-full-scale PCM16 sample reads 32767/32768.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .errors import EmptySignalError, UnsupportedEncodingError, WavFormatError
from .signal import Signal

__all__ = ["load_wav", "save_wav"]

_FMT_PCM = 0x0001
_FMT_FLOAT = 0x0003
_FMT_EXTENSIBLE = 0xFFFE

_PCM16_SCALE = 32768.0
_PCM24_SCALE = 8388608.0


def load_wav(path: str | os.PathLike, channel: int = 0) -> Signal:
    """Read one channel of a WAV file, scaled to nominal [-1, 1].

    ``channel`` selects from multichannel files (default: first).
    Raises :class:`WavFormatError` for a broken container,
    :class:`UnsupportedEncodingError` for encodings other than
    PCM16/PCM24/float32, :class:`EmptySignalError` for an empty data chunk.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + size]
        if len(body) < size:
            raise WavFormatError(f"{path}: truncated '{cid.decode(errors='replace')}' chunk")
        if cid == b"fmt ":
            fmt = _parse_fmt(body, path)
        elif cid == b"data":
            payload = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise WavFormatError(f"{path}: missing fmt chunk")
    if payload is None:
        raise WavFormatError(f"{path}: missing data chunk")
    audio_format, n_channels, sample_rate, bits = fmt
    if n_channels < 1:
        raise WavFormatError(f"{path}: fmt declares {n_channels} channels")
    if not 0 <= channel < n_channels:
        raise WavFormatError(
            f"{path}: channel {channel} requested but file has {n_channels}"
        )

    frames = _decode(payload, audio_format, bits, path)
    if frames.size == 0:
        raise EmptySignalError(f"{path}: data chunk holds no samples")
    n_frames = frames.size // n_channels
    frames = frames[: n_frames * n_channels].reshape(n_frames, n_channels)
    return Signal(frames[:, channel], sample_rate)


def save_wav(signal: Signal, path: str | os.PathLike, encoding: str = "float32") -> None:
    """Write a mono WAV file in the given encoding (float32, pcm16, pcm24)."""
    x = signal.samples
    if encoding == "float32":
        audio_format, bits = _FMT_FLOAT, 32
        body = x.astype("<f4").tobytes()
    elif encoding == "pcm16":
        audio_format, bits = _FMT_PCM, 16
        q = np.clip(np.round(x * _PCM16_SCALE), -32768, 32767).astype("<i2")
        body = q.tobytes()
    elif encoding == "pcm24":
        audio_format, bits = _FMT_PCM, 24
        q = np.clip(np.round(x * _PCM24_SCALE), -8388608, 8388607).astype("<i4")
        b = q.view(np.uint8).reshape(-1, 4)
        body = b[:, :3].tobytes()  # little-endian: drop the high byte
    else:
        raise UnsupportedEncodingError(f"unknown encoding {encoding!r}")

    block_align = bits // 8
    byte_rate = signal.sample_rate * block_align
    fmt_chunk = struct.pack(
        "<HHIIHH", audio_format, 1, signal.sample_rate, byte_rate, block_align, bits
    )
    chunks = b"".join(
        [
            b"fmt ", struct.pack("<I", len(fmt_chunk)), fmt_chunk,
            b"data", struct.pack("<I", len(body)), body, b"\x00" * (len(body) & 1),
        ]
    )
    with open(path, "wb") as fh:
        fh.write(b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks)


def _parse_fmt(body: bytes, path) -> tuple[int, int, int, int]:
    if len(body) < 16:
        raise WavFormatError(f"{path}: fmt chunk too short ({len(body)} bytes)")
    audio_format, n_channels, sample_rate, _, _, bits = struct.unpack_from("<HHIIHH", body)
    if audio_format == _FMT_EXTENSIBLE:
        # actual format lives in the first two bytes of the SubFormat GUID
        if len(body) < 26:
            raise WavFormatError(f"{path}: extensible fmt chunk too short")
        (audio_format,) = struct.unpack_from("<H", body, 24)
    return audio_format, n_channels, sample_rate, bits


def _decode(payload: bytes, audio_format: int, bits: int, path) -> np.ndarray:
    if audio_format == _FMT_PCM and bits == 16:
        return np.frombuffer(payload[: len(payload) // 2 * 2], dtype="<i2").astype(
            np.float64
        ) / _PCM16_SCALE
    if audio_format == _FMT_PCM and bits == 24:
        raw = np.frombuffer(payload[: len(payload) // 3 * 3], dtype=np.uint8)
        b = raw.reshape(-1, 3).astype(np.int64)
        v = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
        v -= (v >= 1 << 23) * (1 << 24)  # sign extension
        return v.astype(np.float64) / _PCM24_SCALE
    if audio_format == _FMT_FLOAT and bits == 32:
        return np.frombuffer(payload[: len(payload) // 4 * 4], dtype="<f4").astype(
            np.float64
        )
    raise UnsupportedEncodingError(
        f"{path}: unsupported encoding (format tag {audio_format}, {bits}-bit)"
    )
