import struct

import numpy as np
import pytest

from bandscope import Signal, load_wav, save_wav
from bandscope.errors import (
    EmptySignalError,
    UnsupportedEncodingError,
    WavFormatError,
)

FS = 44100


def _write_raw_wav(path, fmt_tag, channels, rate, bits, payload):
    fmt = struct.pack("<HHIIHH", fmt_tag, channels, rate, rate * channels * bits // 8,
                      channels * bits // 8, bits)
    chunks = (b"fmt " + struct.pack("<I", len(fmt)) + fmt
              + b"data" + struct.pack("<I", len(payload)) + payload)
    path.write_bytes(b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks)


class TestLoad:
    def test_pcm16_positive_full_scale(self, tmp_path):
        p = tmp_path / "fs.wav"
        _write_raw_wav(p, 1, 1, FS, 16, struct.pack("<h", 32767))
        s = load_wav(p)
        assert s.sample_rate == FS
        assert s.samples[0] == pytest.approx(32767 / 32768)

    def test_float32_zeros(self, tmp_path):
        p = tmp_path / "z.wav"
        _write_raw_wav(p, 3, 1, FS, 32, struct.pack("<1000f", *([0.0] * 1000)))
        s = load_wav(p)
        assert len(s) == 1000
        assert np.all(s.samples == 0.0)

    def test_channel_select(self, tmp_path):
        p = tmp_path / "st.wav"
        frames = struct.pack("<4h", 100, -100, 200, -200)  # L,R interleaved
        _write_raw_wav(p, 1, 2, FS, 16, frames)
        left = load_wav(p)
        right = load_wav(p, channel=1)
        np.testing.assert_allclose(left.samples * 32768, [100, 200])
        np.testing.assert_allclose(right.samples * 32768, [-100, -200])

    def test_bad_channel_index(self, tmp_path):
        p = tmp_path / "m.wav"
        _write_raw_wav(p, 1, 1, FS, 16, struct.pack("<h", 1))
        with pytest.raises(WavFormatError):
            load_wav(p, channel=1)

    def test_not_riff(self, tmp_path):
        p = tmp_path / "x.wav"
        p.write_bytes(b"OggS" + b"\x00" * 40)
        with pytest.raises(WavFormatError):
            load_wav(p)

    def test_truncated_chunk(self, tmp_path):
        p = tmp_path / "t.wav"
        _write_raw_wav(p, 1, 1, FS, 16, struct.pack("<4h", 1, 2, 3, 4))
        whole = p.read_bytes()
        p.write_bytes(whole[:-3])
        with pytest.raises(WavFormatError):
            load_wav(p)

    def test_missing_data_chunk(self, tmp_path):
        p = tmp_path / "nd.wav"
        fmt = struct.pack("<HHIIHH", 1, 1, FS, FS * 2, 2, 16)
        chunks = b"fmt " + struct.pack("<I", len(fmt)) + fmt
        p.write_bytes(b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks)
        with pytest.raises(WavFormatError):
            load_wav(p)

    def test_unsupported_pcm8(self, tmp_path):
        p = tmp_path / "u8.wav"
        _write_raw_wav(p, 1, 1, FS, 8, b"\x80\x80")
        with pytest.raises(UnsupportedEncodingError):
            load_wav(p)

    def test_empty_data(self, tmp_path):
        p = tmp_path / "e.wav"
        _write_raw_wav(p, 1, 1, FS, 16, b"")
        with pytest.raises(EmptySignalError):
            load_wav(p)

    def test_extensible_float(self, tmp_path):
        # WAVE_FORMAT_EXTENSIBLE wrapping IEEE float
        p = tmp_path / "ext.wav"
        sub = struct.pack("<H", 3) + b"\x00\x00" + b"\x00\x00\x10\x00\x80\x00\x00\xaa\x00\x38\x9b\x71"
        fmt = struct.pack("<HHIIHHHHI", 0xFFFE, 1, FS, FS * 4, 4, 32, 22, 32, 0) + sub[:16]
        payload = struct.pack("<2f", 0.5, -0.25)
        chunks = (b"fmt " + struct.pack("<I", len(fmt)) + fmt
                  + b"data" + struct.pack("<I", len(payload)) + payload)
        p.write_bytes(b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks)
        s = load_wav(p)
        np.testing.assert_allclose(s.samples, [0.5, -0.25])


class TestRoundTrip:
    @pytest.mark.parametrize("encoding,quantum", [
        ("pcm16", 1 / 32768),
        ("pcm24", 1 / 8388608),
        ("float32", 2 ** -23),
    ])
    def test_within_one_quantization_step(self, tmp_path, encoding, quantum):
        rng = np.random.default_rng(77)
        original = Signal(np.clip(0.7 * rng.standard_normal(5000), -1, 1), 48000)
        p = tmp_path / f"{encoding}.wav"
        save_wav(original, p, encoding=encoding)
        back = load_wav(p)
        assert back.sample_rate == 48000
        assert len(back) == len(original)
        np.testing.assert_allclose(back.samples, original.samples, atol=quantum)

    def test_pcm24_structure(self, tmp_path):
        s = Signal(np.array([0.5, -0.5, 0.0]), FS)
        p = tmp_path / "s24.wav"
        save_wav(s, p, encoding="pcm24")
        raw = p.read_bytes()
        i = raw.index(b"fmt ")
        bits = struct.unpack_from("<H", raw, i + 8 + 14)[0]
        assert bits == 24
        # 3 samples * 3 bytes, word-aligned data chunk
        j = raw.index(b"data")
        assert struct.unpack_from("<I", raw, j + 4)[0] == 9

    def test_unknown_encoding(self, tmp_path):
        s = Signal(np.zeros(4), FS)
        with pytest.raises(UnsupportedEncodingError):
            save_wav(s, tmp_path / "x.wav", encoding="pcm32")
