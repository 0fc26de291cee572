"""Netpbm images, VOL1 float volumes and benchmark CSV files."""
from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .core import ImagePlane, MultiChannelImage, Volume
from .validation import check_volume

__all__ = [
    "FormatError",
    "BenchRecord",
    "CSV_HEADER",
    "read_image",
    "write_image",
    "parse_netpbm",
    "encode_netpbm",
    "read_volume",
    "write_volume",
    "parse_volume",
    "encode_volume",
    "write_csv",
    "quantize",
    "atomic_write",
]

CSV_HEADER = ("filter", "width", "height", "radius", "iterations", "seconds")
_MAGICS = {b"P2": (1, False), b"P3": (3, False), b"P5": (1, True), b"P6": (3, True)}
_WS = b" \t\r\n\v\f"


class FormatError(ValueError):
    """Malformed image or volume data; ``offset`` is the byte where parsing failed."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


def atomic_write(path, data: bytes):
    """Write ``data`` to a temporary file next to ``path`` and rename it into place."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _Tokens:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def _skip(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos:self.pos + 1]
            if c in _WS and c:
                self.pos += 1
            elif c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = n if end < 0 else end + 1
            else:
                break

    def next_int(self, what):
        self._skip()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            raise FormatError(f"expected {what}", start)
        return int(self.data[start:self.pos])


def parse_netpbm(data: bytes, return_maxval=False):
    """Decode a P2/P3/P5/P6 file held in memory.

    Returns a :class:`MultiChannelImage`, or ``(image, maxval)`` when
    ``return_maxval`` is set.
    """
    magic = data[:2]
    if magic not in _MAGICS:
        raise FormatError(f"unknown magic number {magic!r}", 0)
    channels, binary = _MAGICS[magic]
    tok = _Tokens(data)
    tok.pos = 2
    width = tok.next_int("width")
    height = tok.next_int("height")
    maxval_at = tok.pos
    maxval = tok.next_int("maxval")
    if width < 1 or height < 1:
        raise FormatError(f"invalid dimensions {width}x{height}", maxval_at)
    if not 1 <= maxval <= 65535:
        raise FormatError(f"maxval {maxval} outside 1..65535", maxval_at)
    count = width * height * channels
    if binary:
        if tok.pos >= len(data) or data[tok.pos:tok.pos + 1] not in _WS:
            raise FormatError("missing whitespace after maxval", tok.pos)
        start = tok.pos + 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        have = len(data) - start
        if have < need:
            raise FormatError(f"truncated payload: expected {need} bytes, got {have}", start + have)
        values = np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.float64)
    else:
        values = np.empty(count)
        for i in range(count):
            at = tok.pos
            try:
                values[i] = tok.next_int("sample")
            except FormatError:
                raise FormatError(f"truncated payload: expected {count} samples, got {i}", at) from None
    if values.size and values.max() > maxval:
        raise FormatError(f"sample exceeds maxval {maxval}")
    arr = values.reshape(height, width, channels)
    img = MultiChannelImage([ImagePlane.from_array(arr[..., c]) for c in range(channels)])
    return (img, maxval) if return_maxval else img


def read_image(path) -> MultiChannelImage:
    with open(path, "rb") as fh:
        return parse_netpbm(fh.read())


def quantize(arr, maxval):
    """Round half up and clamp to ``[0, maxval]``."""
    return np.clip(np.floor(np.asarray(arr, dtype=np.float64) + 0.5), 0, maxval)


def _channels_of(img):
    if isinstance(img, MultiChannelImage):
        return [c.to_array() for c in img.channels]
    if isinstance(img, ImagePlane):
        return [img.to_array()]
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        return [arr]
    return [arr[..., c] for c in range(arr.shape[2])]


def encode_netpbm(img, bit_depth=8, binary=True) -> bytes:
    """Encode 1 channel as PGM or 3 channels as PPM; no comments are emitted."""
    if bit_depth not in (8, 16):
        raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")
    chans = _channels_of(img)
    if len(chans) not in (1, 3):
        raise ValueError(f"netpbm supports 1 or 3 channels, got {len(chans)}")
    maxval = 255 if bit_depth == 8 else 65535
    arr = quantize(np.stack(chans, axis=-1), maxval)
    height, width = arr.shape[:2]
    magic = {(1, True): "P5", (3, True): "P6", (1, False): "P2", (3, False): "P3"}[(len(chans), binary)]
    header = f"{magic}\n{width} {height}\n{maxval}\n".encode("ascii")
    if binary:
        dtype = ">u2" if bit_depth == 16 else "u1"
        return header + arr.astype(dtype).tobytes()
    rows = (" ".join(str(int(v)) for v in row) for row in arr.reshape(height, -1))
    return header + ("\n".join(rows) + "\n").encode("ascii")


def write_image(img, path, bit_depth=8, binary=True):
    atomic_write(path, encode_netpbm(img, bit_depth, binary))


_VOL_MAGIC = b"VOL1\n"


def parse_volume(data: bytes) -> Volume:
    if not data.startswith(_VOL_MAGIC):
        raise FormatError("bad magic, expected 'VOL1'", 0)
    end = data.find(b"\n", len(_VOL_MAGIC))
    if end < 0:
        raise FormatError("unterminated size line", len(_VOL_MAGIC))
    fields = data[len(_VOL_MAGIC):end].split(b" ")
    try:
        width, height, depth = (int(f) for f in fields)
    except ValueError:
        raise FormatError("size line must be '<w> <h> <d>'", len(_VOL_MAGIC)) from None
    if min(width, height, depth) < 1:
        raise FormatError(f"invalid extents {width}x{height}x{depth}", len(_VOL_MAGIC))
    start = end + 1
    need = 4 * width * height * depth
    have = len(data) - start
    if have != need:
        raise FormatError(f"payload size mismatch: expected {need} bytes, got {have}", start)
    values = np.frombuffer(data, dtype="<f4", offset=start).astype(np.float64)
    if not np.all(np.isfinite(values)):
        raise FormatError("payload contains non-finite samples", start)
    return Volume.from_array(values.reshape(depth, height, width))


def encode_volume(vol) -> bytes:
    arr = check_volume(vol)
    depth, height, width = arr.shape
    header = _VOL_MAGIC + f"{width} {height} {depth}\n".encode("ascii")
    return header + arr.astype("<f4").tobytes()


def read_volume(path) -> Volume:
    with open(path, "rb") as fh:
        return parse_volume(fh.read())


def write_volume(vol, path):
    atomic_write(path, encode_volume(vol))


@dataclass(frozen=True)
class BenchRecord:
    filter: str
    width: int
    height: int
    radius: int
    iterations: int
    seconds: float

    def row(self):
        return [self.filter, self.width, self.height, self.radius, self.iterations, f"{self.seconds:.6e}"]


def write_csv(rows, path):
    """Write benchmark records with a fixed header; seconds as ``%.6e``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in rows:
        writer.writerow(rec.row())
    atomic_write(path, buf.getvalue().encode("ascii"))
