"""Grayscale raster I/O, resampling, augmentation and synthetic fixtures.

Every downstream stage works on :class:`GrayImage`, an immutable 8-bit
raster stored as a ``(height, width)`` uint8 array.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ImageFormatError

STANDARD_SIZE = 200
MAX_PIXELS = 1 << 28

PathLike = Union[str, Path]

AUGMENT_OPS = ("flip_h", "flip_v", "rot90", "rot180", "rot270")
INVERSE_OP = {
    "flip_h": "flip_h",
    "flip_v": "flip_v",
    "rot90": "rot270",
    "rot180": "rot180",
    "rot270": "rot90",
}

BENIGN = "Benign"
MALIGNANT = "Malignant"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster, row-major ``(height, width)``."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("intensities must lie in [0, 255]")
            px = px.astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))

    @classmethod
    def from_list(cls, width: int, height: int, values) -> "GrayImage":
        arr = np.asarray(values, dtype=np.int64)
        if arr.size != width * height:
            raise ValueError("pixel count does not match width*height")
        return cls(arr.reshape(height, width))


# ---------------------------------------------------------------- decoding


def _luminance(rgb: np.ndarray) -> np.ndarray:
    rgb = rgb.astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8)


def _pgm_tokens(data: bytes, count: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the last token.
    """
    tokens = []
    pos = 2
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ImageFormatError("unsupported format: truncated PGM header")
        tokens.append(data[start:pos])
    if pos >= n and data[:2] == b"P5":
        raise ImageFormatError("unsupported format: truncated PGM header")
    return tokens, pos + 1


def _decode_pgm(data: bytes) -> np.ndarray:
    magic = data[:2]
    try:
        tokens, offset = _pgm_tokens(data, 3)
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        if isinstance(exc, ImageFormatError):
            raise
        raise ImageFormatError("unsupported format: malformed PGM header") from exc
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise ImageFormatError("unsupported format: invalid PGM dimensions or maxval")
    if width * height > MAX_PIXELS:
        raise ImageFormatError(f"dimension overflow: {width}x{height}")
    count = width * height
    if magic == b"P5":
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
        raw = data[offset : offset + count * dtype.itemsize]
        if len(raw) != count * dtype.itemsize:
            raise ImageFormatError("unsupported format: truncated PGM raster")
        values = np.frombuffer(raw, dtype=dtype).astype(np.int64)
    else:
        body = data[offset - 1 :].split()
        if len(body) < count:
            raise ImageFormatError("unsupported format: truncated PGM raster")
        try:
            values = np.array([int(v) for v in body[:count]], dtype=np.int64)
        except ValueError as exc:
            raise ImageFormatError("unsupported format: non-integer PGM sample") from exc
    if values.min() < 0 or values.max() > maxval:
        raise ImageFormatError("unsupported format: sample exceeds maxval")
    if maxval > 255:
        values = values // 257
    return values.reshape(height, width).astype(np.uint8)


def _decode_png(data: bytes) -> np.ndarray:
    from PIL import Image

    Image.MAX_IMAGE_PIXELS = MAX_PIXELS
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.width * im.height > MAX_PIXELS:
                raise ImageFormatError(f"dimension overflow: {im.width}x{im.height}")
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            arr = np.asarray(im)
    except Image.DecompressionBombError as exc:
        raise ImageFormatError(f"dimension overflow: {exc}") from exc
    except (OSError, SyntaxError) as exc:
        raise ImageFormatError(f"unsupported format: {exc}") from exc

    if mode == "1":
        return np.where(arr, 255, 0).astype(np.uint8)
    if mode == "L":
        return arr.astype(np.uint8)
    if mode == "LA":
        return arr[..., 0].astype(np.uint8)
    if mode.startswith("I"):
        # 16-bit grayscale
        return (arr.astype(np.int64) // 257).clip(0, 255).astype(np.uint8)
    if mode in ("RGB", "RGBA"):
        return _luminance(arr[..., :3])
    raise ImageFormatError(f"unsupported format: PNG mode {mode}")


def load_image(path: PathLike) -> GrayImage:
    """Decode a PGM (P2/P5) or PNG file into a :class:`GrayImage`.

    RGB input is reduced with BT.601 weights and rounded; 16-bit samples are
    scaled to 8 bits by integer division by 257.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ImageFormatError(f"unreadable file {path}: {exc.strerror or exc}") from exc
    if data[:2] in (b"P2", b"P5"):
        pixels = _decode_pgm(data)
    elif data[:8] == b"\x89PNG\r\n\x1a\n":
        pixels = _decode_png(data)
    else:
        raise ImageFormatError(f"unsupported format: {path}")
    return GrayImage(pixels)


def save_pgm(img: GrayImage, path: PathLike) -> None:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.pixels.tobytes())


# ---------------------------------------------------------------- geometry


def _source_coords(out_n: int, in_n: int):
    s = (np.arange(out_n, dtype=np.float64) + 0.5) * (in_n / out_n) - 0.5
    s = np.clip(s, 0.0, in_n - 1)
    i0 = np.floor(s).astype(np.intp)
    i1 = np.minimum(i0 + 1, in_n - 1)
    return i0, i1, s - i0


def resize_bilinear(img: GrayImage, out_w: int, out_h: int) -> GrayImage:
    """Bilinear resampling with half-pixel-centred sample positions."""
    if out_w < 1 or out_h < 1:
        raise ValueError(f"target dimensions must be >= 1, got {out_w}x{out_h}")
    if (out_w, out_h) == (img.width, img.height):
        return img
    x0, x1, fx = _source_coords(out_w, img.width)
    y0, y1, fy = _source_coords(out_h, img.height)
    src = img.pixels.astype(np.float64)
    top = src[y0][:, x0] * (1 - fx) + src[y0][:, x1] * fx
    bottom = src[y1][:, x0] * (1 - fx) + src[y1][:, x1] * fx
    out = top * (1 - fy)[:, None] + bottom * fy[:, None]
    return GrayImage(np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8))


def standardize(img: GrayImage, size: int = STANDARD_SIZE) -> GrayImage:
    return resize_bilinear(img, size, size)


def augment(img: GrayImage, op: str) -> GrayImage:
    """Exact pixel permutation; rotations are counter-clockwise."""
    px = img.pixels
    if op == "flip_h":
        out = px[:, ::-1]
    elif op == "flip_v":
        out = px[::-1, :]
    elif op == "rot90":
        out = np.rot90(px, 1)
    elif op == "rot180":
        out = np.rot90(px, 2)
    elif op == "rot270":
        out = np.rot90(px, 3)
    else:
        raise ValueError(f"unknown augmentation {op!r}; expected one of {AUGMENT_OPS}")
    return GrayImage(out.copy())


# ---------------------------------------------------------------- fixtures


def _smooth(field: np.ndarray, sigma: float) -> np.ndarray:
    """Circular Gaussian blur via FFT."""
    h, w = field.shape
    ky = np.fft.fftfreq(h)[:, None]
    kx = np.fft.fftfreq(w)[None, :]
    gain = np.exp(-2.0 * (math.pi * sigma) ** 2 * (kx**2 + ky**2))
    return np.real(np.fft.ifft2(np.fft.fft2(field) * gain))


def generate_fixture(label: str, seed: int, size: int = STANDARD_SIZE) -> GrayImage:
    """Synthetic stand-in for an MRI slice of the given class.

    Benign: one smooth, low-contrast Gaussian blob on a dark background.
    Malignant: a bright, sharp-edged, multi-lobed region with speckle.
    The output is a pure function of ``(label, seed, size)``.
    """
    if label not in (BENIGN, MALIGNANT):
        raise ValueError(f"label must be {BENIGN!r} or {MALIGNANT!r}, got {label!r}")
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0 if label == BENIGN else 1])
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64) / size

    background = 18.0 + 6.0 * rng.random()
    img = background + 2.0 * rng.standard_normal((size, size))

    if label == BENIGN:
        cy, cx = rng.uniform(0.35, 0.65, size=2)
        radius = rng.uniform(0.045, 0.07)
        peak = rng.uniform(40.0, 60.0)
        img += peak * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * radius**2))
    else:
        cy, cx = rng.uniform(0.4, 0.6, size=2)
        region = np.zeros((size, size), dtype=bool)
        for _ in range(int(rng.integers(3, 6))):
            ang = rng.uniform(0, 2 * math.pi)
            dist = rng.uniform(0.06, 0.16)
            ly, lx = cy + dist * math.sin(ang), cx + dist * math.cos(ang)
            r = rng.uniform(0.12, 0.19)
            region |= (yy - ly) ** 2 + (xx - lx) ** 2 < r**2
        # ragged boundary
        rough = _smooth(rng.standard_normal((size, size)), 3.0)
        rough /= np.abs(rough).max()
        region &= rough > -0.35
        # heterogeneous tissue: slowly varying level plus speckle and banding
        tissue = _smooth(rng.standard_normal((size, size)), 8.0)
        tissue = (tissue - tissue.min()) / np.ptp(tissue)
        level = rng.uniform(160.0, 210.0) * (0.3 + 0.7 * tissue)
        speckle = rng.gamma(9.0, 1.0 / 9.0, size=(size, size))
        stripes = np.sin(2 * math.pi * rng.uniform(6.0, 10.0) * (xx + yy * rng.uniform(-1, 1)))
        texture = level * speckle * np.where(stripes > 0.3, 0.5, 1.0)
        img = np.where(region, texture, img)

    return GrayImage(np.clip(np.rint(img), 0, 255).astype(np.uint8))
