"""Escape-time rasterization of the basin of 0 and PGM/PPM output."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import FamilyMember, IterConfig, Status, limit_verdicts

NON_MEMBER_SHADE = 0
INDETERMINATE_SHADE = 128  # never produced by a Member pixel, see member_shade
MAX_PIXELS = 10**8
THREADS_ENV = "BASINKERNEL_THREADS"


@dataclass(frozen=True)
class GridSpec:
    center: complex = 0j
    half_width: float = 2.0
    width_px: int = 256
    height_px: int = 256

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.width_px < 1 or self.height_px < 1:
            raise ValueError("pixel dimensions must be positive")
        if self.width_px * self.height_px > MAX_PIXELS:
            raise ValueError(f"grid exceeds {MAX_PIXELS} pixels")

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.width_px

    @property
    def half_height(self) -> float:
        return self.half_width * self.height_px / self.width_px


def pixel_to_complex(grid: GridSpec, row: int, col: int) -> complex:
    """Center of pixel (row, col); row 0 is the top edge."""
    step = grid.step
    x = grid.center.real - grid.half_width + (col + 0.5) * step
    y = grid.center.imag + grid.half_height - (row + 0.5) * step
    return complex(x, y)


def row_points(grid: GridSpec, row: int) -> np.ndarray:
    # same float operations as pixel_to_complex, elementwise
    step = grid.step
    cols = np.arange(grid.width_px, dtype=float)
    x = grid.center.real - grid.half_width + (cols + 0.5) * step
    y = np.full(grid.width_px, grid.center.imag + grid.half_height - (row + 0.5) * step)
    return x + 1j * y


def grid_points(grid: GridSpec) -> np.ndarray:
    """All pixel centers as a (height, width) complex array."""
    return np.stack([row_points(grid, r) for r in range(grid.height_px)])


def member_shade(iterations: np.ndarray) -> np.ndarray:
    # 255 - 3k for k <= 63 stays in [66, 255] and never hits 128
    k = np.minimum(iterations, 63)
    return (255 - 3 * k).astype(np.uint8)


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "0") or 0)
    if threads < 0:
        raise ValueError("thread count must be >= 0")
    return threads or (os.cpu_count() or 1)


def map_rows(fn, n_rows: int, threads: int | None = None, block: int = 16) -> list:
    """Apply ``fn(start, stop)`` over row blocks; results in row order."""
    blocks = [(s, min(s + block, n_rows)) for s in range(0, n_rows, block)]
    workers = thread_count(threads)
    if workers == 1 or len(blocks) == 1:
        return [fn(s, e) for s, e in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda b: fn(*b), blocks))


def render_basin(fm: FamilyMember, grid: GridSpec, cfg: IterConfig | None = None,
                 threads: int | None = None) -> np.ndarray:
    """Gray-level image (height, width) of the basin of 0.

    Member pixels are shaded by iteration count, NonMember pixels are
    black and Indeterminate pixels get the sentinel gray 128.  Each pixel
    depends only on its own orbit, so the output is identical for any
    thread count.
    """
    cfg = cfg or IterConfig()

    def work(r0, r1):
        pts = np.concatenate([row_points(grid, r) for r in range(r0, r1)])
        status, iters = limit_verdicts(fm, pts, cfg)
        out = np.full(pts.shape, INDETERMINATE_SHADE, dtype=np.uint8)
        out[status == Status.NON_MEMBER] = NON_MEMBER_SHADE
        mem = status == Status.MEMBER
        out[mem] = member_shade(iters[mem])
        return out.reshape(r1 - r0, grid.width_px)

    return np.vstack(map_rows(work, grid.height_px, threads))


# -- image files ---------------------------------------------------------------


def colormap() -> np.ndarray:
    """Fixed 256-entry RGB table for PPM output.

    Index 0 is black (NonMember), 128 is mid gray (Indeterminate), and the
    Member shades 66..255 run from deep blue through cyan to pale yellow.
    Remaining entries interpolate the same ramp and are never produced by
    render_basin.
    """
    t = np.arange(256) / 255.0
    r = np.clip(1.6 * t - 0.6, 0, 1)
    g = np.clip(1.4 * t - 0.2, 0, 1)
    b = np.clip(0.4 + 0.6 * np.sin(np.pi * t), 0, 1)
    cmap = np.stack([r, g, b], axis=1)
    cmap = np.round(cmap * 255).astype(np.uint8)
    cmap[0] = (0, 0, 0)
    cmap[INDETERMINATE_SHADE] = (128, 128, 128)
    return cmap


def pgm_bytes(img: np.ndarray) -> bytes:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def ppm_bytes(img: np.ndarray) -> bytes:
    rgb = colormap()[np.asarray(img, dtype=np.uint8)]
    h, w = img.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(rgb).tobytes()


def read_pnm(data: bytes) -> np.ndarray:
    """Parse a binary P5/P6 image written by this module."""
    magic, dims, maxval, body = data.split(b"\n", 3)
    w, h = map(int, dims.split())
    if int(maxval) != 255:
        raise ValueError("only maxval 255 is supported")
    if magic == b"P5":
        return np.frombuffer(body, dtype=np.uint8).reshape(h, w)
    if magic == b"P6":
        return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3)
    raise ValueError(f"unsupported magic {magic!r}")


def write_image(path: str, img: np.ndarray, fmt: str | None = None) -> None:
    """Write PGM or PPM, chosen by ``fmt`` or the file extension."""
    fmt = (fmt or os.path.splitext(path)[1].lstrip(".") or "pgm").lower()
    if fmt == "pgm":
        data = pgm_bytes(img)
    elif fmt == "ppm":
        data = ppm_bytes(img)
    else:
        raise ValueError(f"unknown image format {fmt!r}")
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
