"""Bit-exact serialization and deterministic synthetic streams.

The canonical ".evs" layout (little-endian): magic "EVS1", u16 version=1,
u16 width, u16 height, u16 reserved=0, u64 count, then count fixed 13-byte
records of u64 t (microseconds), u16 x, u16 y, u8 polarity (0 means -1,
1 means +1). Fixed-width records keep reads a single frombuffer call.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagic,
    BadPolarityAt,
    ParseErrorAt,
    SpecOutOfBounds,
    TruncatedFile,
)
from .events import EventStream, SensorGeometry
from .tokens import TokenStream

_MAGIC = b"EVS1"
_HEADER = struct.Struct("<4sHHHHQ")
_RECORD_DTYPE = np.dtype([("t", "<u8"), ("x", "<u2"), ("y", "<u2"), ("p", "u1")])


def write_evs(stream: EventStream, path) -> None:
    geo = stream.geometry
    rec = np.empty(len(stream), dtype=_RECORD_DTYPE)
    rec["t"] = stream.t
    rec["x"] = stream.x
    rec["y"] = stream.y
    rec["p"] = (stream.p + 1) // 2
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, 1, geo.width, geo.height, 0, len(stream)))
        fh.write(rec.tobytes())


def read_evs(path) -> EventStream:
    """Read and validate an .evs file; lossless inverse of write_evs."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise TruncatedFile(len(head), "truncated header")
        magic, version, width, height, _reserved, count = _HEADER.unpack(head)
        if magic != _MAGIC:
            raise BadMagic(f"magic {magic!r}")
        if version != 1:
            raise BadMagic(f"unsupported version {version}")
        body = fh.read()
    expected = count * _RECORD_DTYPE.itemsize
    if len(body) != expected:
        raise TruncatedFile(
            _HEADER.size + min(len(body), expected),
            f"expected {count} records ({expected} bytes), found {len(body)} bytes",
        )
    rec = np.frombuffer(body, dtype=_RECORD_DTYPE)
    pol = rec["p"]
    bad = pol > 1
    if bad.any():
        raise BadPolarityAt(int(np.argmax(bad)))
    return EventStream(
        SensorGeometry(width, height),
        rec["x"].astype(np.int32),
        rec["y"].astype(np.int32),
        rec["t"].astype(np.int64),
        (pol.astype(np.int8) * 2 - 1),
    )


def read_csv(path, geometry: SensorGeometry) -> EventStream:
    """CSV dialect: mandatory header "t,x,y,p", decimal integers, p in
    {-1, 1}. Line numbers in errors are 1-based file lines."""
    xs, ys, ts, ps = [], [], [], []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if header.strip() != "t,x,y,p":
            raise ParseErrorAt(1, f"expected header 't,x,y,p', got {header.strip()!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ParseErrorAt(lineno, f"expected 4 fields, got {len(parts)}")
            try:
                t, x, y, p = (int(v) for v in parts)
            except ValueError:
                raise ParseErrorAt(lineno, f"non-integer field in {line!r}") from None
            if p not in (-1, 1):
                raise ParseErrorAt(lineno, f"polarity must be -1 or 1, got {p}")
            ts.append(t)
            xs.append(x)
            ys.append(y)
            ps.append(p)
    return EventStream(
        geometry,
        np.asarray(xs, np.int64), np.asarray(ys, np.int64),
        np.asarray(ts, np.int64), np.asarray(ps, np.int64),
    )


def write_csv(stream: EventStream, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("t,x,y,p\n")
        for i in range(len(stream)):
            fh.write(f"{stream.t[i]},{stream.x[i]},{stream.y[i]},{stream.p[i]}\n")


def write_tokens_text(tokens: TokenStream, path, with_events: bool = False,
                      with_indices: bool = False) -> None:
    """Human-diffable token listing: one CSV row per token with patch_x,
    patch_y, t_spike_us, n_events. Optional trailing columns carry the
    member events (t:x:y:p, space-separated) and/or member input indices."""
    cols = "patch_x,patch_y,t_spike_us,n_events"
    if with_events:
        cols += ",events"
    if with_indices:
        cols += ",indices"
    src = tokens.source
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(cols + "\n")
        counts = tokens.counts
        for i in range(len(tokens)):
            row = (f"{tokens.patch_x[i]},{tokens.patch_y[i]},"
                   f"{tokens.t_spike[i]},{counts[i]}")
            members = tokens.members_of(i)
            if with_events:
                row += "," + " ".join(
                    f"{src.t[j]}:{src.x[j]}:{src.y[j]}:{src.p[j]}" for j in members)
            if with_indices:
                row += "," + " ".join(str(int(j)) for j in members)
            fh.write(row + "\n")


@dataclass(frozen=True)
class MovingBarSpec:
    """A vertical bar sweeping right at constant speed: +1 when its leading
    edge enters a pixel, -1 when its trailing edge leaves it, plus optional
    seeded Poisson background noise."""

    bar_width: int = 2
    bar_height: int = 16
    velocity_px_s: float = 1000.0
    start_col: int = 0
    span_cols: int = 16
    noise_rate_hz: float = 0.0
    seed: int = 0


def generate_moving_bar(spec: MovingBarSpec, geometry: SensorGeometry) -> EventStream:
    if spec.velocity_px_s <= 0:
        raise SpecOutOfBounds("velocity must be > 0")
    if spec.bar_width < 1 or spec.bar_height < 1 or spec.span_cols < 1:
        raise SpecOutOfBounds("bar dimensions and span must be >= 1")
    if spec.bar_height > geometry.height:
        raise SpecOutOfBounds("bar taller than the sensor")
    if spec.start_col < 0 or spec.start_col + spec.span_cols > geometry.width:
        raise SpecOutOfBounds("traversal leaves the sensor")
    row0 = (geometry.height - spec.bar_height) // 2
    cols = np.arange(spec.span_cols, dtype=np.int64)
    us_per_col = 1e6 / spec.velocity_px_s
    t_on = np.rint(cols * us_per_col).astype(np.int64)
    t_off = np.rint((cols + spec.bar_width) * us_per_col).astype(np.int64)
    H = spec.bar_height
    rows = np.arange(row0, row0 + H, dtype=np.int64)
    x_edge = np.repeat(spec.start_col + cols, H)
    y_edge = np.tile(rows, spec.span_cols)
    x = np.concatenate((x_edge, x_edge))
    y = np.concatenate((y_edge, y_edge))
    t = np.concatenate((np.repeat(t_on, H), np.repeat(t_off, H)))
    p = np.concatenate((np.ones(H * spec.span_cols, np.int64),
                        -np.ones(H * spec.span_cols, np.int64)))
    if spec.noise_rate_hz > 0:
        rng = np.random.default_rng(spec.seed)
        duration = int(t_off[-1]) + 1
        n_noise = int(rng.poisson(spec.noise_rate_hz * duration / 1e6))
        x = np.concatenate((x, rng.integers(0, geometry.width, n_noise)))
        y = np.concatenate((y, rng.integers(0, geometry.height, n_noise)))
        t = np.concatenate((t, rng.integers(0, duration, n_noise)))
        p = np.concatenate((p, rng.integers(0, 2, n_noise) * 2 - 1))
    order = np.argsort(t, kind="stable")
    return EventStream(geometry, x[order], y[order], t[order], p[order])


@dataclass(frozen=True)
class PoissonFieldSpec:
    """Homogeneous-per-cell Poisson activity concentrated in a subset of
    patch-sized cells, with cell rates drawn from an exponential law.
    Stands in for automotive-style recordings when no dataset is at hand."""

    cell_size: int = 16
    active_cells: int = 100
    total_rate_hz: float = 720_000.0
    duration_us: int = 1_000_000
    seed: int = 0


def generate_poisson_field(spec: PoissonFieldSpec, geometry: SensorGeometry) -> EventStream:
    if spec.cell_size < 1 or spec.active_cells < 1:
        raise SpecOutOfBounds("cell size and active cell count must be >= 1")
    if spec.total_rate_hz <= 0 or spec.duration_us < 1:
        raise SpecOutOfBounds("rate and duration must be positive")
    gw = -(-geometry.width // spec.cell_size)
    gh = -(-geometry.height // spec.cell_size)
    ncells = gw * gh
    if spec.active_cells > ncells:
        raise SpecOutOfBounds(f"{spec.active_cells} active cells > {ncells} grid cells")
    rng = np.random.default_rng(spec.seed)
    cells = rng.choice(ncells, size=spec.active_cells, replace=False)
    weights = rng.exponential(1.0, size=spec.active_cells)
    rates = weights / weights.sum() * spec.total_rate_hz
    dur_s = spec.duration_us / 1e6
    xs, ys, ts, ps = [], [], [], []
    for cell, rate in zip(cells, rates):
        n = int(rng.poisson(rate * dur_s))
        if n == 0:
            continue
        cx, cy = int(cell % gw), int(cell // gw)
        x0 = cx * spec.cell_size
        y0 = cy * spec.cell_size
        w = min(spec.cell_size, geometry.width - x0)
        h = min(spec.cell_size, geometry.height - y0)
        xs.append(x0 + rng.integers(0, w, n))
        ys.append(y0 + rng.integers(0, h, n))
        ts.append(rng.integers(0, spec.duration_us, n))
        ps.append(rng.integers(0, 2, n) * 2 - 1)
    if not xs:
        return EventStream(geometry, *(np.empty(0, np.int64) for _ in range(4)))
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    t = np.concatenate(ts)
    p = np.concatenate(ps)
    order = np.argsort(t, kind="stable")
    return EventStream(geometry, x[order], y[order], t[order], p[order])
