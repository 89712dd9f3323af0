"""Synchronous baseline tokenizers: voxels and dense frame patches.

Both bin time by absolute floor(t / duration) and stamp tokens with the
window end, the moment a fixed-interval representation is complete. Voxels
drop bins with fewer than min_events events; frame patches emit one token
per grid cell per window, empty or not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig
from .events import EventStream, grid_shape
from .tokens import TokenStream


@dataclass(frozen=True)
class VoxelConfig:
    patch_size: int = 16
    duration_us: int = 50_000
    min_events: int = 1

    def validate(self) -> None:
        if self.patch_size < 1:
            raise InvalidConfig("patch_size", "must be >= 1")
        if self.duration_us < 1:
            raise InvalidConfig("duration_us", "must be >= 1")
        if self.min_events < 1:
            raise InvalidConfig("min_events", "must be >= 1")


@dataclass(frozen=True)
class FrameConfig:
    patch_size: int = 16
    duration_us: int = 50_000

    def validate(self) -> None:
        if self.patch_size < 1:
            raise InvalidConfig("patch_size", "must be >= 1")
        if self.duration_us < 1:
            raise InvalidConfig("duration_us", "must be >= 1")


def _bin_sort(stream: EventStream, patch_size: int, duration_us: int):
    """Group events by (time bin, patch row, patch col), stable in time."""
    gw, gh = grid_shape(stream.geometry, patch_size)
    px = stream.x // patch_size
    py = stream.y // patch_size
    tbin = stream.t // duration_us
    key = (tbin * gh + py) * gw + px
    order = np.argsort(key, kind="stable")
    return gw, gh, tbin, key, order


def voxelize(stream: EventStream, cfg: VoxelConfig) -> TokenStream:
    """Fixed-duration spatio-temporal bins; bins below min_events are dropped."""
    cfg.validate()
    P, D = cfg.patch_size, cfg.duration_us
    if len(stream) == 0:
        return TokenStream.empty(stream.geometry, P, cfg, stream)
    gw, gh, tbin, key, order = _bin_sort(stream, P, D)
    key_sorted = key[order]
    # group boundaries in the sorted key array
    edge = np.flatnonzero(np.diff(key_sorted)) + 1
    starts = np.concatenate(([0], edge))
    ends = np.concatenate((edge, [len(stream)]))
    lengths = ends - starts
    keep = lengths >= cfg.min_events
    starts, lengths = starts[keep], lengths[keep]
    if len(starts) == 0:
        return TokenStream.empty(stream.geometry, P, cfg, stream)
    group_key = key_sorted[starts]
    kbin = group_key // (gw * gh)
    cell = group_key - kbin * (gw * gh)
    py = cell // gw
    px = cell - py * gw
    # key order is already (t_spike, patch_y, patch_x): bins ascend, then row-major
    total = int(lengths.sum())
    outpos = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    flat = np.repeat(starts, lengths) + (np.arange(total, dtype=np.int64)
                                         - np.repeat(outpos, lengths))
    offsets = np.concatenate(([0], np.cumsum(lengths)))
    return TokenStream(stream.geometry, P, cfg, stream,
                       px.astype(np.int32), py.astype(np.int32),
                       ((kbin + 1) * D).astype(np.int64),
                       offsets, order[flat])


def frame_patches(stream: EventStream, cfg: FrameConfig,
                  t0: int | None = None, t1: int | None = None) -> TokenStream:
    """One token per grid cell per window, empty cells included.

    Windows are absolute duration-aligned bins covering [t0, t1) when a
    span is given, otherwise the bins touched by the stream. An empty
    stream with no span yields an empty token stream.
    """
    cfg.validate()
    P, D = cfg.patch_size, cfg.duration_us
    gw, gh = grid_shape(stream.geometry, P)
    if t0 is not None and t1 is not None:
        stream = stream.window(t0, t1)
        k0, k1 = t0 // D, max(t0 // D, (t1 - 1) // D)
    elif len(stream) == 0:
        return TokenStream.empty(stream.geometry, P, cfg, stream)
    else:
        first, last = stream.span
        k0, k1 = first // D, last // D
    nwin = int(k1 - k0 + 1)
    ncells = gw * gh
    ntok = nwin * ncells
    cell_idx = np.tile(np.arange(ncells, dtype=np.int64), nwin)
    py = cell_idx // gw
    px = cell_idx - py * gw
    win = np.repeat(np.arange(nwin, dtype=np.int64), ncells)
    t_spike = (k0 + win + 1) * D
    if len(stream):
        slot = (stream.t // D - k0) * ncells \
            + (stream.y // P).astype(np.int64) * gw + stream.x // P
        order = np.argsort(slot, kind="stable")
        counts = np.bincount(slot, minlength=ntok)
        member_idx = order
    else:
        counts = np.zeros(ntok, dtype=np.int64)
        member_idx = np.empty(0, np.int64)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    return TokenStream(stream.geometry, P, cfg, stream,
                       px.astype(np.int32), py.astype(np.int32),
                       t_spike.astype(np.int64), offsets, member_idx)
