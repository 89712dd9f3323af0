"""Stacked-histogram token representation.

A token becomes a patch_size x patch_size x buckets x polarity count
tensor: each member event increments the cell at its pixel offset within
the patch, its elapsed-time bucket before the spike, and its polarity
channel. Time buckets double in width: [0,1), [1,2), [2,4), ... [256,inf)
milliseconds, ten in total. The flattened view interleaves channel =
2*bucket + polarity; log1p of the flat counts is the model-facing input.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagic,
    EventOutsidePatch,
    InvalidConfig,
    NegativeDelta,
    TruncatedFile,
    ZeroScale,
)
from .tokens import Token, TokenStream

DEFAULT_BUCKET_EDGES_MS = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0)


@dataclass(frozen=True)
class EmbeddingConfig:
    """Time divisor and bucket boundaries for token embeddings.

    time_scale divides microsecond timestamps (25,000 for graph models,
    10,000 for point models, 50,000 for attention models).
    """

    time_scale: float = 50_000.0
    bucket_edges_ms: tuple = DEFAULT_BUCKET_EDGES_MS

    def validate(self) -> None:
        if not self.time_scale > 0:
            raise InvalidConfig("time_scale", "must be > 0")
        edges = self.bucket_edges_ms
        if len(edges) < 1 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise InvalidConfig("bucket_edges_ms", "must be strictly increasing")


@dataclass
class StackedHistogram:
    patch_size: int
    counts: np.ndarray  # (P, P, buckets, 2) int64, (row, col, bucket, polarity)

    @property
    def flat(self) -> np.ndarray:
        """(P, P, 2*buckets) view with channel = 2*bucket + polarity."""
        P = self.patch_size
        return self.counts.reshape(P, P, -1)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def time_bucket(delta_ms: float, edges_ms=DEFAULT_BUCKET_EDGES_MS) -> int:
    """Bucket index of an elapsed time (ms) before the spike; last bucket
    is unbounded."""
    if delta_ms < 0:
        raise NegativeDelta(delta_ms)
    return int(np.searchsorted(np.asarray(edges_ms), delta_ms, side="right"))


def pol_channel(p: int) -> int:
    """-1 -> 0, +1 -> 1."""
    return (p + 1) // 2


def stacked_histogram(token: Token, patch_size: int,
                      edges_ms=DEFAULT_BUCKET_EDGES_MS) -> StackedHistogram:
    """Histogram one token; every member must lie inside the token's patch."""
    P = patch_size
    nb = len(edges_ms) + 1
    counts = np.zeros((P, P, nb, 2), dtype=np.int64)
    x0 = token.patch_x * P
    y0 = token.patch_y * P
    edges_us = np.asarray([e * 1000.0 for e in edges_ms])
    for i, ev in enumerate(token.events):
        dx, dy = ev.x - x0, ev.y - y0
        if not (0 <= dx < P and 0 <= dy < P):
            raise EventOutsidePatch(i)
        bucket = int(np.searchsorted(edges_us, token.t_spike - ev.t, side="right"))
        counts[dy, dx, bucket, pol_channel(ev.p)] += 1
    return StackedHistogram(P, counts)


def histograms_for_stream(tokens: TokenStream,
                          edges_ms=DEFAULT_BUCKET_EDGES_MS) -> np.ndarray:
    """(n_tokens, P, P, 2*buckets) count array for a whole token stream."""
    P = tokens.patch_size
    nb = len(edges_ms) + 1
    nchan = 2 * nb
    ntok = len(tokens)
    src = tokens.source
    counts = tokens.counts
    if ntok == 0 or tokens.total_member_count == 0:
        out = np.zeros((ntok, P, P, nchan), dtype=np.int64)
        return out
    tok = np.repeat(np.arange(ntok, dtype=np.int64), counts)
    m = tokens.member_idx
    dx = src.x[m].astype(np.int64) - tokens.patch_x[tok].astype(np.int64) * P
    dy = src.y[m].astype(np.int64) - tokens.patch_y[tok].astype(np.int64) * P
    if (dx < 0).any() or (dx >= P).any() or (dy < 0).any() or (dy >= P).any():
        bad = int(np.argmax((dx < 0) | (dx >= P) | (dy < 0) | (dy >= P)))
        raise EventOutsidePatch(bad)
    edges_us = np.asarray([e * 1000.0 for e in edges_ms])
    delta = tokens.t_spike[tok] - src.t[m]
    bucket = np.searchsorted(edges_us, delta, side="right")
    chan = 2 * bucket + ((src.p[m].astype(np.int64) + 1) // 2)
    flat = ((tok * P + dy) * P + dx) * nchan + chan
    out = np.bincount(flat, minlength=ntok * P * P * nchan)
    return out.reshape(ntok, P, P, nchan)


def embed_log(hist) -> np.ndarray:
    """log(x + 1) of the flattened histogram; zeros map to zeros."""
    flat = hist.flat if isinstance(hist, StackedHistogram) else np.asarray(hist)
    return np.log1p(flat.astype(np.float64))


def scale_time(t_us, scale: float):
    """Divide times by the model-family scale factor."""
    if scale <= 0:
        raise ZeroScale()
    return np.asarray(t_us, dtype=np.float64) / scale if np.ndim(t_us) else t_us / scale


_HIST_HEADER = struct.Struct("<HH")


def write_histograms(path, hists: np.ndarray) -> None:
    """Binary export: u16 patch size, u16 channel count, then per histogram
    the u32-LE counts in (row, col, channel) order."""
    hists = np.asarray(hists)
    if hists.ndim == 3:
        hists = hists[None]
    _, P, _, nchan = hists.shape
    with open(path, "wb") as fh:
        fh.write(_HIST_HEADER.pack(P, nchan))
        fh.write(np.ascontiguousarray(hists, dtype="<u4").tobytes())


def read_histograms(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(_HIST_HEADER.size)
        if len(head) < _HIST_HEADER.size:
            raise TruncatedFile(len(head), "histogram header")
        P, nchan = _HIST_HEADER.unpack(head)
        if P == 0 or nchan == 0:
            raise BadMagic("zero patch size or channel count in histogram header")
        body = fh.read()
    per = P * P * nchan * 4
    if per == 0 or len(body) % per:
        raise TruncatedFile(_HIST_HEADER.size + len(body), "histogram payload size mismatch")
    arr = np.frombuffer(body, dtype="<u4").reshape(-1, P, P, nchan)
    return arr.astype(np.int64)
