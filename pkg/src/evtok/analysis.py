"""Stream measurements: spatial sparsity, accumulation curves, input-size
statistics, tokenization throughput, and the event-to-token delay.

Windows tile the input's span starting at its first timestamp; a trailing
partial window is included. Token-level sparsity uses patch-grid cells,
event-level sparsity uses pixels.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .baselines import FrameConfig, VoxelConfig, frame_patches, voxelize
from .errors import EmptyStream, EmptyTimeRange, MismatchedStreams
from .events import EventStream, grid_shape
from .spiking import TokenizerConfig, tokenize_stream
from .tokens import TokenStream


@dataclass
class SparsityReport:
    window_us: int
    per_window: np.ndarray  # percentage of empty cells, one entry per window
    mean: float


@dataclass
class SparsityComparison:
    events: SparsityReport
    tokens: SparsityReport
    mean_difference: float  # sparsity(events) - sparsity(tokens)


@dataclass
class AccumulationCurve:
    """Right-continuous step function: counts[i] is the cumulative total
    once times[i] has been reached."""

    times: np.ndarray
    counts: np.ndarray

    def value_at(self, t: int) -> int:
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return int(self.counts[i]) if i >= 0 else 0

    @property
    def total(self) -> int:
        return int(self.counts[-1]) if len(self.counts) else 0


@dataclass
class CountReport:
    window_us: int
    per_window: np.ndarray
    mean: float


@dataclass
class BenchReport:
    events: int
    wall_s: float
    events_per_sec: float
    tokens: int
    repeats: int


def _windows_of(times: np.ndarray, window_us: int):
    if window_us < 1:
        raise ValueError("window_us must be >= 1")
    if len(times) == 0:
        raise EmptyTimeRange()
    first = int(times[0])
    last = int(times[-1])
    nwin = (last - first) // window_us + 1
    return first, nwin


def _occupancy(times, cell_keys, ncells, window_us):
    """Per-window count of distinct occupied cells."""
    first, nwin = _windows_of(times, window_us)
    wi = (times - first) // window_us
    combined = wi * ncells + cell_keys
    uniq = np.unique(combined)
    occupied = np.bincount((uniq // ncells).astype(np.int64), minlength=nwin)
    return occupied, nwin


def sparsity(obj, geometry=None, patch_size=None, window_us: int = 50_000) -> SparsityReport:
    """Percentage of cells holding zero items per window, averaged.

    For token streams cells are patch-grid cells; for event streams they
    are pixels (patch_size is ignored).
    """
    if isinstance(obj, TokenStream):
        geometry = geometry or obj.geometry
        P = patch_size or obj.patch_size
        gw, gh = grid_shape(geometry, P)
        ncells = gw * gh
        keys = obj.patch_y.astype(np.int64) * gw + obj.patch_x
        occupied, nwin = _occupancy(obj.t_spike, keys, ncells, window_us)
    elif isinstance(obj, EventStream):
        geometry = geometry or obj.geometry
        ncells = geometry.width * geometry.height
        keys = obj.y.astype(np.int64) * geometry.width + obj.x
        occupied, nwin = _occupancy(obj.t, keys, ncells, window_us)
    else:
        raise TypeError("expected an EventStream or TokenStream")
    per_window = 100.0 * (ncells - occupied) / ncells
    return SparsityReport(window_us, per_window, float(per_window.mean()))


def compare_sparsity(events: EventStream, tokens: TokenStream,
                     window_us: int = 50_000) -> SparsityComparison:
    ev = sparsity(events, window_us=window_us)
    tok = sparsity(tokens, window_us=window_us)
    return SparsityComparison(ev, tok, ev.mean - tok.mean)


def accumulation_curve(obj) -> AccumulationCurve:
    """Cumulative captured-event count over time: +1 per event, or
    +|members| per token at its spike time."""
    if isinstance(obj, TokenStream):
        times, weights = obj.t_spike, obj.counts
    elif isinstance(obj, EventStream):
        times, weights = obj.t, np.ones(len(obj), dtype=np.int64)
    else:
        raise TypeError("expected an EventStream or TokenStream")
    if len(times) == 0:
        return AccumulationCurve(np.empty(0, np.int64), np.empty(0, np.int64))
    uniq, inverse = np.unique(times, return_inverse=True)
    per_time = np.bincount(inverse, weights=weights).astype(np.int64)
    return AccumulationCurve(uniq, np.cumsum(per_time))


def token_count_stats(tokens: TokenStream, window_us: int) -> CountReport:
    """Mean token count per window over the stream's span."""
    first, nwin = _windows_of(tokens.t_spike, window_us)
    wi = (tokens.t_spike - first) // window_us
    per_window = np.bincount(wi, minlength=nwin).astype(np.int64)
    return CountReport(window_us, per_window, float(per_window.mean()))


def delay_estimate(event_curve: AccumulationCurve,
                   token_curve: AccumulationCurve) -> float:
    """Mean horizontal displacement between the curves, in microseconds.

    For every cumulative count level captured by tokens, the delay is the
    token-curve time minus the earliest event-curve time at which that
    count was reached; the mean weights each breakpoint by the events it
    contributes.
    """
    total_tok = token_curve.total
    total_ev = event_curve.total
    if total_tok > total_ev:
        raise MismatchedStreams(
            f"token curve total {total_tok} exceeds event curve total {total_ev}")
    if total_tok == 0:
        return 0.0
    increments = np.diff(np.concatenate(([0], token_curve.counts)))
    tok_time_per_level = np.repeat(token_curve.times, increments)
    levels = np.arange(1, total_tok + 1, dtype=np.int64)
    ev_idx = np.searchsorted(event_curve.counts, levels, side="left")
    ev_time_per_level = event_curve.times[ev_idx]
    return float(np.mean(tok_time_per_level - ev_time_per_level))


def _tokenize_for(config, stream: EventStream) -> TokenStream:
    if isinstance(config, TokenizerConfig):
        return tokenize_stream(config, stream)
    if isinstance(config, VoxelConfig):
        return voxelize(stream, config)
    if isinstance(config, FrameConfig):
        return frame_patches(stream, config)
    raise TypeError(f"unsupported config type {type(config).__name__}")


def bench_throughput(stream: EventStream, config, repeats: int = 3) -> BenchReport:
    """Best-of-repeats single-worker tokenization speed in events/second.

    Token output must be identical across repeats; the first run's result
    is the reference.
    """
    if len(stream) == 0:
        raise EmptyStream()
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    best = np.inf
    reference = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = _tokenize_for(config, stream)
        elapsed = time.perf_counter() - start
        best = min(best, elapsed)
        if reference is None:
            reference = out
        elif out != reference:
            raise MismatchedStreams("tokenization output changed between repeats")
    return BenchReport(len(stream), best, len(stream) / best, len(reference), repeats)
