"""Vectorized stream-tokenization kernels.

Events are grouped per patch with one stable sort, then each patch is
consumed run by run (a run = the accepted events since the last reset).
The inner loops iterate once per emitted token, not per event, so cost is
O(n) grouping plus O(tokens) control flow.

All potential arithmetic mirrors the closed-form expressions in
spiking._core_push operation for operation, so outputs are bit-identical
to folding the streaming engine.
"""

from __future__ import annotations

import math

import numpy as np

from .events import EventStream, grid_shape
from .spiking import DECAY, DISCRETE, PLAIN, TokenizerConfig
from .tokens import TokenStream, build_token_stream

_SCAN_BLOCK = 4096


def _group_by_patch(stream: EventStream, patch_size: int):
    """Stable-sort events by patch id; returns grid plus grouped views."""
    gw, gh = grid_shape(stream.geometry, patch_size)
    px = stream.x // patch_size
    py = stream.y // patch_size
    pid = py.astype(np.int64) * gw + px
    ncells = gw * gh
    key = pid.astype(np.uint16) if ncells <= 65536 else pid
    # int32 indices halve the memory traffic of every downstream gather
    order = np.argsort(key, kind="stable").astype(np.int32, copy=False)
    t_sorted = stream.t[order]
    counts = np.bincount(pid, minlength=ncells)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    return gw, gh, order, t_sorted, counts, starts


def _first_plain_count(base: float, sigma: float) -> int:
    """Smallest m >= 1 with base + m >= sigma under float64 arithmetic."""
    m = max(1, math.ceil(sigma - base))
    while m > 1 and base + (m - 1) >= sigma:
        m -= 1
    while base + m < sigma:
        m += 1
    return m


def _first_scaled_count(alpha: float, sigma: float) -> int:
    """Smallest k >= 1 with alpha * k >= sigma; alpha must be > 0."""
    k = max(1, math.ceil(sigma / alpha))
    while k > 1 and alpha * (k - 1) >= sigma:
        k -= 1
    while alpha * k < sigma:
        k += 1
    return k


def _advance_after_spike(tp: np.ndarray, j: int, refractory_us: int) -> int:
    if refractory_us == 0:
        return j + 1
    s = int(np.searchsorted(tp, tp[j] + refractory_us, side="left"))
    return max(s, j + 1)


def tokenize(config: TokenizerConfig, stream: EventStream) -> TokenStream:
    P = config.patch_size
    gw, gh, order, t_sorted, counts, starts = _group_by_patch(stream, P)

    if config.variant == PLAIN and config.refractory_us == 0 and config.rrp_us == 0:
        tok = _bulk_chunk(config, counts, starts, t_sorted, gw)
    elif config.variant == DECAY:
        tok = _per_patch(_runs_decay, config, counts, starts, t_sorted)
    elif config.variant == DISCRETE and config.t_max_us is not None:
        tok = _per_patch(_runs_discrete, config, counts, starts, t_sorted)
    else:
        # plain with refractory/RRP; discrete with unbounded t_max reduces
        # to plain boundaries (the potential is just the pending count)
        tok = _per_patch(_runs_plain, config, counts, starts, t_sorted)

    pid, t_spike, a, b = tok
    return build_token_stream(stream.geometry, P, config, stream,
                              pid, t_spike, a, b, order, gw)


def _bulk_chunk(config, counts, starts, t_sorted, gw):
    """Plain variant without refractory: every patch chunks into groups of
    ceil(threshold) consecutive events; no per-token loop needed."""
    K = math.ceil(config.threshold)
    ntok_per = counts // K
    total = int(ntok_per.sum())
    if total == 0:
        z = np.empty(0, np.int64)
        return z, z, z, z
    tok_pid = np.repeat(np.arange(ntok_per.shape[0], dtype=np.int64), ntok_per)
    tok_starts = np.concatenate(([0], np.cumsum(ntok_per)[:-1]))
    rank = np.arange(total, dtype=np.int64) - np.repeat(tok_starts, ntok_per)
    a = (np.repeat(starts, ntok_per) + rank * K).astype(np.int32)
    b = a + (K - 1)
    t_spike = t_sorted[b]
    return tok_pid, t_spike, a, b


def _per_patch(runs_fn, config, counts, starts, t_sorted):
    pids, spikes, ra, rb = [], [], [], []
    for pid in np.nonzero(counts)[0]:
        s0 = int(starts[pid])
        tp = t_sorted[s0:s0 + int(counts[pid])]
        out = runs_fn(tp, config)
        if not out:
            continue
        for (a, b) in out:
            ra.append(s0 + a)
            rb.append(s0 + b)
            spikes.append(int(tp[b]))
            pids.append(int(pid))
    return (np.asarray(pids, np.int64), np.asarray(spikes, np.int64),
            np.asarray(ra, np.int64), np.asarray(rb, np.int64))


def _runs_plain(tp: np.ndarray, cfg: TokenizerConfig):
    """Token ranges for one patch, plain variant with optional ARP/RRP."""
    sigma = cfg.threshold
    alpha = cfg.rrp_alpha
    T, Trel = cfg.refractory_us, cfg.rrp_us
    n = tp.shape[0]
    K = math.ceil(sigma)
    out = []
    s = 0
    last_spike_t = None
    while s < n:
        if last_spike_t is None or Trel == 0:
            j = s + K - 1
            if j >= n:
                break
        else:
            rrp_end = last_spike_t + T + Trel
            rend = int(np.searchsorted(tp, rrp_end, side="left"))
            rend = max(rend, s)
            r_avail = rend - s
            j = -1
            # a spike inside the RRP needs alpha * k >= sigma for some
            # k <= r_avail; alpha * k is monotone in k
            if r_avail > 0 and alpha > 0.0 and alpha * r_avail >= sigma:
                j = s + _first_scaled_count(alpha, sigma) - 1
            if j < 0:
                base = alpha * r_avail
                m = _first_plain_count(base, sigma)
                j = rend + m - 1
                if j >= n:
                    break
        out.append((s, j))
        last_spike_t = int(tp[j])
        s = _advance_after_spike(tp, j, T)
    return out


def _runs_decay(tp: np.ndarray, cfg: TokenizerConfig):
    """Decay variant (no RRP): scan each run for the first spike or floor."""
    sigma = cfg.threshold
    lam = cfg.decay_per_us
    T = cfg.refractory_us
    n = tp.shape[0]
    out = []
    s = 0
    while s < n:
        t_ref = tp[s]
        hit_j = -1
        hit_spike = False
        b0 = s
        while b0 < n:
            b1 = min(b0 + _SCAN_BLOCK, n)
            m = np.arange(b0 - s + 1, b1 - s + 1, dtype=np.float64)
            v = m - lam * (tp[b0:b1] - t_ref)
            spike_mask = v >= sigma
            floor_mask = v <= 0.0
            hits = spike_mask | floor_mask
            if hits.any():
                k = int(np.argmax(hits))
                hit_j = b0 + k
                hit_spike = bool(spike_mask[k])
                break
            b0 = b1
        if hit_j < 0:
            break  # run reaches the end of the patch without spiking
        if hit_spike:
            out.append((s, hit_j))
            s = _advance_after_spike(tp, hit_j, T)
        else:
            s = hit_j + 1  # floored: the triggering event is dropped too
    return out


def _runs_discrete(tp: np.ndarray, cfg: TokenizerConfig):
    """Discrete variant with pruning: potential = pruned pending size."""
    K = math.ceil(cfg.threshold)
    T = cfg.refractory_us
    tmax = cfg.t_max_us
    n = tp.shape[0]
    # first index still inside the t_max window of each event
    lb = np.searchsorted(tp, tp - tmax, side="left")
    out = []
    s = 0
    while s + K - 1 < n:
        j = -1
        b0 = s + K - 1
        while b0 < n:
            b1 = min(b0 + _SCAN_BLOCK, n)
            idx = np.arange(b0, b1, dtype=np.int64)
            cnt = idx - np.maximum(s, lb[b0:b1]) + 1
            hits = cnt >= K
            if hits.any():
                j = b0 + int(np.argmax(hits))
                break
            b0 = b1
        if j < 0:
            break
        a = max(s, int(lb[j]))  # the token is the pruned pending group
        out.append((a, j))
        s = _advance_after_spike(tp, j, T)
    return out
