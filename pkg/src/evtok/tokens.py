"""Tokens and token streams.

A token is a group of events from one patch stamped with the time of its
last member event. TokenStream keeps tokens column-wise (patch_x, patch_y,
t_spike) with member events referenced by index into the source stream,
which keeps million-token streams cheap and makes columnar export trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvertedWindow
from .events import Event, EventStream, SensorGeometry


@dataclass(frozen=True)
class Token:
    patch_x: int
    patch_y: int
    t_spike: int
    events: tuple[Event, ...]

    @property
    def n_events(self) -> int:
        return len(self.events)


class TokenStream:
    """Tokens sorted by (t_spike, patch_y, patch_x), ties in emission order.

    Columns: patch_x, patch_y (int32), t_spike (int64). Member events of
    token i are source[member_idx[offsets[i]:offsets[i+1]]], in arrival
    order. Every input event appears in at most one token.
    """

    __slots__ = (
        "geometry", "patch_size", "config", "source",
        "patch_x", "patch_y", "t_spike", "offsets", "member_idx",
    )

    def __init__(self, geometry: SensorGeometry, patch_size: int, config, source,
                 patch_x, patch_y, t_spike, offsets, member_idx):
        self.geometry = geometry
        self.patch_size = patch_size
        self.config = config
        self.source = source
        self.patch_x = np.ascontiguousarray(patch_x, dtype=np.int32)
        self.patch_y = np.ascontiguousarray(patch_y, dtype=np.int32)
        self.t_spike = np.ascontiguousarray(t_spike, dtype=np.int64)
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.member_idx = np.ascontiguousarray(member_idx, dtype=np.int64)

    @classmethod
    def empty(cls, geometry, patch_size, config, source) -> "TokenStream":
        return cls(geometry, patch_size, config, source,
                   np.empty(0, np.int32), np.empty(0, np.int32),
                   np.empty(0, np.int64), np.zeros(1, np.int64),
                   np.empty(0, np.int64))

    def __len__(self) -> int:
        return self.t_spike.shape[0]

    @property
    def counts(self) -> np.ndarray:
        """Member-event count per token."""
        return np.diff(self.offsets)

    @property
    def total_member_count(self) -> int:
        return int(self.offsets[-1])

    def members_of(self, i: int) -> np.ndarray:
        """Source indices of token i's member events."""
        return self.member_idx[self.offsets[i]:self.offsets[i + 1]]

    def token(self, i: int) -> Token:
        src = self.source
        evs = tuple(src[int(j)] for j in self.members_of(i))
        return Token(int(self.patch_x[i]), int(self.patch_y[i]),
                     int(self.t_spike[i]), evs)

    def __getitem__(self, i: int) -> Token:
        return self.token(i)

    def __iter__(self) -> Iterator[Token]:
        for i in range(len(self)):
            yield self.token(i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TokenStream):
            return NotImplemented
        return (
            self.geometry == other.geometry
            and self.patch_size == other.patch_size
            and np.array_equal(self.patch_x, other.patch_x)
            and np.array_equal(self.patch_y, other.patch_y)
            and np.array_equal(self.t_spike, other.t_spike)
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.member_idx, other.member_idx)
        )

    def slice(self, i0: int, i1: int) -> "TokenStream":
        o0, o1 = int(self.offsets[i0]), int(self.offsets[i1])
        return TokenStream(
            self.geometry, self.patch_size, self.config, self.source,
            self.patch_x[i0:i1], self.patch_y[i0:i1], self.t_spike[i0:i1],
            self.offsets[i0:i1 + 1] - o0, self.member_idx[o0:o1],
        )

    def window(self, t0: int, t1: int) -> "TokenStream":
        """Tokens spiking in [t0, t1); members may predate t0."""
        if t0 > t1:
            raise InvertedWindow(t0, t1)
        i0, i1 = np.searchsorted(self.t_spike, [t0, t1], side="left")
        return self.slice(int(i0), int(i1))

    @property
    def span(self) -> tuple[int, int]:
        return int(self.t_spike[0]), int(self.t_spike[-1])


def build_token_stream(geometry, patch_size, config, source: EventStream,
                       pid, t_spike, a, b, order, grid_w) -> TokenStream:
    """Assemble a sorted TokenStream from per-token member ranges.

    pid/t_spike/a/b are parallel per-token arrays; [a, b] are inclusive
    index ranges into `order`, which maps (patch, time)-sorted positions
    back to source indices. Tokens are re-sorted by (t_spike, patch_y,
    patch_x); the incoming per-patch chronological order is kept for ties
    within a patch (lexsort is stable).
    """
    pid = np.asarray(pid, dtype=np.int64)
    t_spike = np.asarray(t_spike, dtype=np.int64)
    a = np.asarray(a, dtype=np.int32)
    b = np.asarray(b, dtype=np.int32)
    if len(pid) == 0:
        return TokenStream.empty(geometry, patch_size, config, source)
    py = pid // grid_w
    px = pid - py * grid_w
    perm = np.lexsort((px, py, t_spike))
    px, py, t_spike = px[perm], py[perm], t_spike[perm]
    a, b = a[perm], b[perm]
    lengths = (b - a + 1).astype(np.int64)
    total = int(lengths.sum())
    starts = (np.cumsum(lengths) - lengths).astype(np.int32)
    flat = np.repeat(a, lengths) + (np.arange(total, dtype=np.int32)
                                    - np.repeat(starts, lengths))
    member_idx = order[flat]
    offsets = np.concatenate(([0], np.cumsum(lengths)))
    return TokenStream(geometry, patch_size, config, source,
                       px.astype(np.int32), py.astype(np.int32),
                       t_spike, offsets, member_idx)
