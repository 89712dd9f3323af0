"""Events, sensor geometry, stream validation, patch indexing, windowing.

Timestamps are integer microseconds everywhere; there is no floating-point
time in the core. Streams are stored column-wise (one numpy array per
field) so the tokenizers and analyses can run vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import (
    BadPolarityAt,
    InvertedWindow,
    OutOfBoundsAt,
    UnsortedAt,
    ZeroPatchSize,
)


class Event(NamedTuple):
    """One camera event: pixel position, time in microseconds, polarity."""

    x: int
    y: int
    t: int
    p: int


@dataclass(frozen=True)
class SensorGeometry:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("sensor dimensions must be >= 1")


def patch_index(x: int, y: int, patch_size: int) -> tuple[int, int]:
    """Grid cell of a pixel for a grid of non-overlapping patch_size squares."""
    if patch_size < 1:
        raise ZeroPatchSize()
    return (x // patch_size, y // patch_size)


def grid_shape(geometry: SensorGeometry, patch_size: int) -> tuple[int, int]:
    """(columns, rows) of the patch grid; edge patches may be partial."""
    if patch_size < 1:
        raise ZeroPatchSize()
    gw = -(-geometry.width // patch_size)
    gh = -(-geometry.height // patch_size)
    return gw, gh


class EventStream:
    """A validated, time-sorted sequence of events bound to a geometry.

    Columns: x, y (int32), t (int64 microseconds), p (int8, -1 or +1).
    Instances are immutable values; share them freely.
    """

    __slots__ = ("geometry", "x", "y", "t", "p")

    def __init__(self, geometry, x, y, t, p, _validated=False):
        self.geometry = geometry
        self.x = np.ascontiguousarray(x, dtype=np.int32)
        self.y = np.ascontiguousarray(y, dtype=np.int32)
        self.t = np.ascontiguousarray(t, dtype=np.int64)
        self.p = np.ascontiguousarray(p, dtype=np.int8)
        for arr in (self.x, self.y, self.t, self.p):
            arr.setflags(write=False)
        if not _validated:
            _check_columns(self.x, self.y, self.t, self.p, geometry)

    def __len__(self) -> int:
        return self.t.shape[0]

    def __iter__(self) -> Iterator[Event]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i: int) -> Event:
        return Event(int(self.x[i]), int(self.y[i]), int(self.t[i]), int(self.p[i]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (
            self.geometry == other.geometry
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.p, other.p)
        )

    def slice(self, i0: int, i1: int) -> "EventStream":
        return EventStream(
            self.geometry, self.x[i0:i1], self.y[i0:i1], self.t[i0:i1], self.p[i0:i1],
            _validated=True,
        )

    def window(self, t0: int, t1: int) -> "EventStream":
        """Events with t0 <= t < t1, order preserved."""
        if t0 > t1:
            raise InvertedWindow(t0, t1)
        i0, i1 = np.searchsorted(self.t, [t0, t1], side="left")
        return self.slice(int(i0), int(i1))

    @property
    def span(self) -> tuple[int, int]:
        """(first, last) timestamp; undefined on empty streams."""
        return int(self.t[0]), int(self.t[-1])


def _check_columns(x, y, t, p, geometry):
    n = t.shape[0]
    if n == 0:
        return
    bad_bounds = (
        (x < 0) | (x >= geometry.width) | (y < 0) | (y >= geometry.height) | (t < 0)
    )
    bad_pol = (p != 1) & (p != -1)
    unsorted = np.zeros(n, dtype=bool)
    unsorted[1:] = t[1:] < t[:-1]
    # report the earliest offending index, whatever kind it is
    firsts = []
    if bad_bounds.any():
        firsts.append((int(np.argmax(bad_bounds)), OutOfBoundsAt))
    if bad_pol.any():
        firsts.append((int(np.argmax(bad_pol)), BadPolarityAt))
    if unsorted.any():
        firsts.append((int(np.argmax(unsorted)), UnsortedAt))
    if firsts:
        idx, exc = min(firsts, key=lambda pair: pair[0])
        raise exc(idx)


def validate_stream(events, geometry: SensorGeometry) -> EventStream:
    """Build a validated EventStream or raise at the first offending index.

    Accepts an EventStream, an iterable of Event tuples, or a (x, y, t, p)
    tuple of array-likes.
    """
    if isinstance(events, EventStream):
        x, y, t, p = events.x, events.y, events.t, events.p
    elif isinstance(events, tuple) and len(events) == 4 and not isinstance(events[0], (int, np.integer)):
        x, y, t, p = (np.asarray(c) for c in events)
    else:
        rows = list(events)
        if rows:
            arr = np.asarray(rows, dtype=np.int64)
            x, y, t, p = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
        else:
            x = y = t = p = np.empty(0, dtype=np.int64)
    return EventStream(geometry, x, y, t, p)


def from_arrays(x, y, t, p, geometry: SensorGeometry) -> EventStream:
    """Validated stream from four parallel columns."""
    return EventStream(geometry, np.asarray(x), np.asarray(y), np.asarray(t), np.asarray(p))


def window_slice(stream, t0: int, t1: int):
    """Items with t0 <= time < t1 from an EventStream or TokenStream.

    Token streams are sliced by spike time; member events may predate t0
    (groups accumulate across the window boundary).
    """
    if t0 > t1:
        raise InvertedWindow(t0, t1)
    return stream.window(t0, t1)
