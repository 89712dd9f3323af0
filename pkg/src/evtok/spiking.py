"""Patch-as-spiking-neuron tokenizer.

Each patch of the sensor grid owns a potential. Incoming events raise it
(by 1 normally, by rrp_alpha inside a relative refractory window, minus a
leak term in the decay variant, or it equals the pending-group size in the
discrete variant); when the potential reaches the threshold the pending
group is emitted as one token stamped with the last event's time, and an
absolute refractory window [t_spike, t_spike + refractory_us) discards
subsequent events in that patch.

The potential is evaluated in closed form from the run counters
(v = alpha*r + m - lam*(t - t_ref)) rather than accumulated event by
event. The two are mathematically identical between resets, and the closed
form makes the streaming tokenizer and the vectorized stream kernels
bit-identical.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidConfig, NonMonotonicTime, OutOfBoundsAt
from .events import Event, EventStream, SensorGeometry, grid_shape
from .tokens import Token, TokenStream

PLAIN = "plain"
DECAY = "decay"
DISCRETE = "discrete"
VARIANTS = (PLAIN, DECAY, DISCRETE)


@dataclass(frozen=True)
class TokenizerConfig:
    """Spiking tokenizer parameters. Durations are integer microseconds."""

    patch_size: int = 16
    threshold: float = 256.0
    refractory_us: int = 0
    rrp_us: int = 0
    rrp_alpha: float = 1.0
    decay_per_us: float = 0.0
    t_max_us: Optional[int] = None
    variant: str = PLAIN

    def validate(self) -> None:
        if self.patch_size < 1:
            raise InvalidConfig("patch_size", "must be >= 1")
        if not (self.threshold > 0 and math.isfinite(self.threshold)):
            raise InvalidConfig("threshold", "must be finite and > 0")
        if not math.isfinite(self.decay_per_us):
            raise InvalidConfig("decay_per_us", "must be finite")
        if self.refractory_us < 0:
            raise InvalidConfig("refractory_us", "must be >= 0")
        if self.rrp_us < 0:
            raise InvalidConfig("rrp_us", "must be >= 0")
        if not 0.0 <= self.rrp_alpha <= 1.0:
            raise InvalidConfig("rrp_alpha", "must lie in [0, 1]")
        if self.decay_per_us < 0:
            raise InvalidConfig("decay_per_us", "must be >= 0")
        if self.variant not in VARIANTS:
            raise InvalidConfig("variant", f"must be one of {VARIANTS}")
        if self.decay_per_us > 0 and self.variant != DECAY:
            raise InvalidConfig("variant", "decay_per_us > 0 requires variant='decay'")
        if self.t_max_us is not None:
            if self.variant != DISCRETE:
                raise InvalidConfig("variant", "t_max_us requires variant='discrete'")
            if self.t_max_us < 0:
                raise InvalidConfig("t_max_us", "must be >= 0 (or None for unbounded)")
        if self.variant == DISCRETE and (self.decay_per_us != 0 or self.rrp_us != 0):
            raise InvalidConfig("variant", "discrete variant is incompatible with decay and RRP")


class _PatchState:
    """Mutable per-patch neuron state. `pending` holds (t, payload) pairs."""

    __slots__ = ("pending", "last_spike_t", "rrp_n", "norm_n",
                 "decay_ref", "last_event_t", "u")

    def __init__(self):
        self.pending = deque()
        self.last_spike_t: Optional[int] = None
        self.rrp_n = 0
        self.norm_n = 0
        self.decay_ref: Optional[int] = None
        self.last_event_t: Optional[int] = None
        self.u = 0.0

    def _reset_run(self):
        self.pending.clear()
        self.rrp_n = 0
        self.norm_n = 0
        self.decay_ref = None
        self.u = 0.0


def _core_push(ps: _PatchState, t: int, payload, cfg: TokenizerConfig):
    """Advance one patch by one event. Returns the member payload list on a
    spike, None otherwise (accepted-and-pending, discarded, or floored)."""
    lst = ps.last_spike_t
    in_rrp = False
    if lst is not None:
        arp_end = lst + cfg.refractory_us
        if t < arp_end:
            return None  # absolute refractory: no effect at all
        in_rrp = cfg.rrp_us > 0 and t < arp_end + cfg.rrp_us

    ps.pending.append((t, payload))
    ps.last_event_t = t

    if cfg.variant == DISCRETE:
        tmax = cfg.t_max_us
        if tmax is not None:
            pend = ps.pending
            while t - pend[0][0] > tmax:
                pend.popleft()
        v = float(len(ps.pending))
    elif in_rrp:
        ps.rrp_n += 1
        ps.decay_ref = t  # a later decay gap is measured from the newest accepted event
        v = cfg.rrp_alpha * ps.rrp_n + ps.norm_n
    else:
        ps.norm_n += 1
        if cfg.variant == DECAY:
            if ps.decay_ref is None:
                ps.decay_ref = t  # first accepted event of the run: no leak yet
            v = (cfg.rrp_alpha * ps.rrp_n + ps.norm_n) \
                - cfg.decay_per_us * (t - ps.decay_ref)
            if v <= 0.0:
                ps._reset_run()
                return None
        else:
            v = cfg.rrp_alpha * ps.rrp_n + ps.norm_n

    if v >= cfg.threshold:
        members = [pl for (_, pl) in ps.pending]
        ps._reset_run()
        ps.last_spike_t = t
        return members
    ps.u = v
    return None


@dataclass(frozen=True)
class PatchResidue:
    pending: int
    potential: float


@dataclass
class ResidueReport:
    """Per-patch pending-group sizes and potentials left after a stream.

    Residual groups never become tokens; this report is how callers
    measure that loss.
    """

    per_patch: dict = field(default_factory=dict)

    def pending(self, patch_x: int, patch_y: int) -> int:
        res = self.per_patch.get((patch_x, patch_y))
        return res.pending if res else 0

    def potential(self, patch_x: int, patch_y: int) -> float:
        res = self.per_patch.get((patch_x, patch_y))
        return res.potential if res else 0.0

    @property
    def total_pending(self) -> int:
        return sum(r.pending for r in self.per_patch.values())


class SpikingTokenizer:
    """Streaming tokenizer: feed events one at a time, collect tokens.

    Requires exclusive access while consuming a stream; a fresh instance
    starts with all patch potentials at zero and no refractory active.
    """

    def __init__(self, config: TokenizerConfig, geometry: SensorGeometry):
        config.validate()
        self.config = config
        self.geometry = geometry
        self.grid = grid_shape(geometry, config.patch_size)
        self._patches: dict[tuple[int, int], _PatchState] = {}
        self._last_t: Optional[int] = None

    def _patch(self, key) -> _PatchState:
        ps = self._patches.get(key)
        if ps is None:
            ps = _PatchState()
            self._patches[key] = ps
        return ps

    def push(self, e: Event) -> Optional[Token]:
        """Push one event (non-decreasing time); returns a Token on spike."""
        x, y, t, p = e
        geo = self.geometry
        if not (0 <= x < geo.width and 0 <= y < geo.height) or t < 0:
            raise OutOfBoundsAt()
        if p not in (-1, 1):
            raise OutOfBoundsAt(detail="polarity must be -1 or +1")
        if self._last_t is not None and t < self._last_t:
            raise NonMonotonicTime(t, self._last_t)
        self._last_t = t
        P = self.config.patch_size
        key = (x // P, y // P)
        members = _core_push(self._patch(key), t, Event(x, y, t, p), self.config)
        if members is None:
            return None
        return Token(key[0], key[1], t, tuple(members))

    def potential(self, patch_x: int, patch_y: int) -> float:
        ps = self._patches.get((patch_x, patch_y))
        return ps.u if ps else 0.0

    def pending_count(self, patch_x: int, patch_y: int) -> int:
        ps = self._patches.get((patch_x, patch_y))
        return len(ps.pending) if ps else 0

    def finalize(self) -> ResidueReport:
        """Read-only summary of what never spiked; emits no tokens."""
        report = ResidueReport()
        for (px, py), ps in self._patches.items():
            if ps.pending or ps.u:
                report.per_patch[(px, py)] = PatchResidue(len(ps.pending), ps.u)
        return report


def new_tokenizer(config: TokenizerConfig, geometry: SensorGeometry) -> SpikingTokenizer:
    return SpikingTokenizer(config, geometry)


def tokenize_stream(config: TokenizerConfig, stream: EventStream) -> TokenStream:
    """Tokenize a whole stream; equal to folding push() over it in order,
    with ties at equal t_spike ordered by (patch_y, patch_x).

    Runs vectorized per-patch kernels except for the decay+RRP combination,
    which falls back to the event-by-event engine.
    """
    config.validate()
    n = len(stream)
    P = config.patch_size
    if n == 0:
        return TokenStream.empty(stream.geometry, P, config, stream)
    if config.variant == DECAY and config.rrp_us > 0:
        return _tokenize_fold(config, stream)
    from . import _fast
    return _fast.tokenize(config, stream)


def _tokenize_fold(config: TokenizerConfig, stream: EventStream) -> TokenStream:
    """Reference path: fold the streaming engine, payloads are indices."""
    gw, _ = grid_shape(stream.geometry, config.patch_size)
    P = config.patch_size
    patches: dict[int, _PatchState] = {}
    x, y, t = stream.x, stream.y, stream.t
    out_pid, out_t, out_members = [], [], []
    for i in range(len(stream)):
        pid = (int(y[i]) // P) * gw + (int(x[i]) // P)
        ps = patches.get(pid)
        if ps is None:
            ps = _PatchState()
            patches[pid] = ps
        members = _core_push(ps, int(t[i]), i, config)
        if members is not None:
            out_pid.append(pid)
            out_t.append(int(t[i]))
            out_members.append(members)
    # assemble in (t_spike, patch_y, patch_x) order, ties keep emission order
    if not out_pid:
        return TokenStream.empty(stream.geometry, P, config, stream)
    pid_arr = np.asarray(out_pid, dtype=np.int64)
    t_arr = np.asarray(out_t, dtype=np.int64)
    py = pid_arr // gw
    px = pid_arr - py * gw
    perm = np.lexsort((px, py, t_arr))
    member_idx = np.concatenate([np.asarray(out_members[i], dtype=np.int64) for i in perm])
    lengths = np.asarray([len(out_members[i]) for i in perm], dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(lengths)))
    return TokenStream(stream.geometry, P, config, stream,
                       px[perm].astype(np.int32), py[perm].astype(np.int32),
                       t_arr[perm], offsets, member_idx)
