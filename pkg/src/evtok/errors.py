"""Error taxonomy shared by the whole toolkit.

Every exception carries enough context (index, offset, line, field) to
locate the offending datum; messages are for humans, the attributes are
the contract.
"""


class EvtokError(Exception):
    """Base class for all toolkit errors."""


class StreamValidationError(EvtokError):
    """An event stream violated a structural invariant."""

    def __init__(self, index, message):
        self.index = index
        where = f" (index {index})" if index is not None else ""
        super().__init__(message + where)


class UnsortedAt(StreamValidationError):
    def __init__(self, index):
        super().__init__(index, "timestamp decreases")


class OutOfBoundsAt(StreamValidationError):
    def __init__(self, index=None, detail="event outside sensor bounds"):
        super().__init__(index, detail)


OutOfBounds = OutOfBoundsAt


class BadPolarityAt(StreamValidationError):
    def __init__(self, index):
        super().__init__(index, "polarity must be -1 or +1")


class ZeroPatchSize(EvtokError):
    def __init__(self):
        super().__init__("patch size must be >= 1")


class InvertedWindow(EvtokError):
    def __init__(self, t0, t1):
        self.t0, self.t1 = t0, t1
        super().__init__(f"window start {t0} exceeds end {t1}")


class InvalidConfig(EvtokError):
    def __init__(self, field, reason):
        self.field = field
        super().__init__(f"invalid config field {field!r}: {reason}")


class NonMonotonicTime(EvtokError):
    def __init__(self, t, previous):
        self.t, self.previous = t, previous
        super().__init__(f"event time {t} precedes previously pushed time {previous}")


class EmptyTimeRange(EvtokError):
    def __init__(self, what="input"):
        super().__init__(f"{what} spans no time range")


class EmptyStream(EvtokError):
    def __init__(self):
        super().__init__("operation requires a non-empty stream")


class MismatchedStreams(EvtokError):
    def __init__(self, message):
        super().__init__(message)


class NegativeDelta(EvtokError):
    def __init__(self, delta):
        self.delta = delta
        super().__init__(f"elapsed time must be >= 0, got {delta}")


class ZeroScale(EvtokError):
    def __init__(self):
        super().__init__("time scale divisor must be > 0")


class EventOutsidePatch(EvtokError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"token member {index} lies outside the token's patch")


class BadMagic(EvtokError):
    def __init__(self, detail):
        super().__init__(f"not an .evs file: {detail}")


class TruncatedFile(EvtokError):
    def __init__(self, offset, detail="unexpected end of file"):
        self.offset = offset
        super().__init__(f"{detail} at byte {offset}")


class ParseErrorAt(EvtokError):
    def __init__(self, line, detail):
        self.line = line
        super().__init__(f"line {line}: {detail}")


class SpecOutOfBounds(EvtokError):
    def __init__(self, detail):
        super().__init__(f"generator spec does not fit the sensor: {detail}")
