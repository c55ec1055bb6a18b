"""
Timed sequences and their probabilistic embedding.

A timed sequence is an ordered list of ``(event type, timestamp)`` pairs over
a finite alphabet. Embedding every event as a one-hot vector turns it into a
probabilistic timed sequence, i.e. a sequence of type distributions with
timestamps, which is the space where averaging happens.

Timestamps are floats expressed in days.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, NamedTuple, Sequence

import numpy as np

logger = logging.getLogger(__name__)

DIST_ATOL = 1e-9


class InvalidAlphabetError(ValueError):
    """An event type does not belong to the alphabet."""


class ParseError(ValueError):
    """A JSON Lines record could not be decoded."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(ValueError):
    """A decoded record violates a sequence invariant."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of event-type names with a bijective index lookup."""

    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(str(s) for s in self.symbols)
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbols in alphabet: {symbols}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def from_symbols(cls, symbols: Iterable[str]) -> "Alphabet":
        """Build the alphabet of the distinct symbols in lexicographic order."""
        return cls(tuple(sorted(set(symbols))))

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise InvalidAlphabetError(f"unknown event type {symbol!r}") from None

    def symbol(self, index: int) -> str:
        if not 0 <= index < len(self.symbols):
            raise InvalidAlphabetError(f"type index {index} outside [0, {len(self.symbols)})")
        return self.symbols[index]


class TimedEvent(NamedTuple):
    type_index: int
    t: float


@dataclass(frozen=True)
class TimedSequence:
    """Events sorted by timestamp, no duplicated ``(type, t)`` pair.

    Construction sorts the events (stable, so ties keep input order) and
    rejects non-finite timestamps and duplicated pairs.
    """

    id: str
    events: tuple[TimedEvent, ...]

    def __post_init__(self):
        events = tuple(TimedEvent(int(e[0]), float(e[1])) for e in self.events)
        for e in events:
            if not math.isfinite(e.t):
                raise ValidationError(f"sequence {self.id!r}: non-finite timestamp {e.t}")
            if e.type_index < 0:
                raise ValidationError(f"sequence {self.id!r}: negative type index")
        events = tuple(sorted(events, key=lambda e: e.t))
        if len(set(events)) != len(events):
            raise ValidationError(f"sequence {self.id!r}: duplicated (type, t) event")
        object.__setattr__(self, "events", events)

    @classmethod
    def from_pairs(cls, id: str, pairs: Iterable[tuple[str, float]], alphabet: Alphabet):
        """Build from ``(symbol, t)`` pairs, e.g. ``[("S", 1.0), ("C", 2.0)]``."""
        return cls(id, tuple(TimedEvent(alphabet.index(s), t) for s, t in pairs))

    def __len__(self):
        return len(self.events)

    def __getitem__(self, i):
        return self.events[i]

    @property
    def times(self) -> np.ndarray:
        return np.array([e.t for e in self.events], dtype=float)

    @property
    def types(self) -> np.ndarray:
        return np.array([e.type_index for e in self.events], dtype=int)


class ProbEvent(NamedTuple):
    dist: np.ndarray
    t: float


class ProbTimedSequence:
    """Sequence of event-type distributions with timestamps.

    Stored column-wise: ``dists`` is an ``(L, n)`` array whose rows lie on the
    probability simplex, ``times`` an ``(L,)`` array sorted ascending. Both
    arrays are read-only.

    Parameters
    ----------
    dists : array_like, shape (L, n)
    times : array_like, shape (L,)
    n_types : int, optional
        Alphabet size, required when ``L == 0``.
    """

    __slots__ = ("dists", "times")

    def __init__(self, dists, times, n_types: int | None = None):
        times = np.array(times, dtype=float).reshape(-1)
        dists = np.array(dists, dtype=float)
        if dists.size == 0:
            if n_types is None:
                n_types = dists.shape[1] if dists.ndim == 2 else 0
            dists = dists.reshape(0, n_types)
        if dists.ndim != 2 or dists.shape[0] != times.shape[0]:
            raise ValueError(
                f"dists of shape {dists.shape} do not match {times.shape[0]} timestamps"
            )
        if not np.all(np.isfinite(times)):
            raise ValidationError("non-finite timestamp in probabilistic sequence")
        if np.any(np.diff(times) < 0):
            raise ValidationError("probabilistic sequence timestamps are not sorted")
        if len(times):
            if np.any(dists < -DIST_ATOL) or np.any(dists > 1 + DIST_ATOL):
                raise ValidationError("distribution component outside [0, 1]")
            if np.any(np.abs(dists.sum(axis=1) - 1.0) > DIST_ATOL):
                raise ValidationError("distribution does not sum to 1")
        dists.flags.writeable = False
        times.flags.writeable = False
        self.dists = dists
        self.times = times

    @property
    def n_types(self) -> int:
        return self.dists.shape[1]

    def __len__(self):
        return self.times.shape[0]

    def __getitem__(self, i) -> ProbEvent:
        return ProbEvent(self.dists[i], float(self.times[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, ProbTimedSequence):
            return NotImplemented
        return (
            self.dists.shape == other.dists.shape
            and np.array_equal(self.dists, other.dists)
            and np.array_equal(self.times, other.times)
        )

    def __repr__(self):
        return f"ProbTimedSequence(len={len(self)}, n_types={self.n_types})"

    def allclose(self, other: "ProbTimedSequence", atol: float = 1e-9) -> bool:
        return (
            self.dists.shape == other.dists.shape
            and np.allclose(self.dists, other.dists, atol=atol, rtol=0)
            and np.allclose(self.times, other.times, atol=atol, rtol=0)
        )

    def argmax_types(self) -> np.ndarray:
        return np.argmax(self.dists, axis=1) if len(self) else np.zeros(0, dtype=int)


def embed(seq: TimedSequence, alphabet: Alphabet) -> ProbTimedSequence:
    """One-hot embedding of a timed sequence.

    >>> ab = Alphabet(("S", "R", "C", "P"))
    >>> s1 = TimedSequence.from_pairs("s1", [("S", 1), ("C", 2), ("R", 4.5)], ab)
    >>> embed(s1, ab).dists.astype(int).tolist()
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0]]
    """
    n = len(alphabet)
    types = seq.types
    if len(types) and types.max() >= n:
        raise InvalidAlphabetError(
            f"sequence {seq.id!r} uses type index {types.max()} but alphabet has {n} symbols"
        )
    dists = np.zeros((len(seq), n))
    dists[np.arange(len(seq)), types] = 1.0
    return ProbTimedSequence(dists, seq.times, n_types=n)


def extract_argmax(pseq: ProbTimedSequence, id: str = "") -> TimedSequence:
    """Inverse of :func:`embed` on one-hot inputs (most probable type per event)."""
    return TimedSequence(id, tuple(zip(pseq.argmax_types().tolist(), pseq.times.tolist())))


# --- JSON Lines I/O ---------------------------------------------------------


def parse_sequences(stream: IO) -> tuple[Alphabet, list[TimedSequence]]:
    """Read sequences in JSON Lines format.

    Each line is ``{"id": str, "events": [{"e": str, "t": number}, ...]}``.
    Blank lines are skipped. The alphabet is the sorted set of every event
    name seen. Duplicated ``(e, t)`` pairs inside one sequence are dropped
    with a warning.

    Parameters
    ----------
    stream : file-like
        Text or binary stream.

    Raises
    ------
    ParseError
        Malformed line; carries the 1-based line number.
    ValidationError
        Non-finite timestamp.
    """
    records = []
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or "id" not in obj or "events" not in obj:
            raise ParseError(lineno, "expected an object with 'id' and 'events'")
        if not isinstance(obj["events"], list):
            raise ParseError(lineno, "'events' must be a list")
        pairs = []
        for ev in obj["events"]:
            if not isinstance(ev, dict) or "e" not in ev or "t" not in ev:
                raise ParseError(lineno, "event must be an object with 'e' and 't'")
            t = ev["t"]
            if isinstance(t, bool) or not isinstance(t, (int, float)):
                raise ParseError(lineno, f"timestamp {t!r} is not a number")
            if not math.isfinite(t):
                raise ValidationError(f"line {lineno}: non-finite timestamp {t!r}")
            pairs.append((str(ev["e"]), float(t)))
        records.append((lineno, str(obj["id"]), pairs))

    ids = [r[1] for r in records]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise ValidationError(f"duplicated sequence ids: {dup}")

    alphabet = Alphabet.from_symbols(s for _, _, pairs in records for s, _ in pairs)
    sequences = []
    for lineno, sid, pairs in records:
        seen = set()
        unique = []
        for p in pairs:
            if p in seen:
                logger.warning("line %d: dropping duplicated event %r in sequence %r", lineno, p, sid)
                continue
            seen.add(p)
            unique.append(p)
        sequences.append(TimedSequence.from_pairs(sid, unique, alphabet))
    return alphabet, sequences


def format_sequence(seq: TimedSequence, alphabet: Alphabet) -> str:
    events = [{"e": alphabet.symbol(e.type_index), "t": e.t} for e in seq.events]
    return json.dumps({"id": seq.id, "events": events})


def write_sequences(stream: IO[str], sequences: Sequence[TimedSequence], alphabet: Alphabet):
    for seq in sequences:
        stream.write(format_sequence(seq, alphabet) + "\n")


def barycenter_to_json(pseq: ProbTimedSequence, alphabet: Alphabet) -> dict:
    """Barycenter as ``{"events": [{"t": .., "dist": {symbol: p}}]}``, zeros omitted."""
    if pseq.n_types != len(alphabet):
        raise InvalidAlphabetError("barycenter dimension does not match the alphabet")
    events = []
    for d, t in zip(pseq.dists, pseq.times):
        dist = {alphabet.symbol(k): float(d[k]) for k in np.flatnonzero(d)}
        events.append({"t": float(t), "dist": dist})
    return {"events": events}


def barycenter_from_json(obj: dict, alphabet: Alphabet) -> ProbTimedSequence:
    events = obj["events"]
    dists = np.zeros((len(events), len(alphabet)))
    times = np.zeros(len(events))
    for i, ev in enumerate(events):
        times[i] = float(ev["t"])
        for sym, p in ev["dist"].items():
            dists[i, alphabet.index(sym)] = float(p)
    return ProbTimedSequence(dists, times, n_types=len(alphabet))
