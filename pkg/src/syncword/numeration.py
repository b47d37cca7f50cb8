"""Base-k digit words and parallel-track tuple words, most significant digit first.

The canonical representation of 0 is the empty word.  Tuples are padded with
leading zeros to a common width and never start with an all-zero tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class MalformedInput(ValueError):
    """A digit word or file does not fit the declared base or track count."""


def encode_base_k(n: int, k: int) -> tuple[int, ...]:
    if k < 2:
        raise MalformedInput(f"base must be >= 2, got {k}")
    if n < 0:
        raise MalformedInput("negative integers have no base-k representation")
    digits = []
    while n:
        n, d = divmod(n, k)
        digits.append(d)
    return tuple(reversed(digits))


def decode_base_k(word: Iterable[int], k: int) -> int:
    n = 0
    for d in word:
        if not 0 <= d < k:
            raise MalformedInput(f"digit {d} out of range for base {k}")
        n = n * k + d
    return n


@dataclass(frozen=True)
class DigitAlphabet:
    """The t-fold product of {0, ..., k-1}; symbols are indexed so that the
    first track is the most significant digit of the index and the all-zero
    tuple is symbol 0."""

    base: int
    tracks: int

    def __post_init__(self):
        if self.base < 2 or self.tracks < 1:
            raise MalformedInput(f"bad alphabet base={self.base} tracks={self.tracks}")

    @property
    def size(self) -> int:
        return self.base**self.tracks

    def index(self, digits: Sequence[int]) -> int:
        if len(digits) != self.tracks:
            raise MalformedInput(f"expected {self.tracks} digits, got {len(digits)}")
        s = 0
        for d in digits:
            if not 0 <= d < self.base:
                raise MalformedInput(f"digit {d} out of range for base {self.base}")
            s = s * self.base + d
        return s

    def digits(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.tracks):
            index, d = divmod(index, self.base)
            out.append(d)
        return tuple(reversed(out))

    def symbols(self):
        return [self.digits(i) for i in range(self.size)]


@dataclass(frozen=True)
class TrackWord:
    base: int
    tracks: int
    symbols: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for sym in self.symbols:
            if len(sym) != self.tracks:
                raise MalformedInput(f"tuple {sym} does not have {self.tracks} entries")
            for d in sym:
                if not 0 <= d < self.base:
                    raise MalformedInput(f"digit {d} out of range for base {self.base}")

    def __len__(self):
        return len(self.symbols)

    @property
    def alphabet(self) -> DigitAlphabet:
        return DigitAlphabet(self.base, self.tracks)

    def indices(self) -> list[int]:
        a = self.alphabet
        return [a.index(s) for s in self.symbols]

    def values(self) -> tuple[int, ...]:
        return tuple(
            decode_base_k(project_track(self, i), self.base)
            for i in range(1, self.tracks + 1)
        )

    def padded(self, zeros: int) -> "TrackWord":
        z = (0,) * self.tracks
        return TrackWord(self.base, self.tracks, (z,) * zeros + self.symbols)

    def __str__(self):
        return format_track_word(self)


def encode_tuple(values: Sequence[int], k: int, width: int | None = None) -> TrackWord:
    """Encode ``values`` on parallel tracks.  ``width`` forces extra leading
    zero tuples (it must be at least the canonical width)."""
    if not values:
        raise MalformedInput("need at least one value")
    reps = [encode_base_k(v, k) for v in values]
    canon = max(len(r) for r in reps)
    if width is None:
        width = canon
    elif width < canon:
        raise MalformedInput(f"width {width} too small for {tuple(values)} in base {k}")
    padded = [(0,) * (width - len(r)) + r for r in reps]
    return TrackWord(k, len(values), tuple(zip(*padded)) if width else ())


def project_track(w: TrackWord, i: int) -> tuple[int, ...]:
    """The i-th coordinate stream (1-based), leading zeros kept."""
    if not 1 <= i <= w.tracks:
        raise IndexError(f"track {i} out of range 1..{w.tracks}")
    return tuple(s[i - 1] for s in w.symbols)


def format_digits(word: Sequence[int]) -> str:
    return "".join(_digit_char(d) for d in word)


def format_track_word(w: TrackWord) -> str:
    return "".join("[" + ",".join(str(d) for d in s) + "]" for s in w.symbols)


def parse_track_word(text: str, k: int) -> TrackWord:
    text = text.strip()
    if not text:
        raise MalformedInput("empty text; use an explicit tuple count")
    if not (text.startswith("[") and text.endswith("]")):
        raise MalformedInput(f"not a bracketed track word: {text!r}")
    parts = text[1:-1].split("][")
    syms = tuple(tuple(int(d) for d in p.split(",")) for p in parts)
    return TrackWord(k, len(syms[0]), syms)


def _digit_char(d: int) -> str:
    return "0123456789abcdefghijklmnopqrstuvwxyz"[d] if d < 36 else f"<{d}>"
