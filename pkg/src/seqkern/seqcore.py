"""Alphabets, variable-length sequences, and stop-padding semantics.

Sequences are finite strings over a fixed alphabet.  All comparisons act
as if every sequence were followed by an infinite tail of the reserved
stop symbol ``$``; the padding is purely a comparison-time convention and
is never stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import DataError

STOP = "$"

#: Pad code used when sequences are packed into fixed-width integer arrays.
PAD_CODE = -1


class Alphabet:
    """An ordered set of distinct letters with a reserved stop symbol.

    Letters are arbitrary string tokens (single characters in all the
    file formats handled by the CLI).  The stop symbol ``$`` may not be a
    letter; it denotes the implicit padding past the end of a sequence.
    """

    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        letters = tuple(letters)
        if len(letters) == 0:
            raise DataError("alphabet must contain at least one letter")
        if len(set(letters)) != len(letters):
            raise DataError("alphabet letters must be distinct")
        if STOP in letters:
            raise DataError(f"the stop symbol {STOP!r} is reserved")
        self.letters = letters
        self._index = {b: i for i, b in enumerate(letters)}

    @property
    def size(self) -> int:
        return len(self.letters)

    @property
    def stop(self) -> str:
        return STOP

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise DataError(f"letter {letter!r} is not in the alphabet") from None

    def __contains__(self, letter: str) -> bool:
        return letter in self._index

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.letters)!r})"


DNA = Alphabet("ACGT")
PROTEIN = Alphabet("ACDEFGHIKLMNPQRSTVWY")
BINARY = Alphabet("AB")


class Sequence:
    """An immutable string of letters over one :class:`Alphabet`.

    Stored as integer letter codes for fast comparison.  The empty
    sequence is valid.  Slicing returns a new :class:`Sequence`.
    """

    __slots__ = ("alphabet", "codes", "_hash")

    def __init__(self, alphabet: Alphabet, codes: tuple[int, ...]):
        self.alphabet = alphabet
        self.codes = codes
        self._hash = hash((alphabet.letters, codes))

    @classmethod
    def from_letters(cls, alphabet: Alphabet, letters: Iterable[str]) -> "Sequence":
        return cls(alphabet, tuple(alphabet.index(b) for b in letters))

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(self.alphabet.letters[c] for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Sequence(self.alphabet, self.codes[item])
        return self.alphabet.letters[self.codes[item]]

    def __add__(self, other: "Sequence") -> "Sequence":
        _check_same_alphabet(self, other)
        return Sequence(self.alphabet, self.codes + other.codes)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Sequence)
            and self.alphabet.letters == other.alphabet.letters
            and self.codes == other.codes
        )

    def __lt__(self, other: "Sequence") -> bool:
        return (len(self), self.codes) < (len(other), other.codes)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if all(len(b) == 1 for b in self.alphabet.letters):
            return "".join(self.letters)
        return ",".join(self.letters)

    def __repr__(self) -> str:
        return f"Sequence({str(self) or chr(8709)!r})"


def seq(alphabet: Alphabet, letters: str | Iterable[str]) -> Sequence:
    """Convenience constructor: ``seq(DNA, "ATGC")``."""
    return Sequence.from_letters(alphabet, letters)


def empty(alphabet: Alphabet) -> Sequence:
    return Sequence(alphabet, ())


def _check_same_alphabet(x: Sequence, y: Sequence) -> None:
    if x.alphabet.letters != y.alphabet.letters:
        raise DataError("sequences use different alphabets")


def hamming_distance(x: Sequence, y: Sequence) -> int:
    """Mismatch count between two stop-padded sequences.

    Positions past the end of the shorter sequence compare a letter with
    the stop symbol and always count as mismatches.
    """
    _check_same_alphabet(x, y)
    m = min(len(x), len(y))
    d = max(len(x), len(y)) - m
    cx, cy = x.codes, y.codes
    for l in range(m):
        if cx[l] != cy[l]:
            d += 1
    return d


def window(x: Sequence, l: int, L: int) -> Optional[Sequence]:
    """The length-``L`` subsequence at position ``l``, or ``None``.

    Windows that would overlap the stop padding do not exist: they can
    never match a kmer over the alphabet.
    """
    if L < 1:
        raise ValueError("window length must be >= 1")
    if l < 0 or l + L > len(x):
        return None
    return x[l : l + L]


def enumerate_sequences(alphabet: Alphabet, L: int) -> list[Sequence]:
    """All ``|B|**L`` sequences of length exactly ``L``, lexicographic."""
    n = alphabet.size
    return [
        Sequence(alphabet, codes)
        for codes in itertools.product(range(n), repeat=L)
    ]


def enumerate_up_to(alphabet: Alphabet, L_max: int) -> list[Sequence]:
    """All sequences of length at most ``L_max``, shortest first."""
    out: list[Sequence] = []
    for L in range(L_max + 1):
        out.extend(enumerate_sequences(alphabet, L))
    return out


def encode_padded(seqs: list[Sequence], width: Optional[int] = None) -> np.ndarray:
    """Pack sequences into an ``(n, width)`` int array padded with -1.

    The pad code stands in for the stop symbol in vectorised kernels.
    """
    if width is None:
        width = max((len(s) for s in seqs), default=0)
    out = np.full((len(seqs), width), PAD_CODE, dtype=np.int64)
    for i, s in enumerate(seqs):
        if len(s) > width:
            raise ValueError("sequence longer than requested width")
        out[i, : len(s)] = s.codes
    return out


@dataclass(frozen=True)
class VectorSequence:
    """A sequence of real column vectors, one per position.

    A one-hot encoded :class:`VectorSequence` represents an ordinary
    sequence; general columns represent formal linear combinations of
    letters (a reparameterised alphabet).
    """

    alphabet: Alphabet
    columns: np.ndarray = field()  # shape (length, |B|)

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=float)
        if cols.ndim != 2 or cols.shape[1] != self.alphabet.size:
            if cols.size == 0:
                cols = cols.reshape(0, self.alphabet.size)
            else:
                raise DataError(
                    "columns must have shape (length, alphabet size)"
                )
        object.__setattr__(self, "columns", cols)

    @classmethod
    def one_hot(cls, x: Sequence) -> "VectorSequence":
        cols = np.zeros((len(x), x.alphabet.size))
        for l, c in enumerate(x.codes):
            cols[l, c] = 1.0
        return cls(x.alphabet, cols)

    def __len__(self) -> int:
        return self.columns.shape[0]

    def to_sequence(self) -> Sequence:
        """Decode a one-hot encoding back to its :class:`Sequence`."""
        codes = []
        for col in self.columns:
            hits = np.flatnonzero(col == 1.0)
            if len(hits) != 1 or abs(col.sum() - 1.0) > 0:
                raise DataError("not a one-hot encoding")
            codes.append(int(hits[0]))
        return Sequence(self.alphabet, tuple(codes))
