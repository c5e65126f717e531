"""Letters, words, word matrices and cyclic equality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class CyclequalError(ValueError):
    """Base class for domain errors raised by this package."""


class UnknownSymbol(CyclequalError):
    def __init__(self, position: int, char: str):
        super().__init__(f"unknown symbol {char!r} at position {position}")
        self.position = position
        self.char = char


class NotBinary(CyclequalError):
    pass


class EmptyWord(CyclequalError):
    pass


CARD_SYMBOLS = {"0": "♣", "1": "♥"}  # club = 0, heart = 1


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of letters; letter ``i`` is displayed as ``symbols[i]``."""

    symbols: str

    def __post_init__(self):
        if not self.symbols:
            raise CyclequalError("alphabet must contain at least one letter")
        if len(set(self.symbols)) != len(self.symbols):
            raise CyclequalError(f"duplicate symbols in alphabet {self.symbols!r}")

    def __len__(self):
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    @property
    def is_binary(self) -> bool:
        return len(self.symbols) == 2


BINARY = Alphabet("01")


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    alphabet: Alphabet = BINARY

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        size = len(self.alphabet)
        for i, a in enumerate(letters):
            if not 0 <= a < size:
                raise CyclequalError(f"letter index {a} at position {i} outside alphabet")

    @classmethod
    def from_text(cls, text: str, alphabet: Alphabet = BINARY) -> Word:
        return parse_word(text, alphabet)

    @property
    def text(self) -> str:
        return "".join(self.alphabet.symbols[a] for a in self.letters)

    def __str__(self):
        return self.text

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def rotate(self, shift: int) -> Word:
        """Return ``a_shift a_shift+1 ... a_shift-1`` (left rotation)."""
        if not self.letters:
            return self
        s = shift % len(self.letters)
        return Word(self.letters[s:] + self.letters[:s], self.alphabet)


def parse_word(text: str, alphabet: Alphabet = BINARY) -> Word:
    letters = []
    for pos, ch in enumerate(text):
        try:
            letters.append(alphabet.index(ch))
        except ValueError:
            raise UnknownSymbol(pos, ch) from None
    return Word(tuple(letters), alphabet)


def render(word: Word, cards: bool = False) -> str:
    """Display string of ``word``; with ``cards`` binary letters show as suits."""
    text = word.text
    if cards and word.alphabet == BINARY:
        return "".join(CARD_SYMBOLS[ch] for ch in text)
    return text


def hamming_weight(w: Word) -> int:
    if not w.alphabet.is_binary:
        raise NotBinary(f"alphabet {w.alphabet.symbols!r} is not binary")
    return sum(w.letters)


@dataclass(frozen=True)
class CyclicMatch:
    equal: bool
    shift: int | None = None

    def __bool__(self):
        return self.equal


def _find_rotation(t1: str, t2: str) -> int:
    # index of t2 in t1+t1, restricted to offsets < len(t1); -1 if absent
    if len(t1) != len(t2):
        return -1
    if not t1:
        return 0
    i = (t1 + t1).find(t2)
    return i if 0 <= i < len(t1) else -1


def cyclically_equal(w1: Word, w2: Word) -> CyclicMatch:
    """Decide whether ``w2`` is a rotation of ``w1``.

    The witness ``shift`` is the smallest ``d`` with ``w2[j] == w1[(j + d) % n]``
    for every ``j``.  Words of different length are simply not equal.
    """
    if w1.alphabet != w2.alphabet:
        raise CyclequalError("words are over different alphabets")
    d = _find_rotation(w1.text, w2.text)
    if d < 0:
        return CyclicMatch(False)
    return CyclicMatch(True, d)


def rotation_class_size(w: Word) -> int:
    """Number of distinct rotations of ``w``; this is its smallest period."""
    if not w.letters:
        raise EmptyWord("rotation class of the empty word is undefined")
    t = w.text
    return (t + t).find(t, 1)


def least_rotation(seq: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) * 2
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            # here i == -1
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_rotation(w: Word) -> Word:
    return w.rotate(least_rotation(w.letters))


@dataclass(frozen=True)
class WordMatrix:
    """``k`` words of equal length viewed as a ``k x n`` matrix."""

    rows: tuple[Word, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise CyclequalError("a word matrix needs at least one row")
        n = len(rows[0])
        alphabet = rows[0].alphabet
        for r in rows:
            if len(r) != n:
                raise CyclequalError("all rows of a word matrix must have equal length")
            if r.alphabet != alphabet:
                raise CyclequalError("all rows of a word matrix must share an alphabet")

    @classmethod
    def from_strings(cls, texts: Iterable[str], alphabet: Alphabet = BINARY) -> WordMatrix:
        return cls(tuple(parse_word(t, alphabet) for t in texts))

    @property
    def alphabet(self) -> Alphabet:
        return self.rows[0].alphabet

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(r.text for r in self.rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r.letters[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return list(zip(*(r.letters for r in self.rows)))

    def rotate(self, shift: int) -> WordMatrix:
        """Rotate all rows left by ``shift`` simultaneously (a column rotation)."""
        return WordMatrix(tuple(r.rotate(shift) for r in self.rows))


def all_cyclically_equal(m: WordMatrix) -> bool:
    # ~ is an equivalence relation, so comparing every row to row 0 suffices
    first = m.rows[0].text
    return all(_find_rotation(first, r.text) >= 0 for r in m.rows[1:])
