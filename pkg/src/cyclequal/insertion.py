"""Simultaneous insertion schedules, constant-column deletion and lifting.

An :class:`InsertionSchedule` over a base length ``n`` holds ``n + 1`` inserted
words ``u_0 .. u_n``; gap ``g`` sits just before letter ``g`` (gap ``n`` is the
end of the word).  Applying it to ``k`` rows inserts the same letters at the
same places in every row, i.e. adds constant columns to the word matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .words import (
    Alphabet,
    CyclequalError,
    UnknownSymbol,
    Word,
    WordMatrix,
    all_cyclically_equal,
)


class LengthMismatch(CyclequalError):
    pass


class LetterOutsideDelta(CyclequalError):
    pass


class InconsistentRecord(CyclequalError):
    pass


def make_delta(letters: Iterable[int], alphabet: Alphabet) -> frozenset[int]:
    delta = frozenset(letters)
    if not delta:
        raise CyclequalError("delta must be a non-empty set of letters")
    if any(not 0 <= a < len(alphabet) for a in delta):
        raise CyclequalError("delta contains a letter outside the alphabet")
    return delta


def parse_delta(text: str, alphabet: Alphabet) -> frozenset[int]:
    letters = []
    for pos, ch in enumerate(text):
        try:
            letters.append(alphabet.index(ch))
        except ValueError:
            raise UnknownSymbol(pos, ch) from None
    return make_delta(letters, alphabet)


def delta_text(delta: Iterable[int], alphabet: Alphabet) -> str:
    return "".join(alphabet.symbols[a] for a in sorted(delta))


@dataclass(frozen=True)
class InsertionSchedule:
    base_length: int
    gaps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gaps = tuple(tuple(u) for u in self.gaps)
        object.__setattr__(self, "gaps", gaps)
        if self.base_length < 0 or len(gaps) != self.base_length + 1:
            raise CyclequalError(
                f"schedule over {self.base_length} letters needs {self.base_length + 1} gaps"
            )

    @classmethod
    def empty(cls, n: int) -> InsertionSchedule:
        return cls(n, ((),) * (n + 1))

    @classmethod
    def from_mapping(cls, n: int, inserts: Mapping[int, Iterable[int]]) -> InsertionSchedule:
        gaps = [()] * (n + 1)
        for g, letters in inserts.items():
            if not 0 <= g <= n:
                raise CyclequalError(f"gap {g} outside [0, {n}]")
            gaps[g] = tuple(letters)
        return cls(n, tuple(gaps))

    @property
    def total(self) -> int:
        return sum(len(u) for u in self.gaps)

    @property
    def letters_used(self) -> frozenset[int]:
        return frozenset(a for u in self.gaps for a in u)

    def is_normal(self) -> bool:
        return not self.gaps[0]

    def normalized(self) -> InsertionSchedule:
        """Move ``u_0`` behind ``u_n``.

        Every resulting row is the old row rotated by ``|u_0|``, so whether the
        rows are cyclically equal does not change.
        """
        if self.is_normal():
            return self
        gaps = list(self.gaps)
        gaps[-1] = gaps[-1] + gaps[0]
        gaps[0] = ()
        return InsertionSchedule(self.base_length, tuple(gaps))

    def to_json(self, alphabet: Alphabet, delta: Iterable[int] | None = None) -> dict:
        s = self.normalized()
        sym = alphabet.symbols
        if delta is None:
            delta = s.letters_used or range(len(alphabet))
        return {
            "base_length": s.base_length,
            "delta": delta_text(delta, alphabet),
            "gaps": [
                {"gap": g, "letters": "".join(sym[a] for a in u)}
                for g, u in enumerate(s.gaps)
                if u
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping, alphabet: Alphabet) -> InsertionSchedule:
        """Parse schedule JSON; non-normal input is normalized."""
        n = int(obj["base_length"])
        delta = parse_delta(obj.get("delta") or alphabet.symbols, alphabet)
        inserts: dict[int, tuple[int, ...]] = {}
        for entry in obj.get("gaps", []):
            g = int(entry["gap"])
            if g in inserts:
                raise CyclequalError(f"gap {g} listed twice")
            letters = tuple(_parse_letters(entry["letters"], alphabet))
            if not set(letters) <= delta:
                raise LetterOutsideDelta(f"gap {g} uses letters outside delta")
            inserts[g] = letters
        return cls.from_mapping(n, inserts).normalized()


def _parse_letters(text: str, alphabet: Alphabet) -> list[int]:
    out = []
    for pos, ch in enumerate(text):
        try:
            out.append(alphabet.index(ch))
        except ValueError:
            raise UnknownSymbol(pos, ch) from None
    return out


def apply_schedule(
    m: WordMatrix, s: InsertionSchedule, delta: Iterable[int] | None = None
) -> WordMatrix:
    """Row ``i`` becomes ``u_0 a_{i,0} u_1 ... a_{i,n-1} u_n``."""
    if s.base_length != m.n:
        raise LengthMismatch(f"schedule is for length {s.base_length}, matrix has {m.n}")
    if delta is not None and not s.letters_used <= frozenset(delta):
        raise LetterOutsideDelta("schedule inserts letters outside delta")
    rows = []
    for r in m.rows:
        out = list(s.gaps[0])
        for a, u in zip(r.letters, s.gaps[1:]):
            out.append(a)
            out.extend(u)
        rows.append(Word(tuple(out), r.alphabet))
    return WordMatrix(tuple(rows))


def verify_schedule(
    m: WordMatrix, s: InsertionSchedule, delta: Iterable[int] | None = None
) -> bool:
    return all_cyclically_equal(apply_schedule(m, s, delta))


@dataclass(frozen=True)
class DeletionStage:
    """One constant-column deletion of letter ``letter``.

    ``counts[g]`` is how many ``letter`` columns sat at gap ``g`` of the reduced
    matrix.  ``nu`` is the longest run of deleted columns, read cyclically (the
    run before the first kept column joins the run after the last one).
    """

    letter: int
    counts: tuple[int, ...]
    nu: int
    before: WordMatrix

    @property
    def deleted(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class DeletionRecord:
    stages: tuple[DeletionStage, ...]
    reduced: WordMatrix

    @property
    def original(self) -> WordMatrix:
        return self.stages[0].before if self.stages else self.reduced


def _cyclic_max_run(counts: tuple[int, ...]) -> int:
    if len(counts) == 1:
        return counts[0]
    inner = counts[1:-1]
    return max(max(inner, default=0), counts[0] + counts[-1])


def delete_constant_columns(m: WordMatrix, c: int) -> tuple[WordMatrix, DeletionStage]:
    keep = []
    counts = [0]
    for j, col in enumerate(m.columns()):
        if all(a == c for a in col):
            counts[-1] += 1
        else:
            keep.append(j)
            counts.append(0)
    rows = tuple(Word(tuple(r.letters[j] for j in keep), r.alphabet) for r in m.rows)
    counts_t = tuple(counts)
    stage = DeletionStage(c, counts_t, _cyclic_max_run(counts_t), m)
    return WordMatrix(rows), stage


def delete_stages(m: WordMatrix, order: Iterable[int]) -> DeletionRecord:
    """Delete constant columns letter by letter in ``order``."""
    stages = []
    for c in order:
        m, stage = delete_constant_columns(m, c)
        stages.append(stage)
    return DeletionRecord(tuple(stages), m)


def restore(reduced: WordMatrix, stage: DeletionStage) -> WordMatrix:
    """Undo ``stage``: put the deleted constant columns back."""
    if len(stage.counts) != reduced.n + 1:
        raise InconsistentRecord("stage does not match the reduced matrix length")
    s = InsertionSchedule(reduced.n, tuple((stage.letter,) * k for k in stage.counts))
    return apply_schedule(reduced, s)


def interleave_constant(m: WordMatrix, c: int, mu: int) -> WordMatrix:
    """Follow every letter of every row with ``c`` repeated ``mu`` times."""
    if mu < 0:
        raise CyclequalError("mu must be non-negative")
    if mu == 0:
        return m
    pad = (c,) * mu
    rows = []
    for r in m.rows:
        out = []
        for a in r.letters:
            out.append(a)
            out.extend(pad)
        rows.append(Word(tuple(out), r.alphabet))
    return WordMatrix(tuple(rows))


def _lift_stage(s: InsertionSchedule, stage: DeletionStage) -> InsertionSchedule:
    """Turn a schedule for the post-deletion matrix into one for ``stage.before``.

    Every letter ``b`` of the equalized words becomes ``b c^nu``; the result is
    rotated so the deleted columns in front of the first kept column line up
    with padding, and the original matrix is embedded as a subsequence.
    """
    before = stage.before
    n_after = len(stage.counts) - 1
    if n_after == 0:
        # every column was deleted: all rows are c^n and already equal
        return InsertionSchedule.empty(before.n)
    c, nu = stage.letter, stage.nu
    s = s.normalized()

    # tokens: ("o", j) is kept column j of the reduced matrix, ("i", a) a constant letter
    pad = [("i", c)] * nu
    tokens: list[tuple[str, int]] = []
    for j in range(n_after):
        tokens.append(("o", j))
        tokens.extend(pad)
        for d in s.gaps[j + 1]:
            tokens.append(("i", d))
            tokens.extend(pad)
    lead = stage.counts[0]
    if lead:
        tokens = tokens[-lead:] + tokens[:-lead]

    # columns of the pre-deletion matrix in order
    source: list[tuple[str, int]] = []
    for j in range(n_after):
        source.extend([("d", c)] * stage.counts[j])
        source.append(("o", j))
    source.extend([("d", c)] * stage.counts[n_after])

    gaps: list[list[int]] = [[] for _ in range(before.n + 1)]
    p = 0
    for kind, val in tokens:
        if p < len(source):
            skind, sval = source[p]
            if kind == "o":
                if skind != "o" or sval != val:
                    raise InconsistentRecord("lifted word does not embed the original columns")
                p += 1
                continue
            if skind == "d" and val == c:
                p += 1
                continue
        elif kind == "o":
            raise InconsistentRecord("lifted word does not embed the original columns")
        gaps[p].append(val)
    if p != len(source):
        raise InconsistentRecord("deleted run longer than the stage padding")
    return InsertionSchedule(before.n, tuple(tuple(u) for u in gaps)).normalized()


def lift_schedule(reduced_schedule: InsertionSchedule, record: DeletionRecord) -> InsertionSchedule:
    """Carry an equalizing schedule for ``record.reduced`` back to the original.

    Stages are undone last-deleted-first.  The lifted words are each stage's
    letter-wise expansion ``b -> b c^nu`` of the equalized words (up to a
    common rotation), so the expansion factors multiply across stages.
    """
    if reduced_schedule.base_length != record.reduced.n:
        raise LengthMismatch("schedule does not match the reduced matrix")
    s = reduced_schedule
    after = record.reduced
    for stage in reversed(record.stages):
        if restore(after, stage) != stage.before:
            raise InconsistentRecord("replaying the stage does not reproduce its matrix")
        s = _lift_stage(s, stage)
        after = stage.before
    return s
