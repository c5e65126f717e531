"""Constructive equalization of two binary words of equal Hamming weight.

Constant columns are deleted first, letter by letter.  The reduced pair is
rotated into alternating runs ``1^m0 0^m1 1^m2 ...`` with the second row as the
column-wise complement.  Slots are then repaired one at a time by inserting
constant runs, and the schedule is lifted back through the deletions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .insertion import (
    InsertionSchedule,
    LengthMismatch,
    apply_schedule,
    delete_stages,
    lift_schedule,
)
from .words import (
    BINARY,
    CyclequalError,
    NotBinary,
    Word,
    WordMatrix,
    all_cyclically_equal,
    hamming_weight,
)


class HasConstantColumn(CyclequalError):
    pass


class NotTwoRows(CyclequalError):
    pass


class WeightMismatch(CyclequalError):
    pass


class ConsistencyAssertionFailed(AssertionError):
    """An internal invariant of the slot algorithm broke; this is a bug."""


@dataclass(frozen=True)
class RunForm:
    mu: tuple[int, ...]
    offset: int  # column j of the run form is column (j + offset) % n of the input

    @property
    def N(self) -> int:
        return len(self.mu) // 2

    def words(self) -> tuple[str, str]:
        top = "".join(("1" if i % 2 == 0 else "0") * m for i, m in enumerate(self.mu))
        return top, _complement(top)


def _complement(t: str) -> str:
    return t.translate(str.maketrans("01", "10"))


def _runs(t: str) -> list[int]:
    runs = []
    prev = None
    for ch in t:
        if ch == prev:
            runs[-1] += 1
        else:
            runs.append(1)
            prev = ch
    return runs


def _check_pair(m: WordMatrix):
    if m.k != 2:
        raise NotTwoRows(f"expected 2 rows, got {m.k}")
    if m.alphabet != BINARY:
        raise NotBinary("equalizer works on binary words only")


def to_run_form(m: WordMatrix) -> RunForm:
    _check_pair(m)
    top, bottom = m.texts
    if not top:
        raise CyclequalError("run form needs at least one column")
    if any(a == b for a, b in zip(top, bottom)):
        raise HasConstantColumn("reduced pair must not have constant columns")
    if "0" not in top or "1" not in top:
        raise WeightMismatch("a constant first row cannot balance its complement")
    n = len(top)
    offset = next(r for r in range(n) if top[r] == "1" and top[r - 1] == "0")
    rotated = top[offset:] + top[:offset]
    mu = tuple(_runs(rotated))
    # rotated starts a 1-run and ends a 0-run, so the run count is even
    return RunForm(mu, offset)


@dataclass(frozen=True)
class AdmissiblePair:
    """Block shape ``(nu', mu')``.

    Row 1 is block ``i`` repeated: ``x_i^{nu'_i} x_i^{mu'_i}``, row 2 is
    ``x_i^{nu'_i} y_i^{mu'_i}``, with ``x_i = 1`` for even ``i`` and ``0`` for odd
    ``i`` and ``y_i`` its complement.  The ``nu'`` blocks are inserted columns.
    """

    nu: tuple[int, ...]
    mu: tuple[int, ...]

    def words(self) -> tuple[str, str]:
        top, bottom = [], []
        for i, (v, m) in enumerate(zip(self.nu, self.mu)):
            x, y = ("1", "0") if i % 2 == 0 else ("0", "1")
            top.append(x * (v + m))
            bottom.append(x * v + y * m)
        return "".join(top), "".join(bottom)

    def slot_defect(self, i: int) -> int:
        L = len(self.mu)
        return self.nu[i] + self.mu[i] - self.mu[(i + 1) % L] - self.nu[(i + 2) % L]

    def check(self):
        if any(v < 0 for v in self.nu) or any(m < 1 for m in self.mu):
            raise ConsistencyAssertionFailed("pair is not admissible")
        top, bottom = self.words()
        if top.count("1") != bottom.count("1"):
            raise ConsistencyAssertionFailed("admissible pair lost weight balance")


@dataclass(frozen=True)
class SlotState:
    pair: AdmissiblePair
    consistent_upto: int | None = None

    @classmethod
    def from_run_form(cls, rf: RunForm) -> SlotState:
        return cls(AdmissiblePair((0,) * len(rf.mu), rf.mu))

    def assert_consistent(self):
        self.pair.check()
        if self.consistent_upto is None:
            return
        for i in range(self.consistent_upto + 1):
            if self.pair.slot_defect(i) != 0:
                raise ConsistencyAssertionFailed(f"slot {i} inconsistent")


def _repair(state: SlotState, j: int) -> SlotState:
    pair = state.pair
    k0 = pair.slot_defect(j)
    nu = list(pair.nu)
    if k0 > 0:
        nu[j + 2] += k0
    elif k0 < 0:
        for i in range(j % 2, j + 1, 2):
            nu[i] -= k0
    new = SlotState(AdmissiblePair(tuple(nu), pair.mu), j)
    new.assert_consistent()
    return new


def fix_slot0(state: SlotState) -> SlotState:
    """Make slot 0 consistent on a fresh state.

    With ``mu_0 > mu_1`` the excess ``1``s go right after the first 0-run,
    otherwise the shortfall is prepended.
    """
    if any(state.pair.nu):
        raise CyclequalError("fix_slot0 expects a fresh state")
    return _repair(state, 0)


def fix_slot(state: SlotState, j: int) -> SlotState:
    L = len(state.pair.mu)
    if not 1 <= j <= L - 3:
        raise CyclequalError(f"slot {j} outside 1..{L - 3}")
    if state.consistent_upto is None or state.consistent_upto < j - 1:
        raise CyclequalError(f"state must be consistent up to slot {j - 1}")
    return _repair(state, j)


def _unrotate(gaps: list[tuple[int, ...]], r: int) -> list[tuple[int, ...]]:
    # gaps address a matrix whose column j is column (j + r) % n of the target
    n = len(gaps) - 1
    if r == 0:
        return list(gaps)
    out: list[tuple[int, ...]] = [()] * (n + 1)
    for g in range(1, n):
        out[g] = gaps[(g - r) % n]
    out[r] = gaps[n] + gaps[0]
    out[n] = gaps[n - r]
    return out


def equalize_reduced(m: WordMatrix) -> tuple[InsertionSchedule, WordMatrix]:
    """Equalize a reduced pair (no constant columns, equal weights).

    Returns the normalized schedule for ``m`` and the equalized words in the
    input's column coordinates, before normalization; with a zero rotation
    offset these are exactly the words the slot repair builds.
    """
    _check_pair(m)
    w1, w2 = m.rows
    if hamming_weight(w1) != hamming_weight(w2):
        raise WeightMismatch("cyclically equalizable iff the Hamming weights agree")
    rf = to_run_form(m)
    state = SlotState.from_run_form(rf)
    if rf.N > 1:
        state = fix_slot0(state)
        for j in range(1, 2 * rf.N - 2):
            state = fix_slot(state, j)
    pair = state.pair
    # telescoping: the remaining slots must come out consistent on their own
    for i in range(len(pair.mu)):
        if pair.slot_defect(i) != 0:
            raise ConsistencyAssertionFailed(f"slot {i} inconsistent after repair")

    gaps: list[tuple[int, ...]] = [()] * (m.n + 1)
    pos = 0
    for i, (v, mu) in enumerate(zip(pair.nu, pair.mu)):
        if v:
            gaps[pos] = (1 if i % 2 == 0 else 0,) * v
        pos += mu
    raw = InsertionSchedule(m.n, tuple(_unrotate(gaps, rf.offset)))
    equalized = apply_schedule(m, raw)
    if not all_cyclically_equal(equalized):
        raise ConsistencyAssertionFailed("slot repair did not produce cyclically equal words")
    if rf.offset == 0 and equalized.texts != pair.words():
        raise ConsistencyAssertionFailed("schedule disagrees with the block shape")
    return raw.normalized(), equalized


@dataclass(frozen=True)
class EqualizeResult:
    schedule: InsertionSchedule
    equalized: WordMatrix
    deletion_order: str

    @property
    def final_length(self) -> int:
        return self.equalized.n

    def to_json(self) -> dict:
        return {
            "schedule": self.schedule.to_json(BINARY, delta=(0, 1)),
            "equalized": list(self.equalized.texts),
            "final_length": self.final_length,
            "deletion_order": self.deletion_order,
        }


ORDERS = ("10", "01")


def equalize_two_binary(w1: Word, w2: Word, deletion_order: str = "minimize") -> EqualizeResult:
    """Build a verified {0,1}-insertion making ``w1`` and ``w2`` cyclically equal.

    ``deletion_order`` is ``"10"`` (drop ``11`` columns first), ``"01"``, or
    ``"minimize"``, which tries both and keeps the shorter result.
    """
    if deletion_order == "minimize":
        results = [equalize_two_binary(w1, w2, order) for order in ORDERS]
        return min(results, key=lambda r: r.final_length)
    if deletion_order not in ORDERS:
        raise CyclequalError(f"unknown deletion order {deletion_order!r}")
    if w1.alphabet != BINARY or w2.alphabet != BINARY:
        raise NotBinary("equalizer works on binary words only")
    if len(w1) != len(w2):
        raise LengthMismatch("words must have equal length")
    if hamming_weight(w1) != hamming_weight(w2):
        raise WeightMismatch(
            f"weights {hamming_weight(w1)} and {hamming_weight(w2)} differ; "
            "two binary words are cyclically equalizable iff their weights agree"
        )
    m = WordMatrix((w1, w2))
    if all_cyclically_equal(m):
        return EqualizeResult(InsertionSchedule.empty(m.n), m, "")

    record = delete_stages(m, (int(ch) for ch in deletion_order))
    reduced_schedule, _ = equalize_reduced(record.reduced)
    schedule = lift_schedule(reduced_schedule, record)
    equalized = apply_schedule(m, schedule)
    if not all_cyclically_equal(equalized):
        raise ConsistencyAssertionFailed("lifted schedule does not equalize the input")
    return EqualizeResult(schedule, equalized, deletion_order)
