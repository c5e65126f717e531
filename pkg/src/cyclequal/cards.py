"""Card protocols built on cyclic equality.

Cards are binary letters with club = 0 and heart = 1; a commitment to ``x`` is
the pair ``(x, 1 - x)``.  A random cut rotates a face-down sequence by a
uniform secret amount.  Every probability here is an exact ``Fraction``
obtained by enumerating all cut values.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Iterable, Sequence

from .insertion import InsertionSchedule, apply_schedule
from .oracle import (
    DEFAULT_MAX_STATES,
    SearchConfig,
    SearchOutcome,
    bfs_schedules,
    schedule_from_mask,
    search_equalizable,
)
from .words import (
    BINARY,
    CyclequalError,
    EmptyWord,
    Word,
    WordMatrix,
    cyclically_equal,
    parse_word,
    render,
    rotation_class_size,
)

log = logging.getLogger(__name__)


class FaceUpCard(CyclequalError):
    pass


class ArityMismatch(CyclequalError):
    pass


@dataclass(frozen=True)
class CardSequence:
    cards: Word
    face_up: tuple[bool, ...] = ()

    def __post_init__(self):
        if not self.face_up:
            object.__setattr__(self, "face_up", (False,) * len(self.cards))
        elif len(self.face_up) != len(self.cards):
            raise CyclequalError("face flags must match the number of cards")

    def public_view(self, cards: bool = True) -> str:
        shown = render(self.cards, cards)
        return "".join(ch if up else "?" for ch, up in zip(shown, self.face_up))

    def open_all(self) -> CardSequence:
        return CardSequence(self.cards, (True,) * len(self.cards))


def random_cut(seq: CardSequence, rng) -> CardSequence:
    """Rotate a face-down sequence by ``r = rng.randrange(n)``."""
    n = len(seq.cards)
    if n == 0:
        raise EmptyWord("cannot cut an empty sequence")
    if any(seq.face_up):
        raise FaceUpCard("random cut requires every card face down")
    r = rng.randrange(n)
    return CardSequence(seq.cards.rotate(r), seq.face_up)


@dataclass
class ProtocolTrace:
    """Public record of a run: step tags with the table as an observer sees it."""

    rng_seed: int | None
    steps: list[tuple[str, str]] = field(default_factory=list)
    opened: Word | None = None
    output: int | None = None

    def record(self, tag: str, seq: CardSequence):
        self.steps.append((tag, seq.public_view()))

    def to_json(self) -> dict:
        return {
            "seed": self.rng_seed,
            "steps": [{"op": tag, "cards": view} for tag, view in self.steps],
            "opened": self.opened.text if self.opened is not None else None,
            "output": self.output,
        }


def commit(bits: Sequence[int]) -> Word:
    """Face values of the commitments ``x_1 !x_1 x_2 !x_2 ...``."""
    letters = []
    for b in bits:
        if b not in (0, 1):
            raise CyclequalError(f"input bit must be 0 or 1, got {b!r}")
        letters += [b, 1 - b]
    return Word(tuple(letters), BINARY)


FIVE_CARD_ONE = parse_word("01110")


def five_card_trick(a: int, b: int, rng, seed: int | None = None) -> tuple[int, ProtocolTrace]:
    trace = ProtocolTrace(seed)
    seq = CardSequence(commit((a, b)))
    trace.record("commit", seq)
    x = seq.cards.letters
    seq = CardSequence(Word((x[1], x[0]) + x[2:]))
    trace.record("swap", seq)
    y = seq.cards.letters
    seq = CardSequence(Word(y[:2] + (1,) + y[2:]))
    trace.record("insert", seq)
    seq = random_cut(seq, rng)
    trace.record("cut", seq)
    seq = seq.open_all()
    trace.record("open", seq)
    trace.opened = seq.cards
    trace.output = 1 if cyclically_equal(FIVE_CARD_ONE, seq.cards) else 0
    return trace.output, trace


def open_distribution(s: Word) -> dict[Word, Fraction]:
    """Exact law of the opened word after one random cut of ``s``."""
    n = len(s)
    if n == 0:
        raise EmptyWord("cannot open an empty sequence")
    dist: dict[Word, Fraction] = {}
    for r in range(n):
        w = s.rotate(r)
        dist[w] = dist.get(w, Fraction(0)) + Fraction(1, n)
    assert all(p == Fraction(1, rotation_class_size(s)) for p in dist.values())
    return dist


@dataclass(frozen=True)
class ErasureResult:
    outcome: SearchOutcome
    distribution: dict[Word, Fraction] | None

    @property
    def found(self) -> bool:
        return self.outcome.found


def erase_check(words: Sequence[Word], delta: Iterable[int], max_extra: int, **kwargs) -> ErasureResult:
    """Find insertions after which one random cut hides which word was laid out."""
    m = WordMatrix(tuple(words))
    outcome = search_equalizable(m, SearchConfig(frozenset(delta), max_extra, **kwargs))
    if not outcome.found:
        return ErasureResult(outcome, None)
    laid_out = apply_schedule(m, outcome.schedule)
    dists = [open_distribution(w) for w in laid_out.rows]
    if any(d != dists[0] for d in dists[1:]):
        raise AssertionError("equalized words must open identically")
    return ErasureResult(outcome, dists[0])


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table indexed by ``x`` with ``x_1`` as the least significant bit."""

    n: int
    table: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != 2**self.n:
            raise CyclequalError(f"truth table must have {2 ** self.n} entries")
        if any(v not in (0, 1) for v in self.table):
            raise CyclequalError("truth table entries must be bits")

    def __call__(self, x: Sequence[int]) -> int:
        return self.table[sum(bit << i for i, bit in enumerate(x))]

    def inputs(self):
        """All inputs ``x`` ordered by their table index."""
        for idx in range(2**self.n):
            yield tuple((idx >> i) & 1 for i in range(self.n))

    @property
    def label(self) -> str:
        return self.name or "".join(map(str, self.table))


BUILTINS = {
    "and": lambda x: int(all(x)),
    "xor": lambda x: sum(x) % 2,
    "eq": lambda x: int(len(set(x)) <= 1),
    "or": lambda x: int(any(x)),
}


def builtin_function(name: str, n: int) -> BooleanFunction:
    try:
        fn = BUILTINS[name]
    except KeyError:
        raise CyclequalError(f"unknown function {name!r}; choose from {sorted(BUILTINS)}") from None
    if n < 1:
        raise CyclequalError("arity must be at least 1")
    table = []
    for idx in range(2**n):
        table.append(fn(tuple((idx >> i) & 1 for i in range(n))))
    return BooleanFunction(n, tuple(table), f"{name}:{n}")


def parse_function(spec: str) -> BooleanFunction:
    """``name:n`` for a builtin, or a truth-table bitstring of length ``2^n``."""
    if ":" in spec:
        name, _, arity = spec.partition(":")
        try:
            n = int(arity)
        except ValueError:
            raise CyclequalError(f"bad arity in {spec!r}") from None
        return builtin_function(name, n)
    if not spec or set(spec) - {"0", "1"}:
        raise CyclequalError(f"bad function spec {spec!r}")
    n = len(spec).bit_length() - 1
    if 2**n != len(spec):
        raise CyclequalError("truth table length must be a power of two")
    return BooleanFunction(n, tuple(int(ch) for ch in spec))


def count_nb(f: BooleanFunction) -> tuple[int, int]:
    n1 = sum(f.table)
    return len(f.table) - n1, n1


def card_lower_bound(f: BooleanFunction) -> int:
    return max(count_nb(f))


@dataclass(frozen=True)
class ScfoProtocol:
    """Permute the commitments, insert fixed cards, cut once, open everything.

    ``perm[i]`` is the index into ``x_1 !x_1 ... x_n !x_n`` that lands at
    position ``i``.
    """

    n: int
    perm: tuple[int, ...]
    schedule: InsertionSchedule
    z0: Word
    z1: Word

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        if sorted(self.perm) != list(range(2 * self.n)):
            raise CyclequalError(f"perm must be a permutation of 0..{2 * self.n - 1}")
        if self.schedule.base_length != 2 * self.n:
            raise CyclequalError("schedule must be over the 2n permuted cards")

    @property
    def card_count(self) -> int:
        return 2 * self.n + self.schedule.total

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "perm": list(self.perm),
            "schedule": self.schedule.to_json(BINARY, delta=(0, 1)),
            "z0": self.z0.text,
            "z1": self.z1.text,
        }

    @classmethod
    def from_json(cls, obj) -> ScfoProtocol:
        return cls(
            int(obj["n"]),
            tuple(int(p) for p in obj["perm"]),
            InsertionSchedule.from_json(obj["schedule"], BINARY),
            parse_word(obj["z0"]),
            parse_word(obj["z1"]),
        )


def scfo_build_s(p: ScfoProtocol, x: Sequence[int]) -> Word:
    if len(x) != p.n:
        raise ArityMismatch(f"protocol takes {p.n} bits, got {len(x)}")
    base = commit(x).letters
    y = Word(tuple(base[i] for i in p.perm))
    return apply_schedule(WordMatrix((y,)), p.schedule).rows[0]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    card_count: int | None = None
    violation: str | None = None  # "z-words-cyclically-equal" or "mismatch"
    at: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "card_count": self.card_count,
            "violation": self.violation,
            "at": list(self.at) if self.at is not None else None,
        }


def scfo_verify(p: ScfoProtocol, f: BooleanFunction) -> Verdict:
    if p.n != f.n:
        raise ArityMismatch(f"protocol arity {p.n} != function arity {f.n}")
    if cyclically_equal(p.z0, p.z1):
        return Verdict(False, violation="z-words-cyclically-equal")
    z = (p.z0, p.z1)
    classes: tuple[set, set] = (set(), set())
    for x in f.inputs():
        s = scfo_build_s(p, x)
        b = f(x)
        if not cyclically_equal(s, z[b]):
            return Verdict(False, violation="mismatch", at=x)
        classes[b].add(s)
    count = p.card_count
    # k distinct cyclically equal words need length >= k
    for cls in classes:
        if len(cls) > count:
            raise AssertionError("distinct rotations exceed the card count")
    if count < card_lower_bound(f):
        raise AssertionError("verified protocol beats the max(N0, N1) card bound")
    return Verdict(True, card_count=count)


def _classes_goal(classes: tuple[tuple[int, ...], tuple[int, ...]]):
    def goal(rows: tuple[str, ...]) -> bool:
        reps = []
        for cls in classes:
            if not cls:
                continue
            first = rows[cls[0]]
            doubled = first + first
            for i in cls[1:]:
                if doubled.find(rows[i]) < 0:
                    return False
            reps.append(doubled)
        if len(reps) == 2:
            # equal lengths, so substring of the doubled word means rotation
            return reps[0].find(rows[classes[1][0]]) < 0
        return True

    return goal


def _protocol_for_perm(f: BooleanFunction, perm: tuple[int, ...], max_extra: int, max_states):
    inputs = list(f.inputs())
    rows = []
    for x in inputs:
        base = commit(x).letters
        rows.append("".join(str(base[i]) for i in perm))
    classes = tuple(tuple(i for i, x in enumerate(inputs) if f(x) == b) for b in (0, 1))
    row0, mask, explored = bfs_schedules(
        tuple(rows), "01", max_extra, _classes_goal(classes), "exact", max_states
    )
    if row0 is None:
        return None, explored
    schedule = schedule_from_mask(2 * f.n, row0, mask, "01")
    z = []
    for b, cls in enumerate(classes):
        if cls:
            s = apply_schedule(WordMatrix((parse_word(rows[cls[0]]),)), schedule).rows[0]
            z.append(s)
        else:
            z.append(None)
    length = 2 * f.n + schedule.total
    # a constant function has an empty class; any word outside the other class works
    z = [w if w is not None else Word((0,) * length) for w in z]
    return ScfoProtocol(f.n, perm, schedule, z[0], z[1]), explored


@dataclass(frozen=True)
class ScfoSearchResult:
    protocol: ScfoProtocol | None
    perms_checked: int
    explored: int
    complete: bool  # False when interrupted before the sweep finished

    @property
    def found(self) -> bool:
        return self.protocol is not None


def _search_chunk(args):
    f, perms, max_extra, max_states = args
    explored = 0
    for i, perm in enumerate(perms):
        proto, e = _protocol_for_perm(f, perm, max_extra, max_states)
        explored += e
        if proto is not None:
            return proto, i + 1, explored
    return None, len(perms), explored


def thread_cap() -> int:
    raw = os.environ.get("CYCLEQUAL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring bad CYCLEQUAL_THREADS=%r", raw)
    return 1


def scfo_search(
    f: BooleanFunction,
    max_cards: int,
    *,
    start: int = 0,
    checkpoint: str | os.PathLike | None = None,
    threads: int | None = None,
    chunk: int = 64,
    max_states: int | None = DEFAULT_MAX_STATES,
) -> ScfoSearchResult:
    """Sweep permutations in lexicographic order for a single-cut protocol.

    For each permutation, breadth-first insertion search (at most
    ``max_cards - 2n`` extra cards) looks for a layout where each output class
    is one rotation class and the two classes differ.  The first hit in
    lexicographic order is returned whatever the worker count.  With
    ``checkpoint`` the index of the next unchecked permutation is written after
    every batch so an interrupted sweep can resume via ``start``.
    """
    base = 2 * f.n
    if max_cards < base:
        raise CyclequalError(f"need at least {base} cards for {f.n} commitments")
    max_extra = max_cards - base
    threads = threads or thread_cap()
    total = factorial(base)
    perms = itertools.islice(itertools.permutations(range(base)), start, None)
    checked = start
    explored = 0

    def save(next_index: int):
        if checkpoint is not None:
            Path(checkpoint).write_text(
                json.dumps(
                    {"fn": f.label, "max_cards": max_cards, "next": next_index, "total": total}
                )
            )

    def batches():
        while True:
            block = list(itertools.islice(perms, chunk))
            if not block:
                return
            yield (f, block, max_extra, max_states)

    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        results = pool.map(_search_chunk, batches()) if pool else map(_search_chunk, batches())
        for proto, used, e in results:
            checked += used
            explored += e
            if proto is not None:
                save(checked)
                return ScfoSearchResult(proto, checked, explored, True)
            save(checked)
    except KeyboardInterrupt:
        save(checked)
        return ScfoSearchResult(None, checked, explored, False)
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    return ScfoSearchResult(None, checked, explored, True)


def scfo_sweep(f: BooleanFunction, max_cards: int, *, max_states: int | None = DEFAULT_MAX_STATES):
    """Yield ``(perm, protocol or None)`` for every permutation, in order.

    Serial and exhaustive; useful for counting all solutions in a small space.
    """
    base = 2 * f.n
    if max_cards < base:
        raise CyclequalError(f"need at least {base} cards for {f.n} commitments")
    for perm in itertools.permutations(range(base)):
        proto, _ = _protocol_for_perm(f, perm, max_cards - base, max_states)
        yield perm, proto


def five_card_trick_protocol() -> ScfoProtocol:
    return ScfoProtocol(
        2,
        (1, 0, 2, 3),
        InsertionSchedule.from_mapping(4, {2: (1,)}),
        parse_word("10101"),
        parse_word("01110"),
    )
