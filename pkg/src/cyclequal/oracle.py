"""Bounded breadth-first search for equalizing insertion schedules.

Each step inserts one constant column (a letter from ``delta``) at a gap
``1..L`` of the current words; gap 0 is never needed since a leading insertion
only rotates every row.  Layers are explored in order of total inserted letters,
so the first hit has the fewest extra letters within the bound.  A ``not found``
outcome only certifies that nothing exists up to ``bound``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable

from .insertion import InsertionSchedule
from .words import CyclequalError, WordMatrix, least_rotation

DEFAULT_MAX_STATES = 10**7
DEDUP_MODES = ("off", "exact", "rotation")


class BudgetExceeded(CyclequalError):
    def __init__(self, states: int, depth: int):
        super().__init__(f"state cap hit after {states} states (depth {depth})")
        self.states = states
        self.depth = depth


@dataclass(frozen=True)
class SearchConfig:
    delta: frozenset[int]
    max_extra: int
    dedup: str = "exact"
    max_states: int | None = DEFAULT_MAX_STATES
    prune: bool = True  # skip the search when letter counts already differ

    def __post_init__(self):
        if self.max_extra < 0:
            raise CyclequalError("max_extra must be non-negative")
        if self.dedup not in DEDUP_MODES:
            raise CyclequalError(f"dedup must be one of {DEDUP_MODES}")
        if not self.delta:
            raise CyclequalError("delta must be non-empty")


@dataclass(frozen=True)
class SearchOutcome:
    found: bool
    schedule: InsertionSchedule | None
    explored: int
    bound: int

    @property
    def depth(self) -> int | None:
        return self.schedule.total if self.schedule is not None else None

    def to_json(self, alphabet, delta=None) -> dict:
        return {
            "found": self.found,
            "schedule": self.schedule.to_json(alphabet, delta) if self.schedule else None,
            "explored": self.explored,
            "bound": self.bound,
        }


def _rows_equal(rows: tuple[str, ...]) -> bool:
    first = rows[0]
    doubled = first + first
    n = len(first)
    for r in rows[1:]:
        i = doubled.find(r)
        if i < 0 or i >= max(n, 1):
            return False
    return True


def _rotation_key(rows: tuple[str, ...]) -> tuple[str, ...]:
    cols = list(zip(*rows))
    s = least_rotation(cols)
    return tuple(r[s:] + r[:s] for r in rows)


def schedule_from_mask(base: int, row: str, mask: str, symbols: str) -> InsertionSchedule:
    # mask[p] == "o" marks an original column of the current words
    gaps: list[list[int]] = [[] for _ in range(base + 1)]
    g = 0
    for ch, flag in zip(row, mask):
        if flag == "o":
            g += 1
        else:
            gaps[g].append(symbols.index(ch))
    return InsertionSchedule(base, tuple(tuple(u) for u in gaps))


def bfs_schedules(
    rows: tuple[str, ...],
    letters: Iterable[str],
    max_extra: int,
    goal: Callable[[tuple[str, ...]], bool],
    dedup: str = "exact",
    max_states: int | None = DEFAULT_MAX_STATES,
) -> tuple[str | None, str | None, int]:
    """Search insertion sequences until ``goal(rows)`` holds.

    Returns ``(row0, mask, explored)`` of the first goal state, or
    ``(None, None, explored)``.  Rows are display strings.
    """
    letters = sorted(set(letters))
    start = (rows, "o" * len(rows[0]))
    explored = 1
    if goal(rows):
        return rows[0], start[1], explored
    seen: set = set()
    if dedup == "exact":
        seen.add(rows)
    elif dedup == "rotation":
        seen.add(_rotation_key(rows))
    layer = [start]
    for depth in range(1, max_extra + 1):
        nxt = []
        for cur, mask in layer:
            L = len(cur[0])
            for g in range(1, L + 1):
                for ch in letters:
                    child = tuple(r[:g] + ch + r[g:] for r in cur)
                    if dedup == "exact":
                        if child in seen:
                            continue
                        seen.add(child)
                    elif dedup == "rotation":
                        key = _rotation_key(child)
                        if key in seen:
                            continue
                        seen.add(key)
                    explored += 1
                    if max_states is not None and explored > max_states:
                        raise BudgetExceeded(explored, depth)
                    cmask = mask[:g] + "i" + mask[g:]
                    if goal(child):
                        return child[0], cmask, explored
                    nxt.append((child, cmask))
        layer = nxt
        if not layer:
            break
    return None, None, explored


def _letter_counts_agree(rows: tuple[str, ...]) -> bool:
    first = Counter(rows[0])
    return all(Counter(r) == first for r in rows[1:])


def search_equalizable(m: WordMatrix, cfg: SearchConfig) -> SearchOutcome:
    symbols = m.alphabet.symbols
    rows = m.texts
    if cfg.prune and not _letter_counts_agree(rows):
        # insertions add the same letters to every row, so count gaps persist
        return SearchOutcome(False, None, 1, cfg.max_extra)
    letters = [symbols[a] for a in sorted(cfg.delta)]
    row0, mask, explored = bfs_schedules(
        rows, letters, cfg.max_extra, _rows_equal, cfg.dedup, cfg.max_states
    )
    if row0 is None:
        return SearchOutcome(False, None, explored, cfg.max_extra)
    schedule = schedule_from_mask(m.n, row0, mask, symbols)
    return SearchOutcome(True, schedule, explored, cfg.max_extra)


def search_min_schedule(
    m: WordMatrix, delta: Iterable[int], max_extra: int, **kwargs
) -> SearchOutcome:
    """Fewest-extra-letters schedule within ``max_extra`` (breadth-first order)."""
    return search_equalizable(m, SearchConfig(frozenset(delta), max_extra, **kwargs))
