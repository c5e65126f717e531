import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import brute_all_equal, random_equal_weight_pair
from cyclequal.insertion import InsertionSchedule, apply_schedule, delete_stages, lift_schedule, verify_schedule
from cyclequal.oracle import (
    BudgetExceeded,
    SearchConfig,
    schedule_from_mask,
    search_min_schedule,
)
from cyclequal.words import Alphabet, BINARY, CyclequalError, WordMatrix

FIVE_CARD = ("1001", "1010", "0101")
COUNTER = ("1001", "1010", "1100")


def M(*texts, alphabet=BINARY):
    return WordMatrix.from_strings(texts, alphabet)


def all_schedules(n, letters, extra):
    """Every distinct gap assignment with ``extra`` letters in gaps 1..n."""
    for combo in itertools.product(range(1, n + 1), repeat=extra):
        if list(combo) != sorted(combo):
            continue
        for word in itertools.product(letters, repeat=extra):
            gaps = [[] for _ in range(n + 1)]
            for g, a in zip(combo, word):
                gaps[g].append(a)
            yield InsertionSchedule(n, tuple(tuple(u) for u in gaps))


def brute_min(m, letters, bound):
    for extra in range(bound + 1):
        for s in all_schedules(m.n, letters, extra):
            if brute_all_equal(apply_schedule(m, s).texts):
                return extra
    return None


class TestExamples:
    def test_five_card_set(self):
        out = search_min_schedule(M(*FIVE_CARD), {1}, 2)
        assert out.found and out.depth == 1
        assert out.schedule.gaps[2] == (1,)
        assert apply_schedule(M(*FIVE_CARD), out.schedule).texts == ("10101", "10110", "01101")

    def test_five_card_zero_at_end(self):
        out = search_min_schedule(M(*FIVE_CARD), {0}, 4)
        assert out.depth == 1 and out.schedule.gaps[4] == (0,)

    def test_counterexample_no_zero_schedule(self):
        out = search_min_schedule(M(*COUNTER), {0}, 8, prune=False)
        assert not out.found and out.bound == 8

    def test_counterexample_with_ones(self):
        out = search_min_schedule(M(*COUNTER), {1}, 8)
        assert out.depth == 2
        assert apply_schedule(M(*COUNTER), out.schedule).texts == ("101011", "101110", "111010")

    def test_singleton(self):
        out = search_min_schedule(M("0110"), {0}, 3)
        assert out.found and out.depth == 0

    def test_already_rotations(self):
        assert search_min_schedule(M("1100", "0011"), {0, 1}, 0).depth == 0

    def test_pair_one_letter(self):
        out = search_min_schedule(M("101100", "010011"), {0, 1}, 3)
        assert out.depth == 1

    def test_ternary(self):
        t = Alphabet("012")
        out = search_min_schedule(M("12", "21", "12", alphabet=t), {0}, 2)
        assert out.found and out.depth == 0
        out = search_min_schedule(M("0120", "0210", alphabet=t), {0, 1, 2}, 3)
        assert out.found
        assert verify_schedule(M("0120", "0210", alphabet=t), out.schedule)

    def test_unequal_counts_pruned(self):
        out = search_min_schedule(M("110", "100"), {0, 1}, 5)
        assert not out.found and out.explored == 1

    def test_json(self):
        out = search_min_schedule(M(*FIVE_CARD), {1}, 2)
        obj = out.to_json(BINARY, delta=(1,))
        assert obj["found"] and obj["schedule"]["gaps"] == [{"gap": 2, "letters": "1"}]


class TestConfig:
    def test_bad_config(self):
        with pytest.raises(CyclequalError):
            SearchConfig(frozenset({0}), -1)
        with pytest.raises(CyclequalError):
            SearchConfig(frozenset({0}), 1, dedup="fuzzy")
        with pytest.raises(CyclequalError):
            SearchConfig(frozenset(), 1)

    def test_budget(self):
        with pytest.raises(BudgetExceeded) as exc:
            search_min_schedule(M(*COUNTER), {0}, 8, dedup="off", max_states=100)
        assert exc.value.states > 100

    def test_mask_decoding(self):
        s = schedule_from_mask(3, "10011", "oiooi", "01")
        assert s.gaps == ((), (0,), (), (1,))


class TestAgainstBrute:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_raw_exhaustive_small(self, n):
        # no pruning, every pair, every schedule up to n + 2 letters
        for a, b in itertools.product(itertools.product("01", repeat=n), repeat=2):
            m = M("".join(a), "".join(b))
            bound = n + 2
            got = search_min_schedule(m, {0, 1}, bound, prune=False)
            assert got.depth == brute_min(m, (0, 1), bound)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31))
    def test_minimal_depth(self, seed):
        rng = random.Random(seed)
        k, n = rng.randint(1, 3), rng.randint(1, 4)
        m = M(*("".join(rng.choice("01") for _ in range(n)) for _ in range(k)))
        delta = rng.choice([(0,), (1,), (0, 1)])
        got = search_min_schedule(m, delta, 2)
        assert got.depth == brute_min(m, delta, 2)
        if got.found:
            assert verify_schedule(m, got.schedule, delta=set(delta))


class TestDedup:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**31))
    def test_modes_agree(self, seed):
        rng = random.Random(seed)
        k, n = rng.randint(2, 3), rng.randint(2, 5)
        m = M(*("".join(rng.choice("01") for _ in range(n)) for _ in range(k)))
        depths = set()
        for mode in ("off", "exact", "rotation"):
            out = search_min_schedule(m, {0, 1}, 2, dedup=mode, prune=False)
            depths.add(out.depth)
            if out.found:
                assert verify_schedule(m, out.schedule)
        assert len(depths) == 1

    def test_rotation_explores_less(self):
        m = M(*COUNTER)
        counts = [search_min_schedule(m, {0, 1}, 4, dedup=d, prune=False).explored
                  for d in ("off", "exact", "rotation")]
        assert counts[0] > counts[1] > counts[2]

    def test_deterministic(self):
        runs = {search_min_schedule(M("110100", "001011"), {0, 1}, 3).schedule for _ in range(3)}
        assert len(runs) == 1


class TestMonotone:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31))
    def test_larger_delta_never_hurts(self, seed):
        rng = random.Random(seed)
        m = M(*random_equal_weight_pair(rng, rng.randint(2, 5)))
        one = search_min_schedule(m, {0}, 3)
        both = search_min_schedule(m, {0, 1}, 3)
        if one.found:
            assert both.found and both.depth <= one.depth

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31))
    def test_lift_of_found(self, seed):
        rng = random.Random(seed)
        a, b = random_equal_weight_pair(rng, rng.randint(2, 8))
        m = M(a, b)
        record = delete_stages(m, [1, 0])
        found = search_min_schedule(record.reduced, {0, 1}, 3)
        if found.found:
            assert verify_schedule(m, lift_schedule(found.schedule, record))
