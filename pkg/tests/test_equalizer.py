import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import brute_all_equal, brute_shift, random_equal_weight_pair
from cyclequal.equalizer import (
    AdmissiblePair,
    HasConstantColumn,
    NotTwoRows,
    SlotState,
    WeightMismatch,
    equalize_reduced,
    equalize_two_binary,
    fix_slot,
    fix_slot0,
    to_run_form,
)
from cyclequal.insertion import LengthMismatch, apply_schedule, verify_schedule
from cyclequal.oracle import search_min_schedule
from cyclequal.words import Alphabet, NotBinary, WordMatrix, parse_word

WORKED = ("10101001010110101000", "00011110010001000111")
REDUCED = ("11000111011000", "00111000100111")


def M(*texts):
    return WordMatrix.from_strings(texts)


def W(text):
    return parse_word(text)


def slot_words(state):
    return state.pair.words()


class TestRunForm:
    def test_worked(self):
        rf = to_run_form(M(*REDUCED))
        assert rf.mu == (2, 3, 3, 1, 2, 3) and rf.N == 3 and rf.offset == 0
        assert rf.words() == REDUCED

    def test_smallest(self):
        rf = to_run_form(M("10", "01"))
        assert rf.mu == (1, 1) and rf.offset == 0

    def test_rotated(self):
        rf = to_run_form(M("01", "10"))
        assert rf.mu == (1, 1) and rf.offset == 1

    @settings(max_examples=200)
    @given(st.text(alphabet="01", min_size=2, max_size=14).filter(lambda t: "0" in t and "1" in t))
    def test_reconstructs_rotation(self, top):
        bottom = top.translate(str.maketrans("01", "10"))
        rf = to_run_form(M(top, bottom))
        r = rf.offset
        assert rf.words()[0] == top[r:] + top[:r]
        assert all(m >= 1 for m in rf.mu)

    def test_errors(self):
        with pytest.raises(HasConstantColumn):
            to_run_form(M("110", "011"))
        with pytest.raises(NotTwoRows):
            to_run_form(M("10", "01", "10"))
        with pytest.raises(NotBinary):
            to_run_form(WordMatrix.from_strings(["12", "21"], Alphabet("012")))


class TestSlots:
    def start(self):
        return SlotState.from_run_form(to_run_form(M(*REDUCED)))

    def test_worked_steps(self):
        s0 = fix_slot0(self.start())
        assert slot_words(s0) == ("111000111011000", "100111000100111")
        s1 = fix_slot(s0, 1)
        assert slot_words(s1) == slot_words(s0)  # already consistent
        s2 = fix_slot(s1, 2)
        assert slot_words(s2) == ("11100011101111000", "10011100011100111")
        s3 = fix_slot(s2, 3)
        assert slot_words(s3) == ("1110000111001111000", "1000111000011100111")
        assert s3.pair.nu == (1, 1, 0, 1, 2, 0)

    def test_slot0_equal_runs(self):
        s = SlotState(AdmissiblePair((0, 0, 0, 0), (1, 1, 2, 2)))
        assert fix_slot0(s).pair.nu == (0, 0, 0, 0)

    def test_slot0_top_run_longer(self):
        s = SlotState(AdmissiblePair((0,) * 4, (3, 1, 1, 3)))
        after = fix_slot0(s)
        assert after.pair.nu == (0, 0, 2, 0)
        top, bottom = after.pair.words()
        # 1^3 0^1 then the inserted 1^2 before the third block
        assert top == "1110" + "11" + "1" + "000"
        assert bottom == "0001" + "11" + "0" + "111"

    def test_fix_slot_requires_prefix(self):
        with pytest.raises(Exception):
            fix_slot(self.start(), 1)

    @settings(max_examples=200)
    @given(st.lists(st.integers(1, 4), min_size=2, max_size=6))
    def test_admissible_and_consistent_throughout(self, half):
        # build mu with equal even/odd sums by pairing a shuffle of the even runs
        rng = random.Random(sum(half))
        odd = half[:]
        rng.shuffle(odd)
        mu = tuple(x for pair in zip(half, odd) for x in pair)
        state = fix_slot0(SlotState(AdmissiblePair((0,) * len(mu), mu)))
        for j in range(1, len(mu) - 2):
            state = fix_slot(state, j)
            assert all(v >= 0 for v in state.pair.nu)
            top, bottom = state.pair.words()
            assert top.count("1") == bottom.count("1")
            for i in range(j + 1):
                assert state.pair.slot_defect(i) == 0
        # telescoping: every slot consistent, words cyclically equal
        assert all(state.pair.slot_defect(i) == 0 for i in range(len(mu)))
        assert brute_all_equal(state.pair.words())


class TestEqualizeReduced:
    def test_worked(self):
        s, out = equalize_reduced(M(*REDUCED))
        assert out.texts == ("1110000111001111000", "1000111000011100111")
        assert brute_shift(*out.texts) == 15
        assert s.total == 5 and s.is_normal()
        assert verify_schedule(M(*REDUCED), s)

    def test_n1(self):
        s, out = equalize_reduced(M("10", "01"))
        assert s.total == 0 and out.texts == ("10", "01")

    def test_one_zero_at_gap1(self):
        s, out = equalize_reduced(M("101100", "010011"))
        assert out.texts == ("1001100", "0010011")
        assert s.gaps[1] == (0,) and s.total == 1
        assert brute_shift(*out.texts) == 5

    def test_weight_mismatch(self):
        with pytest.raises(WeightMismatch):
            equalize_reduced(M("1101", "0010"))

    @settings(max_examples=200)
    @given(st.integers(0, 2**31), st.integers(1, 7))
    def test_rotated_inputs(self, seed, N):
        rng = random.Random(seed)
        ones = [1] * N + [0] * N
        rng.shuffle(ones)
        top = "".join(map(str, ones))
        bottom = top.translate(str.maketrans("01", "10"))
        m = M(top, bottom)
        s, out = equalize_reduced(m)
        assert brute_all_equal(out.texts)
        assert verify_schedule(m, s)


class TestPipeline:
    def test_worked_orders(self):
        w1, w2 = map(W, WORKED)
        assert equalize_two_binary(w1, w2, "10").final_length == 114
        assert equalize_two_binary(w1, w2, "01").final_length == 76
        best = equalize_two_binary(w1, w2)
        assert best.final_length == 76 and best.deletion_order == "01"

    def test_identical(self):
        r = equalize_two_binary(W("1010"), W("1010"))
        assert r.schedule.total == 0 and r.final_length == 4

    def test_already_rotations(self):
        r = equalize_two_binary(W("1100"), W("0110"), "10")
        assert r.schedule.total == 0
        assert verify_schedule(M("1100", "0110"), r.schedule)

    def test_reduces_to_smallest_pair(self):
        # drop the 11 and 00 columns, reduced pair is 10/01, lift verifies
        r = equalize_two_binary(W("1100"), W("0101"), "10")
        assert verify_schedule(M("1100", "0101"), r.schedule)

    def test_errors(self):
        with pytest.raises(WeightMismatch):
            equalize_two_binary(W("110"), W("100"))
        with pytest.raises(LengthMismatch):
            equalize_two_binary(W("10"), W("100"))
        t = Alphabet("012")
        with pytest.raises(NotBinary):
            equalize_two_binary(parse_word("12", t), parse_word("21", t))

    def test_json(self):
        r = equalize_two_binary(W("101100"), W("010011"), "10")
        obj = r.to_json()
        assert obj["final_length"] == 7 and obj["deletion_order"] == "10"
        assert obj["schedule"]["gaps"] == [{"gap": 1, "letters": "0"}]

    def test_exhaustive_small(self):
        # every equal-weight pair up to length 6
        for n in range(1, 7):
            for a in itertools.product("01", repeat=n):
                for b in itertools.product("01", repeat=n):
                    if a.count("1") != b.count("1"):
                        continue
                    w1, w2 = W("".join(a)), W("".join(b))
                    r = equalize_two_binary(w1, w2)
                    assert brute_all_equal(apply_schedule(M(w1.text, w2.text), r.schedule).texts)

    def test_random_soundness(self, rng):
        for _ in range(500):
            a, b = random_equal_weight_pair(rng, rng.randint(1, 12))
            r = equalize_two_binary(W(a), W(b), rng.choice(["10", "01", "minimize"]))
            assert verify_schedule(M(a, b), r.schedule)


class TestOracleAgreement:
    def test_small_pairs(self, rng):
        for _ in range(60):
            a, b = random_equal_weight_pair(rng, rng.randint(1, 6))
            r = equalize_two_binary(W(a), W(b))
            bound = r.final_length - len(a)
            found = search_min_schedule(M(a, b), {0, 1}, bound)
            assert found.found and found.depth <= bound
            assert verify_schedule(M(a, b), found.schedule)
