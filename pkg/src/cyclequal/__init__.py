"""Cyclic equalizability of words and single-cut card protocols."""

from .cards import (
    BooleanFunction,
    ScfoProtocol,
    card_lower_bound,
    count_nb,
    erase_check,
    five_card_trick,
    open_distribution,
    random_cut,
    scfo_build_s,
    scfo_search,
    scfo_sweep,
    scfo_verify,
)
from .equalizer import equalize_reduced, equalize_two_binary
from .insertion import (
    DeletionRecord,
    InsertionSchedule,
    apply_schedule,
    delete_constant_columns,
    interleave_constant,
    lift_schedule,
    verify_schedule,
)
from .oracle import SearchConfig, search_equalizable, search_min_schedule
from .words import (
    BINARY,
    Alphabet,
    Word,
    WordMatrix,
    all_cyclically_equal,
    cyclically_equal,
    hamming_weight,
    parse_word,
    rotation_class_size,
)

__version__ = "0.1.0"
