"""Command line interface.

Exit codes: 0 success, 1 domain-negative answer (not equal, not found,
violation), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from pathlib import Path

from .cards import (
    ScfoProtocol,
    card_lower_bound,
    count_nb,
    erase_check,
    five_card_trick,
    parse_function,
    scfo_search,
    scfo_verify,
)
from .equalizer import WeightMismatch, equalize_two_binary
from .insertion import parse_delta
from .oracle import BudgetExceeded, DEFAULT_MAX_STATES, SearchConfig, search_equalizable
from .words import Alphabet, CyclequalError, WordMatrix, cyclically_equal, parse_word, render

DEFAULT_SEED = 20240229

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _show(word, args) -> str:
    return render(word, getattr(args, "cards", False))


def _words(text_list, alphabet):
    return [parse_word(t, alphabet) for t in text_list]


def _split_words(args) -> list[str]:
    raw = args.words_opt or args.words
    if not raw:
        raise UsageError("no words given")
    return [t.strip() for t in raw.split(",")]


def cmd_check(args) -> int:
    alphabet = Alphabet(args.alphabet)
    w1, w2 = _words([args.w1, args.w2], alphabet)
    match = cyclically_equal(w1, w2)
    lines = [f"cyclically equal, shift {match.shift}" if match else "not cyclically equal"]
    _emit(args, {"equal": match.equal, "shift": match.shift}, lines)
    return EXIT_OK if match else EXIT_NEGATIVE


def cmd_equalize(args) -> int:
    w1, w2 = _words([args.w1, args.w2], Alphabet("01"))
    try:
        result = equalize_two_binary(w1, w2, args.order)
    except WeightMismatch as exc:
        _emit(args, {"error": "weight-mismatch", "message": str(exc)}, [f"not equalizable: {exc}"])
        return EXIT_NEGATIVE
    gaps = result.schedule.to_json(w1.alphabet, delta=(0, 1))["gaps"]
    lines = [
        f"deletion order: {result.deletion_order or 'none (already cyclically equal)'}",
        f"inserted letters: {result.schedule.total}",
        "schedule: " + (", ".join(f"{g['gap']}:{g['letters']}" for g in gaps) or "empty"),
        *(_show(w, args) for w in result.equalized.rows),
        f"final length: {result.final_length}",
    ]
    _emit(args, result.to_json(), lines)
    return EXIT_OK


def _search_config(args, alphabet) -> SearchConfig:
    delta = parse_delta(args.delta or alphabet.symbols, alphabet)
    dedup = "rotation" if args.canonical_dedup else "exact"
    return SearchConfig(delta, args.max_extra, dedup, args.max_states)


def cmd_oracle(args) -> int:
    alphabet = Alphabet(args.alphabet)
    m = WordMatrix(tuple(_words(_split_words(args), alphabet)))
    cfg = _search_config(args, alphabet)
    try:
        outcome = search_equalizable(m, cfg)
    except BudgetExceeded as exc:
        _emit(args, {"found": False, "budget_exceeded": exc.states, "bound": cfg.max_extra},
              [f"search stopped: {exc}"])
        return EXIT_NEGATIVE
    if outcome.found:
        gaps = outcome.schedule.to_json(alphabet, cfg.delta)["gaps"]
        lines = [
            f"found with {outcome.schedule.total} extra letters "
            f"({outcome.explored} states explored)",
            "schedule: " + (", ".join(f"{g['gap']}:{g['letters']}" for g in gaps) or "empty"),
        ]
    else:
        lines = [f"not found within bound {cfg.max_extra} ({outcome.explored} states explored)"]
    _emit(args, outcome.to_json(alphabet, cfg.delta), lines)
    return EXIT_OK if outcome.found else EXIT_NEGATIVE


def cmd_erase(args) -> int:
    alphabet = Alphabet(args.alphabet)
    words = _words(_split_words(args), alphabet)
    cfg = _search_config(args, alphabet)
    result = erase_check(words, cfg.delta, cfg.max_extra, dedup=cfg.dedup, max_states=cfg.max_states)
    payload = result.outcome.to_json(alphabet, cfg.delta)
    if not result.found:
        _emit(args, payload, [f"not found within bound {cfg.max_extra}"])
        return EXIT_NEGATIVE
    dist = sorted(result.distribution.items(), key=lambda kv: kv[0].text)
    payload["distribution"] = {w.text: str(p) for w, p in dist}
    gaps = payload["schedule"]["gaps"]
    lines = ["erasure possible",
             "schedule: " + (", ".join(f"{g['gap']}:{g['letters']}" for g in gaps) or "empty")]
    lines += [f"  {_show(w, args)}  {p}" for w, p in dist]
    _emit(args, payload, lines)
    return EXIT_OK


def _load_protocol(path_text: str) -> ScfoProtocol:
    path = Path(path_text)
    if path.exists():
        text = path.read_text()
    else:
        packaged = resources.files("cyclequal") / "fixtures" / path.name
        if not packaged.is_file():
            raise UsageError(f"no such protocol file: {path_text}")
        text = packaged.read_text()
    try:
        return ScfoProtocol.from_json(json.loads(text))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed protocol file: {exc}") from None


def cmd_scfo_verify(args) -> int:
    proto = _load_protocol(args.protocol)
    f = parse_function(args.fn)
    verdict = scfo_verify(proto, f)
    payload = verdict.to_json()
    payload["lower_bound"] = card_lower_bound(f)
    if verdict.ok:
        lines = [f"ok: cards={verdict.card_count} (lower bound {payload['lower_bound']})"]
    elif verdict.violation == "mismatch":
        lines = [f"violation: mismatch at x={''.join(map(str, verdict.at))}"]
    else:
        lines = [f"violation: {verdict.violation}"]
    _emit(args, payload, lines)
    return EXIT_OK if verdict.ok else EXIT_NEGATIVE


def cmd_scfo_search(args) -> int:
    f = parse_function(args.fn)
    start = 0
    if args.resume:
        if not args.checkpoint or not Path(args.checkpoint).exists():
            raise UsageError("--resume needs an existing --checkpoint file")
        state = json.loads(Path(args.checkpoint).read_text())
        if state.get("fn") != f.label or state.get("max_cards") != args.max_cards:
            raise UsageError("checkpoint belongs to a different search")
        start = int(state["next"])
    result = scfo_search(
        f, args.max_cards, start=start, checkpoint=args.checkpoint,
        threads=args.threads, max_states=args.max_states,
    )
    payload = {
        "fn": f.label,
        "max_cards": args.max_cards,
        "found": result.found,
        "protocol": result.protocol.to_json() if result.found else None,
        "perms_checked": result.perms_checked,
        "complete": result.complete,
    }
    if result.found:
        p = result.protocol
        lines = [
            f"found a {p.card_count}-card protocol for {f.label}",
            f"perm: {list(p.perm)}",
            "schedule: " + json.dumps(p.schedule.to_json(p.z0.alphabet, (0, 1))["gaps"]),
            f"z0: {_show(p.z0, args)}  z1: {_show(p.z1, args)}",
        ]
    elif result.complete:
        lines = [f"not found within {args.max_cards} cards ({result.perms_checked} permutations)"]
    else:
        lines = [f"interrupted after {result.perms_checked} permutations; resume with --resume"]
    _emit(args, payload, lines)
    return EXIT_OK if result.found else EXIT_NEGATIVE


def cmd_trick(args) -> int:
    rng = random.Random(args.seed)
    output, trace = five_card_trick(args.a, args.b, rng, seed=args.seed)
    lines = [f"{tag:>7}: {view if args.cards else view.translate(_PLAIN)}"
             for tag, view in trace.steps]
    lines.append(f"output: {output}")
    _emit(args, trace.to_json(), lines)
    return EXIT_OK


_PLAIN = str.maketrans({"♣": "0", "♥": "1"})


def cmd_lower_bound(args) -> int:
    f = parse_function(args.fn)
    n0, n1 = count_nb(f)
    bound = card_lower_bound(f)
    _emit(args, {"fn": f.label, "N0": n0, "N1": n1, "lower_bound": bound},
          [f"N0={n0} N1={n1} lower bound: {bound} cards"])
    return EXIT_OK


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError("bit must be 0 or 1")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclequal", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cards", action="store_true", help="render 0/1 as club/heart")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test two words for cyclic equality")
    p.add_argument("w1")
    p.add_argument("w2")
    p.add_argument("--alphabet", default="01")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("equalize", parents=[common], help="equalize two equal-weight binary words")
    p.add_argument("w1")
    p.add_argument("w2")
    p.add_argument("--order", default="minimize", choices=["10", "01", "minimize"])
    p.set_defaults(func=cmd_equalize)

    def search_opts(p):
        p.add_argument("words", nargs="?", help="comma-separated words")
        p.add_argument("--words", dest="words_opt")
        p.add_argument("--alphabet", default="01")
        p.add_argument("--delta", help="insertable letters (default: whole alphabet)")
        p.add_argument("--max-extra", type=int, required=True)
        p.add_argument("--canonical-dedup", action="store_true")
        p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)

    p = sub.add_parser("oracle", parents=[common], help="bounded equalizability search")
    search_opts(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("erase", parents=[common], help="information erasure by insertion")
    search_opts(p)
    p.set_defaults(func=cmd_erase)

    p = sub.add_parser("scfo-verify", parents=[common], help="verify a single-cut protocol")
    p.add_argument("protocol", help="protocol JSON file")
    p.add_argument("--fn", required=True, help="e.g. and:2, eq:3 or a truth table")
    p.set_defaults(func=cmd_scfo_verify)

    p = sub.add_parser("scfo-search", parents=[common], help="search single-cut protocols")
    p.add_argument("--fn", required=True)
    p.add_argument("--max-cards", type=int, required=True)
    p.add_argument("--checkpoint")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--threads", type=int)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_scfo_search)

    p = sub.add_parser("trick", parents=[common], help="run the five-card trick")
    p.add_argument("a", type=_bit)
    p.add_argument("b", type=_bit)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_trick)

    p = sub.add_parser("lower-bound", parents=[common], help="card lower bound max(N0, N1)")
    p.add_argument("--fn", required=True)
    p.set_defaults(func=cmd_lower_bound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CyclequalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
