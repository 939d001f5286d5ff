"""Shared plumbing for experiment runners.

Runners fan per-sentence work over a bounded thread pool; results come
back in input order and all aggregation is sequential, so the worker
count never changes a report.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

from ..corpus import CaseRole, Chunk, Sentence, render_text
from ..scoring import DEFAULT_TIE_EPSILON, TIE, BidirectionalScorer, compare_texts

T = TypeVar("T")
R = TypeVar("R")

MODE_LM = "lm"
MODE_COUNT = "count"

#: Default canonical case order (time < location < subject < indirect < direct).
CANONICAL_ORDER = (CaseRole.TIM, CaseRole.LOC, CaseRole.NOM, CaseRole.DAT, CaseRole.ACC)


def check_mode(mode: str) -> str:
    if mode not in (MODE_LM, MODE_COUNT):
        raise ValueError(f"mode must be '{MODE_LM}' or '{MODE_COUNT}', got {mode!r}")
    return mode


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class SkipCounter(Counter):
    def skip(self, reason: str) -> None:
        self[reason] += 1

    def as_dict(self) -> dict[str, int]:
        return {k: self[k] for k in sorted(self)}


def double_object_indices(sentence: Sentence) -> tuple[int, int] | None:
    """(dat_index, acc_index) when the sentence has unique DAT/ACC siblings."""
    dats = sentence.role_indices(CaseRole.DAT)
    accs = sentence.role_indices(CaseRole.ACC)
    if len(dats) != 1 or len(accs) != 1:
        return None
    if sentence.chunks[dats[0]].head != sentence.chunks[accs[0]].head:
        return None
    return dats[0], accs[0]


def object_order_label(sentence: Sentence) -> str | None:
    indices = double_object_indices(sentence)
    if indices is None:
        return None
    dat, acc = indices
    return "ACC-DAT" if acc < dat else "DAT-ACC"


def chunk_head_noun(chunk: Chunk) -> str:
    """Content-word surface of a chunk: the last token that is not a particle."""
    for token in reversed(chunk.tokens):
        if token.particle is None:
            return token.surface
    return chunk.tokens[0].surface


def judge(
    scorer: BidirectionalScorer | None,
    labeled_sentences: Sequence[tuple[str, Sentence]],
    mode: str,
    count_winner: str | None,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
) -> str:
    """Winning label among variants: LM argmax, or the designated count-mode winner.

    Returns the TIE sentinel for LM ties and for count mode without a
    designated winner (a variant set in which no variant preserves the
    original order).
    """
    if mode == MODE_COUNT:
        return count_winner if count_winner is not None else TIE
    if scorer is None:
        raise ValueError("lm mode needs a scorer")
    result = compare_texts(
        scorer, [(label, render_text(s)) for label, s in labeled_sentences], tie_epsilon
    )
    return result.winner
