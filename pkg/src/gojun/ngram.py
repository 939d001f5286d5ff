"""Character / pre-tokenized n-gram language models.

Forward and backward models share one implementation: a backward model is
trained on reversed unit sequences and scores reversed input, so its
log-probability of a text equals a forward model's log-probability of the
reversed text on the reversed corpus, exactly.

Smoothing is interpolated absolute discounting with a single discount d,
grounded in a uniform distribution over the prediction vocabulary, which
keeps every conditional distribution normalized and strictly positive.
A discount of 0 disables smoothing (plain maximum likelihood; unseen
events then score -inf), which exists for exact count-level checks.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

MODEL_FORMAT_KEY = "gojun_ngram"
MODEL_FORMAT_VERSION = 1


class Unit(str, Enum):
    CHAR = "CHAR"
    PRETOKENIZED = "PRETOKENIZED"


class Direction(str, Enum):
    FORWARD = "FORWARD"
    BACKWARD = "BACKWARD"


def tokenize(text: str | Sequence[str], unit: Unit) -> list[str]:
    """Split text into model units; sequences are taken as already split."""
    if not isinstance(text, str):
        return list(text)
    if unit is Unit.CHAR:
        return list(text)
    return text.split()


@dataclass
class NGramModel:
    order: int
    unit: Unit
    direction: Direction
    discount: float
    unk_threshold: int
    vocab: frozenset[str]
    # counts[k] maps a length-k context tuple to its continuation counter.
    counts: list[dict[tuple[str, ...], Counter]] = field(repr=False)
    _totals: list[dict[tuple[str, ...], int]] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self._totals = [
            {ctx: sum(counter.values()) for ctx, counter in level.items()}
            for level in self.counts
        ]
        # Units the model can emit: everything but BOS.
        self._emission = sorted(self.vocab - {BOS})
        self._uniform = 1.0 / len(self._emission)

    # -- probabilities ------------------------------------------------------

    def _map_unit(self, u: str) -> str:
        return u if u in self.vocab else UNK

    def prob(self, target: str, context: Sequence[str]) -> float:
        """P(target | context) under interpolated absolute discounting."""
        target = self._map_unit(target)
        ctx = tuple(self._map_unit(u) for u in context)[-(self.order - 1):] if self.order > 1 else ()
        return self._prob_level(len(ctx), ctx, target)

    def _prob_level(self, k: int, ctx: tuple[str, ...], target: str) -> float:
        if k == 0:
            counter = self.counts[0].get((), None)
            if not counter:
                return self._uniform
            total = self._totals[0][()]
            seen = counter.get(target, 0)
            distinct = len(counter)
            return (max(seen - self.discount, 0.0) + self.discount * distinct * self._uniform) / total
        counter = self.counts[k].get(ctx)
        lower = self._prob_level(k - 1, ctx[1:], target)
        if not counter:
            return lower
        total = self._totals[k][ctx]
        seen = counter.get(target, 0)
        distinct = len(counter)
        return (max(seen - self.discount, 0.0) + self.discount * distinct * lower) / total

    def distribution(self, context: Sequence[str]) -> dict[str, float]:
        """Full conditional distribution over the emission vocabulary."""
        return {u: self.prob(u, context) for u in self._emission}

    def _sequence(self, text: str | Sequence[str]) -> list[str]:
        units = [self._map_unit(u) for u in tokenize(text, self.unit)]
        if self.direction is Direction.BACKWARD:
            units.reverse()
        return [BOS] * (self.order - 1) + units + [EOS]

    def logprob(self, text: str | Sequence[str]) -> float:
        """Sum of log P (nats) over all units plus the EOS term."""
        seq = self._sequence(text)
        start = self.order - 1
        total = 0.0
        for i in range(start, len(seq)):
            ctx = tuple(seq[i - self.order + 1 : i])
            p = self._prob_level(len(ctx), ctx, seq[i])
            if p <= 0.0:
                return float("-inf")
            total += math.log(p)
        return total

    def logprob_batch(self, texts: Sequence[str | Sequence[str]]) -> list[float]:
        return [self.logprob(t) for t in texts]

    # -- persistence --------------------------------------------------------

    def save(self, path: str | Path) -> None:
        levels = []
        for level in self.counts:
            entries = []
            for ctx in sorted(level):
                counter = level[ctx]
                entries.append([list(ctx), sorted(counter.items())])
            levels.append(entries)
        payload = {
            MODEL_FORMAT_KEY: MODEL_FORMAT_VERSION,
            "order": self.order,
            "unit": self.unit.value,
            "direction": self.direction.value,
            "discount": self.discount,
            "unk_threshold": self.unk_threshold,
            "vocab": sorted(self.vocab),
            "levels": levels,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False)

    @classmethod
    def load(cls, path: str | Path) -> "NGramModel":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get(MODEL_FORMAT_KEY) != MODEL_FORMAT_VERSION:
            raise ValueError(f"{path}: not a version-{MODEL_FORMAT_VERSION} model file")
        counts: list[dict[tuple[str, ...], Counter]] = []
        for entries in payload["levels"]:
            level: dict[tuple[str, ...], Counter] = {}
            for ctx, pairs in entries:
                level[tuple(ctx)] = Counter(dict((u, c) for u, c in pairs))
            counts.append(level)
        return cls(
            order=payload["order"],
            unit=Unit(payload["unit"]),
            direction=Direction(payload["direction"]),
            discount=payload["discount"],
            unk_threshold=payload["unk_threshold"],
            vocab=frozenset(payload["vocab"]),
            counts=counts,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NGramModel):
            return NotImplemented
        return (
            self.order == other.order
            and self.unit == other.unit
            and self.direction == other.direction
            and self.discount == other.discount
            and self.unk_threshold == other.unk_threshold
            and self.vocab == other.vocab
            and self.counts == other.counts
        )


def train_ngram(
    lines: Iterable[str | Sequence[str]],
    order: int,
    unit: Unit = Unit.CHAR,
    direction: Direction = Direction.FORWARD,
    discount: float = 0.75,
    unk_threshold: int = 1,
) -> NGramModel:
    """Train an n-gram model on raw lines.

    Units occurring at most ``unk_threshold`` times are pooled into UNK.
    Backward models are trained on reversed unit sequences. Counts cover
    every context length up to order-1 so the interpolation has matching
    lower-order statistics.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if not 0.0 <= discount < 1.0:
        raise ValueError(f"discount must be in [0, 1), got {discount}")
    if unk_threshold < 0:
        raise ValueError(f"unk_threshold must be >= 0, got {unk_threshold}")

    tokenized = [tokenize(line, unit) for line in lines]
    if not tokenized:
        raise ValueError("empty corpus: no training lines")

    freq = Counter(u for units in tokenized for u in units)
    kept = {u for u, c in freq.items() if c > unk_threshold}
    vocab = frozenset(kept | {BOS, EOS, UNK})

    counts: list[dict[tuple[str, ...], Counter]] = [{} for _ in range(order)]
    for units in tokenized:
        mapped = [u if u in kept else UNK for u in units]
        if direction is Direction.BACKWARD:
            mapped.reverse()
        seq = [BOS] * (order - 1) + mapped + [EOS]
        for i in range(order - 1, len(seq)):
            target = seq[i]
            for k in range(order):
                ctx = tuple(seq[i - k : i])
                counts[k].setdefault(ctx, Counter())[target] += 1

    return NGramModel(
        order=order,
        unit=unit,
        direction=direction,
        discount=discount,
        unk_threshold=unk_threshold,
        vocab=vocab,
        counts=counts,
    )
