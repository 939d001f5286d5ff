"""LM-vs-human word-order preference agreement."""

from __future__ import annotations

from typing import Sequence

from ..corpus import Label, PreferencePair, render_text
from ..errors import DegenerateVarianceError, EmptyEvalError
from ..scoring import DEFAULT_TIE_EPSILON, TIE, BidirectionalScorer, compare_texts
from .base import SkipCounter, parallel_map
from .report import ExperimentReport


def run_human_agreement(
    pairs: Sequence[PreferencePair],
    scorer: BidirectionalScorer,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Agreement rate and phi coefficient between LM and annotator decisions.

    Only pairs with a gold label participate; LM ties are excluded from
    both the agreement rate and the correlation and reported as a count.
    """
    gold_pairs = [p for p in pairs if p.gold is not None]
    if not gold_pairs:
        raise EmptyEvalError("no pairs carry a gold label")

    skipped = SkipCounter()
    skipped["no_gold"] = len(pairs) - len(gold_pairs)

    def decide(pair: PreferencePair) -> str:
        result = compare_texts(
            scorer,
            [
                (Label.PREFER1.value, render_text(pair.order1)),
                (Label.PREFER2.value, render_text(pair.order2)),
            ],
            tie_epsilon,
        )
        return result.winner

    decisions = parallel_map(decide, gold_pairs, workers)

    lm_codes: list[int] = []
    gold_codes: list[int] = []
    agree = 0
    for pair, decision in zip(gold_pairs, decisions):
        if decision == TIE:
            skipped.skip("tie")
            continue
        lm_codes.append(1 if decision == Label.PREFER1.value else 0)
        gold_codes.append(1 if pair.gold is Label.PREFER1 else 0)
        if decision == pair.gold.value:
            agree += 1

    n_decided = len(lm_codes)
    agreement = agree / n_decided if n_decided else None

    tests = []
    phi = None
    if n_decided >= 2:
        from ..stats import pearson_test

        try:
            phi_result = pearson_test([float(c) for c in lm_codes], [float(c) for c in gold_codes])
            phi = phi_result.statistic
            tests.append(
                type(phi_result)(
                    statistic=phi_result.statistic,
                    p_value=phi_result.p_value,
                    method="phi",
                    n=phi_result.n,
                )
            )
        except DegenerateVarianceError:
            skipped.skip("degenerate_variance")

    records = [
        {
            "n_pairs": len(pairs),
            "n_gold": len(gold_pairs),
            "n_decided": n_decided,
            "n_tie": skipped["tie"],
            "agreement": agreement,
            "phi": phi,
        }
    ]
    return ExperimentReport(
        name="human-agreement",
        records=records,
        tests=tests,
        config_echo={"tie_epsilon": tie_epsilon, "workers": workers, **(config or {})},
        skipped=skipped.as_dict(),
    )
