"""Double-object analyses: per-verb order rates and their correlates."""

from __future__ import annotations

from collections import defaultdict
from typing import Mapping, Sequence

from ..corpus import CaseRole, Sentence
from ..errors import (
    DegenerateVarianceError,
    EmptyEvalError,
    EmptyGroupError,
    GojunError,
    ZeroJointError,
)
from ..scoring import DEFAULT_TIE_EPSILON, TIE, BidirectionalScorer
from ..stats import (
    CooccurrenceTable,
    delta_npmi,
    pearson_test,
    sign_test,
    two_proportion_z_test,
    wilcoxon_rank_sum,
)
from ..transform import swap_cases
from .base import (
    MODE_LM,
    SkipCounter,
    check_mode,
    chunk_head_noun,
    double_object_indices,
    judge,
    object_order_label,
    parallel_map,
)
from .report import ExperimentReport, VerbRecord


def _judge_object_order(
    sentence: Sentence,
    scorer: BidirectionalScorer | None,
    mode: str,
    tie_epsilon: float,
) -> str | None:
    """ACC-DAT / DAT-ACC / TIE for one double-object example, or None if ineligible."""
    original = object_order_label(sentence)
    if original is None or sentence.verb_lemma is None:
        return None
    try:
        swapped = swap_cases(sentence, CaseRole.DAT, CaseRole.ACC)
    except GojunError:
        return None
    other = "DAT-ACC" if original == "ACC-DAT" else "ACC-DAT"
    return judge(
        scorer,
        [(original, sentence), (other, swapped)],
        mode,
        count_winner=original,
        tie_epsilon=tie_epsilon,
    )


def run_double_object(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    mode: str = MODE_LM,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Per-verb preference between ACC-DAT and DAT-ACC object order.

    Each example is compared against its case-swapped counterpart; ties
    count separately and enter neither the numerator nor the denominator
    of the per-verb rate.
    """
    check_mode(mode)
    skipped = SkipCounter()

    def decide(sentence: Sentence) -> tuple[str | None, str | None]:
        winner = _judge_object_order(sentence, scorer, mode, tie_epsilon)
        return sentence.verb_lemma, winner

    results = parallel_map(decide, corpus, workers)

    verbs: dict[str, VerbRecord] = {}
    for verb, winner in results:
        if winner is None or verb is None:
            skipped.skip("ineligible")
            continue
        record = verbs.setdefault(verb, VerbRecord(verb_lemma=verb))
        if winner == TIE:
            record.n_tie += 1
        elif winner == "ACC-DAT":
            record.n_acc_dat += 1
        else:
            record.n_dat_acc += 1

    records = [verbs[v].to_record() for v in sorted(verbs)]
    return ExperimentReport(
        name="double-object",
        records=records,
        tests=[],
        config_echo={"mode": mode, "tie_epsilon": tie_epsilon, "workers": workers, **(config or {})},
        skipped=skipped.as_dict(),
    )


def run_verb_type_test(
    verb_records: Mapping[str, VerbRecord],
    show_verbs: set[str],
    pass_verbs: set[str],
    config: dict | None = None,
) -> ExperimentReport:
    """Rank-sum comparison of per-verb rates between two verb classes."""
    if not show_verbs or not pass_verbs:
        raise EmptyGroupError("both verb groups must be non-empty")

    def rates(group: set[str]) -> list[float]:
        out = []
        for verb in sorted(group):
            record = verb_records.get(verb)
            if record is not None and record.r_acc_dat is not None:
                out.append(record.r_acc_dat)
        return out

    show_rates = rates(show_verbs)
    pass_rates = rates(pass_verbs)
    if not show_rates or not pass_rates:
        raise EmptyGroupError("a verb group has no usable per-verb rate")

    result = wilcoxon_rank_sum(show_rates, pass_rates)
    records = [
        {
            "group": "show",
            "n_verbs": len(show_rates),
            "mean_r_acc_dat": sum(show_rates) / len(show_rates),
        },
        {
            "group": "pass",
            "n_verbs": len(pass_rates),
            "mean_r_acc_dat": sum(pass_rates) / len(pass_rates),
        },
    ]
    return ExperimentReport(
        name="verb-type",
        records=records,
        tests=[result],
        config_echo={
            "show_verbs": sorted(show_verbs),
            "pass_verbs": sorted(pass_verbs),
            **(config or {}),
        },
        skipped={},
    )


def run_omission_analysis(
    corpus: Sequence[Sentence],
    verb_records: Mapping[str, VerbRecord],
    config: dict | None = None,
) -> ExperimentReport:
    """Correlate each verb's single-object bias with its order preference.

    The corpus must hold examples containing exactly one of the two object
    cases; the per-verb rate of dative-only examples is then set against
    the ACC-DAT rate from a prior double-object run.
    """
    skipped = SkipCounter()
    only_counts: dict[str, list[int]] = defaultdict(lambda: [0, 0])

    for sentence in corpus:
        has_dat = len(sentence.role_indices(CaseRole.DAT)) == 1
        has_acc = len(sentence.role_indices(CaseRole.ACC)) == 1
        if sentence.verb_lemma is None or has_dat == has_acc:
            skipped.skip("ineligible")
            continue
        slot = 0 if has_dat else 1
        only_counts[sentence.verb_lemma][slot] += 1

    records = []
    xs, ys = [], []
    for verb in sorted(set(only_counts) | set(verb_records)):
        n_dat_only, n_acc_only = only_counts.get(verb, [0, 0])
        base = verb_records.get(verb)
        merged = VerbRecord(
            verb_lemma=verb,
            n_acc_dat=base.n_acc_dat if base else 0,
            n_dat_acc=base.n_dat_acc if base else 0,
            n_tie=base.n_tie if base else 0,
            n_dat_only=n_dat_only,
            n_acc_only=n_acc_only,
        )
        records.append(merged.to_record())
        if merged.r_dat_only is not None and merged.r_acc_dat is not None:
            xs.append(merged.r_dat_only)
            ys.append(merged.r_acc_dat)
        else:
            skipped.skip("rate_undefined")

    if len(xs) < 2:
        raise EmptyEvalError("fewer than two verbs have both rates defined")

    tests = []
    try:
        tests.append(pearson_test(xs, ys))
    except DegenerateVarianceError:
        skipped.skip("degenerate_variance")

    return ExperimentReport(
        name="omission",
        records=records,
        tests=tests,
        config_echo=dict(config or {}),
        skipped=skipped.as_dict(),
    )


def run_semantic_role_analysis(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    mode: str = MODE_LM,
    alpha: float = 0.05,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Order preference split by the animacy of the dative argument.

    Type-A examples have an inanimate dative, Type-B an animate one. Each
    verb with both types gets a two-proportion z-test; verbs with a
    significant difference are tallied by direction and the directions are
    sign-tested.
    """
    check_mode(mode)
    skipped = SkipCounter()

    def classify(sentence: Sentence) -> tuple[str, str, str] | None:
        indices = double_object_indices(sentence)
        if indices is None or sentence.verb_lemma is None:
            return None
        dat_chunk = sentence.chunks[indices[0]]
        tags = set().union(*(tok.semantic_tags for tok in dat_chunk.tokens))
        if "inanimate" in tags:
            kind = "A"
        elif "animate" in tags:
            kind = "B"
        else:
            return None
        winner = _judge_object_order(sentence, scorer, mode, tie_epsilon)
        if winner is None:
            return None
        return sentence.verb_lemma, kind, winner

    results = parallel_map(classify, corpus, workers)

    tallies: dict[str, dict[str, list[int]]] = defaultdict(
        lambda: {"A": [0, 0], "B": [0, 0]}
    )  # verb -> type -> [n_acc_dat, n_dat_acc]
    for item in results:
        if item is None:
            skipped.skip("ineligible")
            continue
        verb, kind, winner = item
        if winner == TIE:
            skipped.skip("tie")
            continue
        tallies[verb][kind][0 if winner == "ACC-DAT" else 1] += 1

    records = []
    n_type_a_direction = 0
    n_type_b_direction = 0
    for verb in sorted(tallies):
        counts = tallies[verb]
        k_a, m_a = counts["A"]
        k_b, m_b = counts["B"]
        n_a, n_b = k_a + m_a, k_b + m_b
        if n_a == 0 or n_b == 0:
            skipped.skip("missing_type")
            continue
        rate_a, rate_b = k_a / n_a, k_b / n_b
        z = p = None
        direction = "none"
        if rate_a != rate_b:
            try:
                result = two_proportion_z_test(k_a, n_a, k_b, n_b)
                z, p = result.statistic, result.p_value
                if p < alpha:
                    direction = "A" if rate_a > rate_b else "B"
            except DegenerateVarianceError:
                skipped.skip("degenerate_variance")
        if direction == "A":
            n_type_a_direction += 1
        elif direction == "B":
            n_type_b_direction += 1
        records.append(
            {
                "verb": verb,
                "n_type_a": n_a,
                "n_type_b": n_b,
                "rate_acc_dat_type_a": rate_a,
                "rate_acc_dat_type_b": rate_b,
                "z": z,
                "p": p,
                "direction": direction,
            }
        )

    tests = []
    if n_type_a_direction + n_type_b_direction >= 1:
        tests.append(sign_test(n_type_a_direction, n_type_b_direction))

    return ExperimentReport(
        name="semantic-role",
        records=records,
        tests=tests,
        config_echo={
            "mode": mode,
            "alpha": alpha,
            "tie_epsilon": tie_epsilon,
            "workers": workers,
            **(config or {}),
        },
        skipped=skipped.as_dict(),
    )


def build_cooccurrence_table(corpus: Sequence[Sentence]) -> CooccurrenceTable:
    """Maximum-likelihood (noun, verb) counts over the analysis corpus itself."""
    events = []
    for sentence in corpus:
        indices = double_object_indices(sentence)
        if indices is None or sentence.verb_lemma is None:
            continue
        dat, acc = indices
        events.append((chunk_head_noun(sentence.chunks[dat]), sentence.verb_lemma))
        events.append((chunk_head_noun(sentence.chunks[acc]), sentence.verb_lemma))
    return CooccurrenceTable.from_pairs(events)


def run_cooccurrence_analysis(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    table: CooccurrenceTable | None = None,
    mode: str = MODE_LM,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Per-example co-occurrence difference versus binary order preference."""
    check_mode(mode)
    skipped = SkipCounter()
    if table is None:
        table = build_cooccurrence_table(corpus)

    def analyze(sentence: Sentence):
        indices = double_object_indices(sentence)
        if indices is None or sentence.verb_lemma is None:
            return ("skip", "ineligible")
        dat, acc = indices
        noun_dat = chunk_head_noun(sentence.chunks[dat])
        noun_acc = chunk_head_noun(sentence.chunks[acc])
        try:
            dn = delta_npmi(table, noun_dat, noun_acc, sentence.verb_lemma)
        except ZeroJointError:
            return ("skip", "zero_joint")
        winner = _judge_object_order(sentence, scorer, mode, tie_epsilon)
        if winner is None:
            return ("skip", "ineligible")
        if winner == TIE:
            return ("skip", "tie")
        return (
            "ok",
            {
                "id": sentence.id,
                "verb": sentence.verb_lemma,
                "noun_dat": noun_dat,
                "noun_acc": noun_acc,
                "delta_npmi": dn,
                "acc_dat_preferred": 1 if winner == "ACC-DAT" else 0,
            },
        )

    results = parallel_map(analyze, corpus, workers)

    records = []
    for status, payload in results:
        if status == "skip":
            skipped.skip(payload)
        else:
            records.append(payload)

    tests = []
    if len(records) >= 2:
        xs = [r["delta_npmi"] for r in records]
        ys = [float(r["acc_dat_preferred"]) for r in records]
        try:
            tests.append(pearson_test(xs, ys))
        except DegenerateVarianceError:
            skipped.skip("degenerate_variance")

    return ExperimentReport(
        name="cooccurrence",
        records=records,
        tests=tests,
        config_echo={"mode": mode, "tie_epsilon": tie_epsilon, "workers": workers, **(config or {})},
        skipped=skipped.as_dict(),
    )
