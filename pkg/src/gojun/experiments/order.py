"""Case-precedence, adverb-position, and constituent-length analyses."""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Mapping, Sequence

from ..corpus import CaseRole, Sentence, render_text
from ..errors import GojunError, TooManyOrdersError
from ..scoring import DEFAULT_TIE_EPSILON, TIE, BidirectionalScorer, compare, compare_texts
from ..stats import rank_correlation, sign_test
from ..transform import DEFAULT_ENUMERATION_CAP, enumerate_orders, permute_children
from .base import (
    CANONICAL_ORDER,
    MODE_COUNT,
    MODE_LM,
    SkipCounter,
    check_mode,
    parallel_map,
)
from .report import ExperimentReport

ADVERB_POSITIONS = ("ASOV", "SAOV", "SOAV")

#: Canonical adverb positions per adverb type, encoded as preference scores.
DEFAULT_ADVERB_REFERENCE: dict[str, dict[str, float]] = {
    "MODAL": {"ASOV": 1.0, "SAOV": 0.0, "SOAV": 0.0},
    "TIME": {"ASOV": 1.0, "SAOV": 1.0, "SOAV": 0.0},
    "MANNER": {"ASOV": 0.0, "SAOV": 1.0, "SOAV": 1.0},
    "RESULTIVE": {"ASOV": 0.0, "SAOV": 1.0, "SOAV": 1.0},
}


def _argmax_sentence(
    sentence: Sentence,
    scorer: BidirectionalScorer | None,
    mode: str,
    cap: int,
    tie_epsilon: float,
) -> tuple[str, Sentence | None]:
    """("ok", best) for the preferred enumeration variant, or a skip reason."""
    if mode == MODE_COUNT:
        return "ok", sentence
    site = sentence.root_index
    try:
        variants = enumerate_orders(sentence, site, cap)
    except TooManyOrdersError:
        return "too_many_orders", None
    except GojunError:
        return "ineligible", None
    result = compare(scorer, variants, tie_epsilon)
    if result.winner == TIE:
        return "tie", None
    by_label = dict(variants.variants)
    return "ok", by_label[result.winner]


def _role_positions(sentence: Sentence, roles: Sequence[CaseRole]) -> dict[CaseRole, int] | None:
    """Chunk position per target role among the root's children; None if duplicated."""
    site = sentence.root_index
    kids = sentence.children(site)
    positions: dict[CaseRole, int] = {}
    for k in kids:
        role = sentence.chunks[k].case_role
        if role in roles:
            if role in positions:
                return None
            positions[role] = k
    return positions


def run_case_order(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    roles: Sequence[CaseRole] = (CaseRole.TIM, CaseRole.LOC, CaseRole.NOM),
    mode: str = MODE_LM,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Pairwise precedence rates o(a<b) over argmax word orders.

    For each eligible sentence, all orderings of the predicate's children
    are scored and the best one is tallied; the count-based baseline from
    the original orders is always reported alongside.
    """
    check_mode(mode)
    roles = tuple(roles)
    skipped = SkipCounter()

    def analyze(sentence: Sentence):
        positions = _role_positions(sentence, roles)
        if positions is None:
            return ("duplicate_role", None, None)
        if len(positions) < 2:
            return ("ineligible", None, None)
        baseline = positions
        status, best = _argmax_sentence(sentence, scorer, mode, cap, tie_epsilon)
        if status != "ok":
            return (status, None, baseline)
        chosen = _role_positions(best, roles)
        return ("ok", chosen, baseline)

    results = parallel_map(analyze, corpus, workers)

    n_chosen: dict[tuple[CaseRole, CaseRole], int] = defaultdict(int)
    n_count: dict[tuple[CaseRole, CaseRole], int] = defaultdict(int)
    for status, chosen, baseline in results:
        if baseline is not None and len(baseline) >= 2:
            for a, b in itertools.combinations(roles, 2):
                if a in baseline and b in baseline:
                    if baseline[a] < baseline[b]:
                        n_count[(a, b)] += 1
                    else:
                        n_count[(b, a)] += 1
        if status != "ok":
            skipped.skip(status)
            continue
        for a, b in itertools.combinations(roles, 2):
            if a in chosen and b in chosen:
                if chosen[a] < chosen[b]:
                    n_chosen[(a, b)] += 1
                else:
                    n_chosen[(b, a)] += 1

    records = []
    tests = []
    for a, b in itertools.combinations(roles, 2):
        ab, ba = n_chosen[(a, b)], n_chosen[(b, a)]
        cab, cba = n_count[(a, b)], n_count[(b, a)]
        o = ab / (ab + ba) if ab + ba else None
        o_count = cab / (cab + cba) if cab + cba else None
        p = None
        if ab + ba >= 1:
            result = sign_test(ab, ba)
            result = type(result)(
                statistic=result.statistic,
                p_value=result.p_value,
                method=f"sign-exact[{a.value}<{b.value}]",
                n=result.n,
            )
            tests.append(result)
            p = result.p_value
        records.append(
            {
                "case_a": a.value,
                "case_b": b.value,
                "n_a_before_b": ab,
                "n_b_before_a": ba,
                "o_a_before_b": o,
                "count_n_a_before_b": cab,
                "count_n_b_before_a": cba,
                "count_o_a_before_b": o_count,
                "sign_p": p,
            }
        )

    return ExperimentReport(
        name="case-order",
        records=records,
        tests=tests,
        config_echo={
            "roles": [r.value for r in roles],
            "mode": mode,
            "cap": cap,
            "tie_epsilon": tie_epsilon,
            "workers": workers,
            **(config or {}),
        },
        skipped=skipped.as_dict(),
    )


def precedence_matrix(report: ExperimentReport) -> dict[tuple[str, str], float]:
    """o(a<b) and its complement per pair, rebuilt from a case-order report."""
    matrix: dict[tuple[str, str], float] = {}
    for record in report.records:
        if record.get("o_a_before_b") is None:
            continue
        a, b, o = record["case_a"], record["case_b"], record["o_a_before_b"]
        matrix[(a, b)] = o
        matrix[(b, a)] = 1.0 - o
    return matrix


def _adverb_structure(sentence: Sentence) -> dict[str, int] | None:
    """Indices for the S/O/A chunks when the sentence is a clean S-O-A-V clause."""
    site = sentence.root_index
    kids = sentence.children(site)
    subjects = [k for k in kids if sentence.chunks[k].case_role is CaseRole.NOM]
    objects = [k for k in kids if sentence.chunks[k].case_role is CaseRole.ACC]
    adverbs = [k for k in kids if sentence.chunks[k].case_role is CaseRole.ADVERB]
    if len(subjects) != 1 or len(objects) != 1 or len(adverbs) != 1:
        return None
    if sentence.chunks[adverbs[0]].adverb_type is None:
        return None
    if len(kids) != 3:
        return None
    return {"S": subjects[0], "O": objects[0], "A": adverbs[0]}


def run_adverb_position(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    reference: Mapping[str, Mapping[str, float]] | None = None,
    mode: str = MODE_LM,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Preferred adverb slot (ASOV / SAOV / SOAV) per adverb type.

    Position preferences are ranked by win counts and rank-correlated
    against the reference canonical positions.
    """
    check_mode(mode)
    reference = reference or DEFAULT_ADVERB_REFERENCE
    skipped = SkipCounter()

    def analyze(sentence: Sentence):
        structure = _adverb_structure(sentence)
        if structure is None:
            return ("ineligible", None, None)
        site = sentence.root_index
        kids = sentence.children(site)
        slot_of = {index: slot for slot, index in enumerate(kids)}
        targets = {
            "ASOV": (structure["A"], structure["S"], structure["O"]),
            "SAOV": (structure["S"], structure["A"], structure["O"]),
            "SOAV": (structure["S"], structure["O"], structure["A"]),
        }
        variants = []
        original_label = None
        for label, arrangement in targets.items():
            perm = tuple(slot_of[index] for index in arrangement)
            variant = permute_children(sentence, site, perm)
            variants.append((label, variant))
            if perm == (0, 1, 2):
                original_label = label
        adverb_type = sentence.chunks[structure["A"]].adverb_type.value
        if mode == MODE_COUNT:
            return ("ok", adverb_type, original_label)
        result = compare_texts(
            scorer, [(label, render_text(v)) for label, v in variants], tie_epsilon
        )
        if result.winner == TIE:
            return ("tie", None, None)
        return ("ok", adverb_type, result.winner)

    results = parallel_map(analyze, corpus, workers)

    wins: dict[str, dict[str, int]] = defaultdict(lambda: {p: 0 for p in ADVERB_POSITIONS})
    for status, adverb_type, winner in results:
        if status != "ok" or winner is None:
            skipped.skip(status if status != "ok" else "no_original_position")
            continue
        wins[adverb_type][winner] += 1

    records = []
    for adverb_type in sorted(wins):
        counts = wins[adverb_type]
        total = sum(counts.values())
        correlation = None
        ref = reference.get(adverb_type)
        if ref is not None and total > 0 and len(set(counts.values())) > 1:
            observed = [float(counts[p]) for p in ADVERB_POSITIONS]
            expected = [float(ref[p]) for p in ADVERB_POSITIONS]
            if len(set(expected)) > 1:
                correlation = rank_correlation(observed, expected)
        if correlation is None:
            skipped.skip("ranking_undefined")
        records.append(
            {
                "adverb_type": adverb_type,
                "n": total,
                "n_asov": counts["ASOV"],
                "n_saov": counts["SAOV"],
                "n_soav": counts["SOAV"],
                "rank_correlation": correlation,
            }
        )

    return ExperimentReport(
        name="adverb-position",
        records=records,
        tests=[],
        config_echo={"mode": mode, "tie_epsilon": tie_epsilon, "workers": workers, **(config or {})},
        skipped=skipped.as_dict(),
    )


def run_long_before_short(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    canonical_order: Sequence[CaseRole] = CANONICAL_ORDER,
    mode: str = MODE_LM,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Does the longest constituent move ahead of its canonical-order slot?

    Compares the longest child's position between the canonical-order
    rendering and the argmax rendering, over sentences where they differ.
    """
    check_mode(mode)
    rank = {role: i for i, role in enumerate(canonical_order)}
    skipped = SkipCounter()

    def analyze(sentence: Sentence):
        site = sentence.root_index
        kids = sentence.children(site)
        if len(kids) < 2:
            return ("ineligible", 0)
        if any(sentence.chunks[k].case_role not in rank for k in kids):
            return ("unrankable", 0)
        lengths = [len(sentence.block(k)) for k in kids]
        longest = max(lengths)
        if lengths.count(longest) != 1:
            return ("length_tie", 0)
        longest_slot = lengths.index(longest)

        # Position of the longest child among children in canonical order.
        order = sorted(range(len(kids)), key=lambda slot: rank[sentence.chunks[kids[slot]].case_role])
        canon_pos = order.index(longest_slot)

        status, best = _argmax_sentence(sentence, scorer, mode, cap, tie_epsilon)
        if status != "ok":
            return (status, 0)
        best_kids = best.children(best.root_index)
        best_lengths = [len(best.block(k)) for k in best_kids]
        argmax_pos = best_lengths.index(longest)
        if argmax_pos == canon_pos:
            return ("unchanged", 0)
        return ("ok", -1 if argmax_pos < canon_pos else 1)

    results = parallel_map(analyze, corpus, workers)

    long_first = 0
    short_first = 0
    for status, direction in results:
        if status != "ok":
            skipped.skip(status)
        elif direction < 0:
            long_first += 1
        else:
            short_first += 1

    tests = []
    if long_first + short_first >= 1:
        tests.append(sign_test(long_first, short_first))

    records = [
        {
            "long_precedes_short": long_first,
            "short_precedes_long": short_first,
            "sign_p": tests[0].p_value if tests else None,
        }
    ]
    return ExperimentReport(
        name="long-before-short",
        records=records,
        tests=tests,
        config_echo={
            "canonical_order": [r.value for r in canonical_order],
            "mode": mode,
            "cap": cap,
            "tie_epsilon": tie_epsilon,
            "workers": workers,
            **(config or {}),
        },
        skipped=skipped.as_dict(),
    )
