"""Topicalization and adverbial-particle analyses."""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Mapping, Sequence

from ..corpus import CaseRole, Sentence, render_text
from ..errors import (
    DegenerateVarianceError,
    EmptyEvalError,
    GojunError,
    UnsupportedParticleError,
)
from ..scoring import DEFAULT_TIE_EPSILON, TIE, BidirectionalScorer, compare_texts
from ..stats import paired_t_test, pearson_test
from ..transform import DEFAULT_ADVERBIAL_PARTICLES, substitute_adverbial_particle, swap_cases, topicalize
from .base import (
    CANONICAL_ORDER,
    MODE_COUNT,
    MODE_LM,
    SkipCounter,
    check_mode,
    double_object_indices,
    object_order_label,
    parallel_map,
)
from .double_object import _judge_object_order
from .report import ExperimentReport, VerbRecord


def _topic_candidates(
    sentence: Sentence, cases: Sequence[CaseRole]
) -> tuple[list[tuple[str, Sentence]], int]:
    """Topicalized variants per present case; returns (candidates, n_unsupported)."""
    candidates = []
    unsupported = 0
    for role in cases:
        if len(sentence.role_indices(role)) != 1:
            continue
        try:
            candidates.append((role.value, topicalize(sentence, role)))
        except UnsupportedParticleError:
            unsupported += 1
        except GojunError:
            continue
    return candidates, unsupported


def run_topicalization_claim_i(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    cases: Sequence[CaseRole] = CANONICAL_ORDER,
    mode: str = MODE_LM,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Which case wins the topic slot, per pair of co-occurring cases.

    t(a|b) is the fraction of sentences containing both cases in which a
    is the preferred topic; pairs in canonical order feed a paired t-test
    of t(a|b) against t(b|a).
    """
    check_mode(mode)
    cases = tuple(cases)
    skipped = SkipCounter()

    def analyze(sentence: Sentence):
        candidates, unsupported = _topic_candidates(sentence, cases)
        if len(candidates) < 2:
            return ("ineligible", unsupported, None, None)
        present = [label for label, _ in candidates]
        if mode == MODE_COUNT:
            initial_role = sentence.chunks[0].case_role.value
            if initial_role not in present:
                return ("no_initial_candidate", unsupported, None, None)
            return ("ok", unsupported, initial_role, present)
        result = compare_texts(
            scorer, [(label, render_text(s)) for label, s in candidates], tie_epsilon
        )
        if result.winner == TIE:
            return ("tie", unsupported, None, None)
        return ("ok", unsupported, result.winner, present)

    results = parallel_map(analyze, corpus, workers)

    pair_counts: dict[tuple[str, str], int] = defaultdict(int)
    for status, unsupported, topic, present in results:
        if unsupported:
            skipped["unsupported_particle"] += unsupported
        if status != "ok":
            skipped.skip(status)
            continue
        for other in present:
            if other != topic:
                pair_counts[(topic, other)] += 1

    records = []
    t_forward = []
    t_backward = []
    for a, b in itertools.combinations(cases, 2):
        n_ab = pair_counts[(a.value, b.value)]
        n_ba = pair_counts[(b.value, a.value)]
        total = n_ab + n_ba
        t_ab = n_ab / total if total else None
        records.append(
            {
                "case_a": a.value,
                "case_b": b.value,
                "n_a_topic": n_ab,
                "n_b_topic": n_ba,
                "t_a_given_b": t_ab,
                "t_b_given_a": 1.0 - t_ab if t_ab is not None else None,
            }
        )
        if t_ab is not None:
            t_forward.append(t_ab)
            t_backward.append(1.0 - t_ab)

    tests = []
    if len(t_forward) >= 2:
        try:
            tests.append(paired_t_test(t_forward, t_backward))
        except DegenerateVarianceError:
            skipped.skip("degenerate_variance")

    return ExperimentReport(
        name="topic-i",
        records=records,
        tests=tests,
        config_echo={
            "cases": [c.value for c in cases],
            "mode": mode,
            "tie_epsilon": tie_epsilon,
            "workers": workers,
            **(config or {}),
        },
        skipped=skipped.as_dict(),
    )


def topicalization_matrix(report: ExperimentReport) -> dict[tuple[str, str], float]:
    matrix: dict[tuple[str, str], float] = {}
    for record in report.records:
        if record.get("t_a_given_b") is None:
            continue
        a, b = record["case_a"], record["case_b"]
        matrix[(a, b)] = record["t_a_given_b"]
        matrix[(b, a)] = record["t_b_given_a"]
    return matrix


def run_topicalization_claim_ii(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    verb_records: Mapping[str, VerbRecord],
    mode: str = MODE_LM,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Per-verb rate of topicalizing ACC over DAT, against the ACC-DAT rate."""
    check_mode(mode)
    skipped = SkipCounter()

    def analyze(sentence: Sentence):
        if double_object_indices(sentence) is None or sentence.verb_lemma is None:
            return ("ineligible", None, None)
        try:
            acc_variant = topicalize(sentence, CaseRole.ACC)
            dat_variant = topicalize(sentence, CaseRole.DAT)
        except UnsupportedParticleError:
            return ("unsupported_particle", None, None)
        except GojunError:
            return ("ineligible", None, None)
        if mode == MODE_COUNT:
            initial = sentence.chunks[0].case_role
            if initial is CaseRole.ACC:
                return ("ok", sentence.verb_lemma, "ACC")
            if initial is CaseRole.DAT:
                return ("ok", sentence.verb_lemma, "DAT")
            return ("no_initial_candidate", None, None)
        result = compare_texts(
            scorer,
            [("ACC", render_text(acc_variant)), ("DAT", render_text(dat_variant))],
            tie_epsilon,
        )
        if result.winner == TIE:
            return ("tie", None, None)
        return ("ok", sentence.verb_lemma, result.winner)

    results = parallel_map(analyze, corpus, workers)

    wins: dict[str, list[int]] = defaultdict(lambda: [0, 0])
    for status, verb, winner in results:
        if status != "ok":
            skipped.skip(status)
            continue
        wins[verb][0 if winner == "ACC" else 1] += 1

    records = []
    xs, ys = [], []
    for verb in sorted(wins):
        n_acc, n_dat = wins[verb]
        rate = n_acc / (n_acc + n_dat)
        base = verb_records.get(verb)
        r_acc_dat = base.r_acc_dat if base else None
        records.append(
            {
                "verb": verb,
                "n_topic_acc": n_acc,
                "n_topic_dat": n_dat,
                "topic_acc_rate": rate,
                "r_acc_dat": r_acc_dat,
            }
        )
        if r_acc_dat is not None:
            xs.append(r_acc_dat)
            ys.append(rate)

    if len(xs) < 2:
        raise EmptyEvalError("fewer than two verbs have both rates defined")

    tests = []
    try:
        tests.append(pearson_test(xs, ys))
    except DegenerateVarianceError:
        skipped.skip("degenerate_variance")

    return ExperimentReport(
        name="topic-ii",
        records=records,
        tests=tests,
        config_echo={"mode": mode, "tie_epsilon": tie_epsilon, "workers": workers, **(config or {})},
        skipped=skipped.as_dict(),
    )


def run_adverbial_particles(
    corpus: Sequence[Sentence],
    scorer: BidirectionalScorer | None,
    particles: Sequence[str] = tuple(sorted(DEFAULT_ADVERBIAL_PARTICLES)),
    cases: Sequence[CaseRole] = CANONICAL_ORDER,
    mode: str = MODE_LM,
    tie_epsilon: float = DEFAULT_TIE_EPSILON,
    workers: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Moved-vs-Non-moved preference per (particle, case) plus order shifts.

    For every case chunk and particle, the fronted (Moved) variant is
    compared with the in-place (Non-moved) one. Double-object sentences
    additionally contribute a per-verb order rate when one object carries
    the particle, next to the particle-free baseline rate.
    """
    check_mode(mode)
    particles = tuple(particles)
    cases = tuple(cases)
    skipped = SkipCounter()

    def analyze(sentence: Sentence):
        cells = []  # (case, particle, winner)
        shifts = []  # (verb, focus_case, particle, order_winner)
        for role in cases:
            if len(sentence.role_indices(role)) != 1:
                continue
            for particle in particles:
                try:
                    nonmoved = substitute_adverbial_particle(sentence, role, particle, moved=False)
                    moved = substitute_adverbial_particle(sentence, role, particle, moved=True)
                except UnsupportedParticleError:
                    cells.append((role.value, particle, "unsupported"))
                    continue
                except GojunError:
                    continue
                if mode == MODE_COUNT:
                    winner = "NONMOVED" if sentence.role_indices(role)[0] != 0 else TIE
                else:
                    result = compare_texts(
                        scorer,
                        [("MOVED", render_text(moved)), ("NONMOVED", render_text(nonmoved))],
                        tie_epsilon,
                    )
                    winner = result.winner
                cells.append((role.value, particle, winner))

        indices = double_object_indices(sentence)
        if indices is not None and sentence.verb_lemma is not None:
            baseline = _judge_object_order(sentence, scorer, mode, tie_epsilon)
            if baseline is not None:
                shifts.append((sentence.verb_lemma, "NONE", "", baseline))
            for focus in (CaseRole.ACC, CaseRole.DAT):
                for particle in particles:
                    try:
                        with_particle = substitute_adverbial_particle(
                            sentence, focus, particle, moved=False
                        )
                        swapped = swap_cases(with_particle, CaseRole.DAT, CaseRole.ACC)
                    except GojunError:
                        continue
                    label1 = object_order_label(with_particle)
                    label2 = object_order_label(swapped)
                    if label1 is None or label2 is None or label1 == label2:
                        continue
                    if mode == MODE_COUNT:
                        winner = label1
                    else:
                        result = compare_texts(
                            scorer,
                            [(label1, render_text(with_particle)), (label2, render_text(swapped))],
                            tie_epsilon,
                        )
                        winner = result.winner
                    shifts.append((sentence.verb_lemma, focus.value, particle, winner))
        return cells, shifts

    results = parallel_map(analyze, corpus, workers)

    cell_wins: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0, 0])
    shift_wins: dict[tuple[str, str, str], list[int]] = defaultdict(lambda: [0, 0])
    for cells, shifts in results:
        for case, particle, winner in cells:
            if winner == "unsupported":
                skipped.skip("unsupported_particle")
                continue
            slot = {"MOVED": 0, "NONMOVED": 1, TIE: 2}[winner]
            cell_wins[(particle, case)][slot] += 1
        for verb, focus, particle, winner in shifts:
            if winner == TIE:
                skipped.skip("shift_tie")
                continue
            shift_wins[(verb, focus, particle)][0 if winner == "ACC-DAT" else 1] += 1

    records = []
    for particle in particles:
        for role in cases:
            moved, nonmoved, ties = cell_wins[(particle, role.value)]
            total = moved + nonmoved
            records.append(
                {
                    "section": "moved-rate",
                    "particle": particle,
                    "case": role.value,
                    "verb": None,
                    "n_moved": moved,
                    "n_nonmoved": nonmoved,
                    "n_tie": ties,
                    "moved_rate": moved / total if total else None,
                    "acc_dat_rate": None,
                }
            )
    for verb, focus, particle in sorted(shift_wins):
        ad, da = shift_wins[(verb, focus, particle)]
        records.append(
            {
                "section": "order-shift",
                "particle": particle or None,
                "case": focus,
                "verb": verb,
                "n_moved": None,
                "n_nonmoved": None,
                "n_tie": None,
                "moved_rate": None,
                "acc_dat_rate": ad / (ad + da),
            }
        )

    return ExperimentReport(
        name="adverbial-particles",
        records=records,
        tests=[],
        config_echo={
            "particles": list(particles),
            "cases": [c.value for c in cases],
            "mode": mode,
            "tie_epsilon": tie_epsilon,
            "workers": workers,
            **(config or {}),
        },
        skipped=skipped.as_dict(),
    )
