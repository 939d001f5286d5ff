"""Command-line entry point.

Subcommands: ``train`` (n-gram models), ``compare`` (score variant sets),
``experiment`` (analysis runners writing TSV/JSON reports plus figures),
and ``synth`` (synthetic corpus generation). Exit codes: 0 success,
1 data or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import shlex
import sys
from pathlib import Path

from . import experiments, synth
from .corpus import (
    CaseRole,
    FilterCriteria,
    filter_sentences,
    load_jsonl,
    load_preference_pairs,
    render_text,
    save_jsonl,
    sentence_from_dict,
)
from .errors import GojunError
from .ngram import Direction, NGramModel, Unit, train_ngram
from .scoring import (
    DEFAULT_TIE_EPSILON,
    BidirectionalScorer,
    ExternalScorerClient,
    compare,
)
from .transform import (
    DEFAULT_ENUMERATION_CAP,
    VariantSet,
    enumerate_orders,
    substitute_adverbial_particle,
    swap_cases,
    topicalize,
)

EXPERIMENT_NAMES = (
    "human-agreement",
    "double-object",
    "verb-type",
    "omission",
    "semantic-role",
    "cooccurrence",
    "case-order",
    "adverb-position",
    "long-before-short",
    "topic-i",
    "topic-ii",
    "adverbial-particles",
)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _roles(text: str) -> tuple[CaseRole, ...]:
    try:
        return tuple(CaseRole(part.strip()) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="gojun", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train an n-gram model")
    p_train.add_argument("corpus", help="training text (one line per sentence)")
    p_train.add_argument("--order", type=_positive_int, default=3)
    p_train.add_argument("--unit", choices=["char", "tokens"], default="char")
    p_train.add_argument("--direction", choices=["fwd", "bwd"], default="fwd")
    p_train.add_argument("--discount", type=float, default=0.75)
    p_train.add_argument("--unk-threshold", type=int, default=1)
    p_train.add_argument("--jsonl", action="store_true",
                         help="corpus is sentence JSONL; train on rendered text")
    p_train.add_argument("--out", required=True, help="model file to write")
    p_train.set_defaults(func=cmd_train)

    p_compare = sub.add_parser("compare", help="score and rank word-order variants")
    _add_scorer_flags(p_compare)
    p_compare.add_argument("--variants", help="JSONL of labeled sentences")
    p_compare.add_argument("--sentence", help="JSONL corpus; variants built from its first sentence")
    p_compare.add_argument("--transform", choices=["enumerate", "swap", "topicalize", "substitute"])
    p_compare.add_argument("--site", type=int, help="chunk index for --transform enumerate")
    p_compare.add_argument("--cap", type=_positive_int, default=DEFAULT_ENUMERATION_CAP)
    p_compare.add_argument("--roles", type=_roles, default=(CaseRole.DAT, CaseRole.ACC),
                           help="two roles for --transform swap (comma-separated)")
    p_compare.add_argument("--role", type=_roles, help="role for topicalize/substitute")
    p_compare.add_argument("--particle", help="adverbial particle for --transform substitute")
    p_compare.add_argument("--moved", action="store_true", help="front the chunk in substitute")
    p_compare.add_argument("--tie-epsilon", type=float, default=DEFAULT_TIE_EPSILON)
    p_compare.set_defaults(func=cmd_compare)

    p_exp = sub.add_parser("experiment", help="run an analysis and write its report")
    p_exp.add_argument("name", choices=EXPERIMENT_NAMES)
    _add_scorer_flags(p_exp)
    p_exp.add_argument("--corpus", help="sentence JSONL")
    p_exp.add_argument("--pairs", help="preference-pair JSONL (human-agreement)")
    p_exp.add_argument("--verb-records", help="double-object report.json with per-verb rates")
    p_exp.add_argument("--show-verbs", type=_str_list, help="comma-separated show-type verbs")
    p_exp.add_argument("--pass-verbs", type=_str_list, help="comma-separated pass-type verbs")
    p_exp.add_argument("--roles", type=_roles, default=(CaseRole.TIM, CaseRole.LOC, CaseRole.NOM),
                       help="target roles for case-order")
    p_exp.add_argument("--canonical-order", type=_roles, default=experiments.CANONICAL_ORDER)
    p_exp.add_argument("--particles", type=_str_list, default=("は", "こそ", "も", "だけ"))
    p_exp.add_argument("--alpha", type=float, default=0.05)
    p_exp.add_argument("--cap", type=_positive_int, default=DEFAULT_ENUMERATION_CAP)
    p_exp.add_argument("--mode", choices=[experiments.MODE_LM, experiments.MODE_COUNT],
                       default=experiments.MODE_LM)
    p_exp.add_argument("--tie-epsilon", type=float, default=DEFAULT_TIE_EPSILON)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--workers", type=_positive_int, default=1)
    p_exp.add_argument("--filter", action="store_true",
                       help="apply the default sentence filter before the run")
    p_exp.add_argument("--no-plots", action="store_true")
    p_exp.add_argument("--out", required=True, help="output directory")
    p_exp.set_defaults(func=cmd_experiment)

    p_synth = sub.add_parser("synth", help="generate a synthetic annotated corpus")
    p_synth.add_argument("--spec", help="grammar spec JSON")
    p_synth.add_argument("--default-spec", action="store_true",
                         help="use the built-in five-case grammar")
    p_synth.add_argument("--emit-spec", help="write the grammar spec JSON here and exit")
    p_synth.add_argument("--n", type=_positive_int, default=1000)
    p_synth.add_argument("--seed", type=int, help="override the spec seed")
    p_synth.add_argument("--out", help="corpus JSONL to write")
    p_synth.set_defaults(func=cmd_synth)

    commands = {"train": p_train, "compare": p_compare, "experiment": p_exp,
                "synth": p_synth}
    for command in commands.values():
        command.add_argument("--config", help="JSON file of flag defaults; "
                             "explicit flags override it")
    return parser, commands


def _add_scorer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fwd", help="forward n-gram model file")
    parser.add_argument("--bwd", help="backward n-gram model file")
    parser.add_argument("--scorer-cmd", help="external scorer command (line protocol on stdio)")
    parser.add_argument("--scorer-timeout", type=float, default=30.0)


def _build_scorer(args) -> tuple[BidirectionalScorer | None, ExternalScorerClient | None]:
    if args.scorer_cmd:
        client = ExternalScorerClient.spawn(shlex.split(args.scorer_cmd), timeout=args.scorer_timeout)
        return BidirectionalScorer.from_external(client), client
    if args.fwd and args.bwd:
        forward = NGramModel.load(args.fwd)
        backward = NGramModel.load(args.bwd)
        return BidirectionalScorer(forward, backward), None
    return None, None


# ---------------------------------------------------------------------------
# Commands


def cmd_train(args) -> int:
    path = Path(args.corpus)
    if not path.exists():
        print(f"gojun train: corpus file not found: {path}", file=sys.stderr)
        return 1
    if args.jsonl:
        lines = [render_text(s) for s in load_jsonl(path)]
    else:
        with open(path, encoding="utf-8") as fh:
            lines = [line.rstrip("\n") for line in fh if line.strip()]
    model = train_ngram(
        lines,
        order=args.order,
        unit=Unit.CHAR if args.unit == "char" else Unit.PRETOKENIZED,
        direction=Direction.FORWARD if args.direction == "fwd" else Direction.BACKWARD,
        discount=args.discount,
        unk_threshold=args.unk_threshold,
    )
    model.save(args.out)
    print(f"trained order-{model.order} {model.direction.value} model "
          f"on {len(lines)} lines ({len(model.vocab)} units) -> {args.out}")
    return 0


def _load_variant_set(args) -> VariantSet:
    if args.variants:
        variants = []
        with open(args.variants, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                if "sentence" in obj:
                    label = obj.get("label", str(lineno))
                    sentence = sentence_from_dict(obj["sentence"])
                else:
                    sentence = sentence_from_dict(obj)
                    label = sentence.id
                sentence.validate()
                variants.append((label, sentence))
        if not variants:
            raise ValueError(f"{args.variants}: no variants found")
        return VariantSet(base=variants[0][1], variants=tuple(variants))

    if not args.sentence:
        raise ValueError("compare needs --variants or --sentence")
    sentences = load_jsonl(args.sentence)
    if not sentences:
        raise ValueError(f"{args.sentence}: empty corpus")
    base = sentences[0]
    if args.transform == "enumerate":
        site = args.site if args.site is not None else base.root_index
        return enumerate_orders(base, site, args.cap)
    if args.transform == "swap":
        role_a, role_b = args.roles[0], args.roles[1]
        swapped = swap_cases(base, role_a, role_b)
        return VariantSet(base=base, variants=(("ORIGINAL", base), ("SWAPPED", swapped)))
    if args.transform == "topicalize":
        role = args.role[0] if args.role else CaseRole.ACC
        fronted = topicalize(base, role)
        return VariantSet(base=base, variants=(("ORIGINAL", base), ("TOPIC", fronted)))
    if args.transform == "substitute":
        role = args.role[0] if args.role else CaseRole.ACC
        if not args.particle:
            raise ValueError("--transform substitute needs --particle")
        nonmoved = substitute_adverbial_particle(base, role, args.particle, moved=False)
        moved = substitute_adverbial_particle(base, role, args.particle, moved=True)
        return VariantSet(base=base, variants=(("NONMOVED", nonmoved), ("MOVED", moved)))
    raise ValueError("compare needs --transform with --sentence")


def cmd_compare(args) -> int:
    scorer, client = _build_scorer(args)
    if scorer is None:
        print("gojun compare: need --fwd/--bwd models or --scorer-cmd", file=sys.stderr)
        return 2
    try:
        variant_set = _load_variant_set(args)
        result = compare(scorer, variant_set, args.tie_epsilon)
    finally:
        if client is not None:
            client.close()
    print("label\tforward_logp\tbackward_logp\tcombined_logp\twinner")
    for variant in result.variants:
        mark = "*" if (not result.is_tie and variant.label == result.winner) else ""
        print(f"{variant.label}\t{variant.forward_logp!r}\t{variant.backward_logp!r}"
              f"\t{variant.combined_logp!r}\t{mark}")
    if result.is_tie:
        print("TIE")
    return 0


def _experiment_config(args) -> dict:
    config = {
        "command": "experiment",
        "name": args.name,
        "seed": args.seed,
        "corpus": args.corpus,
        "pairs": args.pairs,
        "verb_records": args.verb_records,
        "fwd": args.fwd,
        "bwd": args.bwd,
        "scorer_cmd": args.scorer_cmd,
        "filter": args.filter,
    }
    return config


def cmd_experiment(args) -> int:
    name = args.name
    needs_scorer = args.mode == experiments.MODE_LM and name not in ("verb-type", "omission")
    scorer, client = _build_scorer(args)
    if needs_scorer and scorer is None:
        print(f"gojun experiment {name}: need --fwd/--bwd models or --scorer-cmd",
              file=sys.stderr)
        return 2

    corpus = None
    if args.corpus:
        corpus = load_jsonl(args.corpus)
        if args.filter:
            corpus = filter_sentences(corpus, FilterCriteria())

    verb_records = None
    if args.verb_records:
        verb_records = experiments.verb_records_from_report(args.verb_records)

    config = _experiment_config(args)
    common = dict(mode=args.mode, tie_epsilon=args.tie_epsilon, workers=args.workers,
                  config=config)

    try:
        if name == "human-agreement":
            if not args.pairs:
                print("human-agreement needs --pairs", file=sys.stderr)
                return 2
            pairs = load_preference_pairs(args.pairs)
            report = experiments.run_human_agreement(
                pairs, scorer, tie_epsilon=args.tie_epsilon, workers=args.workers, config=config
            )
        elif name == "double-object":
            report = experiments.run_double_object(_need(corpus, "--corpus"), scorer, **common)
        elif name == "verb-type":
            if verb_records is None or not args.show_verbs or not args.pass_verbs:
                print("verb-type needs --verb-records, --show-verbs, and --pass-verbs",
                      file=sys.stderr)
                return 2
            report = experiments.run_verb_type_test(
                verb_records, set(args.show_verbs), set(args.pass_verbs), config=config
            )
        elif name == "omission":
            if verb_records is None:
                print("omission needs --verb-records", file=sys.stderr)
                return 2
            report = experiments.run_omission_analysis(
                _need(corpus, "--corpus"), verb_records, config=config
            )
        elif name == "semantic-role":
            report = experiments.run_semantic_role_analysis(
                _need(corpus, "--corpus"), scorer, alpha=args.alpha, **common
            )
        elif name == "cooccurrence":
            report = experiments.run_cooccurrence_analysis(
                _need(corpus, "--corpus"), scorer, **common
            )
        elif name == "case-order":
            report = experiments.run_case_order(
                _need(corpus, "--corpus"), scorer, roles=args.roles, cap=args.cap, **common
            )
        elif name == "adverb-position":
            report = experiments.run_adverb_position(_need(corpus, "--corpus"), scorer, **common)
        elif name == "long-before-short":
            report = experiments.run_long_before_short(
                _need(corpus, "--corpus"), scorer,
                canonical_order=args.canonical_order, cap=args.cap, **common
            )
        elif name == "topic-i":
            report = experiments.run_topicalization_claim_i(
                _need(corpus, "--corpus"), scorer, cases=args.canonical_order, **common
            )
        elif name == "topic-ii":
            if verb_records is None:
                print("topic-ii needs --verb-records", file=sys.stderr)
                return 2
            report = experiments.run_topicalization_claim_ii(
                _need(corpus, "--corpus"), scorer, verb_records, **common
            )
        else:  # adverbial-particles
            report = experiments.run_adverbial_particles(
                _need(corpus, "--corpus"), scorer,
                particles=args.particles, cases=args.canonical_order, **common
            )
    finally:
        if client is not None:
            client.close()

    paths = experiments.write_report(report, args.out)
    written = [str(paths["tsv"]), str(paths["json"])]
    if not args.no_plots:
        from .plots import render_plots

        written.extend(str(p) for p in render_plots(report, args.out))
    for test in report.tests:
        print(f"{report.name}: {test.method} statistic={test.statistic:.6g} "
              f"p={test.p_value:.6g}")
    print(f"wrote {', '.join(written)}")
    return 0


def _need(value, flag: str):
    if value is None:
        raise ValueError(f"this experiment needs {flag}")
    return value


def cmd_synth(args) -> int:
    if args.spec:
        spec = synth.load_spec(args.spec)
    elif args.default_spec or args.emit_spec:
        spec = synth.default_grammar_spec(seed=args.seed or 0)
    else:
        print("gojun synth: need --spec or --default-spec", file=sys.stderr)
        return 2
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    if args.emit_spec:
        with open(args.emit_spec, "w", encoding="utf-8") as fh:
            json.dump(synth.spec_to_dict(spec), fh, ensure_ascii=False, indent=2)
            fh.write("\n")
        print(f"wrote {args.emit_spec}")
        return 0
    if not args.out:
        print("gojun synth: need --out", file=sys.stderr)
        return 2
    corpus = synth.generate_corpus(spec, args.n)
    save_jsonl(corpus, args.out)
    print(f"wrote {len(corpus)} sentences -> {args.out}")
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                defaults = json.load(fh)
            command = commands[args.command]
            actions = {action.dest: action for action in command._actions}
            unknown = sorted(set(defaults) - set(actions))
            if unknown:
                raise ValueError(f"{args.config}: unknown config keys {unknown}")
            for key, value in defaults.items():
                converter = actions[key].type
                if converter is not None and isinstance(value, str):
                    value = converter(value)
                command.set_defaults(**{key: value})
            args = parser.parse_args(argv)
        return args.func(args)
    except GojunError as exc:
        print(f"gojun: [{exc.code}] {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"gojun: file not found: {exc.filename}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"gojun: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
