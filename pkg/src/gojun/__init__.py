"""gojun: word-order analysis over dependency-chunked sentences.

Generate controlled word-order variants, score them with paired
forward/backward language models (built-in n-gram or external), and run
the full battery of order-preference statistics and hypothesis tests.
"""

from .corpus import (
    AdverbType,
    CaseRole,
    Chunk,
    FilterCriteria,
    Label,
    PreferencePair,
    Sentence,
    Token,
    filter_sentences,
    import_conllu,
    load_jsonl,
    load_preference_pairs,
    render_text,
    save_jsonl,
)
from .ngram import Direction, NGramModel, Unit, train_ngram
from .scoring import (
    TIE,
    BidirectionalScorer,
    ComparisonResult,
    ExternalScorerClient,
    ScoredVariant,
    compare,
    score,
    score_external,
)
from .synth import GrammarSpec, default_grammar_spec, generate_corpus
from .transform import (
    ParticleRewriteRule,
    VariantSet,
    enumerate_orders,
    scramble,
    substitute_adverbial_particle,
    swap_cases,
    topicalize,
)

__version__ = "0.1.0"

__all__ = [
    "AdverbType",
    "BidirectionalScorer",
    "CaseRole",
    "Chunk",
    "ComparisonResult",
    "Direction",
    "ExternalScorerClient",
    "FilterCriteria",
    "GrammarSpec",
    "Label",
    "NGramModel",
    "ParticleRewriteRule",
    "PreferencePair",
    "ScoredVariant",
    "Sentence",
    "TIE",
    "Token",
    "Unit",
    "VariantSet",
    "compare",
    "default_grammar_spec",
    "enumerate_orders",
    "filter_sentences",
    "generate_corpus",
    "import_conllu",
    "load_jsonl",
    "load_preference_pairs",
    "render_text",
    "save_jsonl",
    "scramble",
    "score",
    "score_external",
    "substitute_adverbial_particle",
    "swap_cases",
    "topicalize",
    "train_ngram",
]
