import pytest
from hypothesis import strategies as st

from gojun.corpus import ROOT, CaseRole, Chunk, Sentence, Token
from gojun.ngram import Direction, train_ngram
from gojun.scoring import BidirectionalScorer, ScoredVariant


def make_chunk(stem, particle=None, role=CaseRole.OTHER, head=ROOT, pos="NOUN",
               sem=(), adverb_type=None):
    tokens = [Token(stem, pos, semantic_tags=frozenset(sem))]
    if particle is not None:
        tokens.append(Token(particle, "ADP", particle=particle))
    return Chunk(tokens=tuple(tokens), head=head, case_role=role, adverb_type=adverb_type)


def make_sentence(chunk_specs, sid="s1", verb_lemma=None):
    return Sentence(id=sid, chunks=tuple(chunk_specs), verb_lemma=verb_lemma).validate()


@pytest.fixture
def give_sentence():
    """teacher-NOM student-DAT book-ACC gave."""
    return make_sentence(
        [
            make_chunk("先生", "が", CaseRole.NOM, head=3),
            make_chunk("生徒", "に", CaseRole.DAT, head=3),
            make_chunk("本", "を", CaseRole.ACC, head=3),
            make_chunk("あげた", None, CaseRole.PREDICATE, pos="VERB"),
        ],
        sid="give-1",
        verb_lemma="あげる",
    )


@pytest.fixture
def double_object_sentence():
    """student-DAT book-ACC gave."""
    return make_sentence(
        [
            make_chunk("生徒", "に", CaseRole.DAT, head=2),
            make_chunk("本", "を", CaseRole.ACC, head=2),
            make_chunk("あげた", None, CaseRole.PREDICATE, pos="VERB"),
        ],
        sid="dobj-1",
        verb_lemma="あげる",
    )


# ---------------------------------------------------------------------------
# Random verb-final sentences for property tests

_ROLES = [CaseRole.TIM, CaseRole.LOC, CaseRole.NOM, CaseRole.DAT, CaseRole.ACC,
          CaseRole.OTHER]
_PARTICLES = ["が", "を", "に", "で", None]
_STEMS = ["taro", "hon", "neko", "gakko", "kyou", "pen", "mizu", "tori"]


@st.composite
def verb_final_sentences(draw, min_args=1, max_args=6):
    """Projective verb-final sentences (forward heads, nested spans)."""
    n_args = draw(st.integers(min_args, max_args))
    n = n_args + 1
    heads = []
    for i in range(n_args):
        # Projectivity: stay inside every span already opened over i.
        bound = n - 1
        for j in range(i):
            if heads[j] > i:
                bound = min(bound, heads[j])
        heads.append(draw(st.integers(i + 1, bound)))
    chunks = []
    for i in range(n_args):
        role = draw(st.sampled_from(_ROLES))
        particle = draw(st.sampled_from(_PARTICLES))
        stem = draw(st.sampled_from(_STEMS))
        chunks.append(make_chunk(stem, particle, role, head=heads[i]))
    chunks.append(make_chunk(draw(st.sampled_from(["ageta", "mita", "kita"])),
                             None, CaseRole.PREDICATE, pos="VERB"))
    return make_sentence(chunks, sid=f"prop-{draw(st.integers(0, 10**6))}")


def chunk_surfaces(sentence):
    return sorted(c.surface for c in sentence.chunks)


# ---------------------------------------------------------------------------
# Scorer stubs and helpers


class _TableHandle:
    def __init__(self, table, default):
        self.table = table
        self.default = default

    def logprob_batch(self, texts):
        return [float(self.table.get(t, self.default)) for t in texts]


class FixedScorer:
    """Bidirectional scorer stub with a fixed text -> logp table."""

    def __init__(self, table=None, default=-100.0):
        self.table = dict(table or {})
        self.forward = _TableHandle(self.table, default)
        self.backward = _TableHandle(self.table, default)

    def prefer(self, winner_text, *loser_texts):
        """Make winner_text beat the given losers decisively."""
        self.table[winner_text] = -1.0
        for text in loser_texts:
            self.table.setdefault(text, -50.0)

    def score_batch(self, texts, labels=None):
        labels = list(labels) if labels is not None else [str(i) for i in range(len(texts))]
        fwd = self.forward.logprob_batch(texts)
        bwd = self.backward.logprob_batch(texts)
        return [
            ScoredVariant(label=lab, text=t, forward_logp=f, backward_logp=b)
            for lab, t, f, b in zip(labels, texts, fwd, bwd)
        ]

    def score(self, text, label=""):
        return self.score_batch([text], [label])[0]


def char_scorer(lines, order=2, discount=0.5, unk_threshold=0):
    forward = train_ngram(lines, order=order, direction=Direction.FORWARD,
                          discount=discount, unk_threshold=unk_threshold)
    backward = train_ngram(lines, order=order, direction=Direction.BACKWARD,
                           discount=discount, unk_threshold=unk_threshold)
    return BidirectionalScorer(forward, backward)


def unigram_scorer(lines):
    forward = train_ngram(lines, order=1, discount=0.5, unk_threshold=0)
    backward = train_ngram(lines, order=1, direction=Direction.BACKWARD,
                           discount=0.5, unk_threshold=0)
    return BidirectionalScorer(forward, backward)


def assert_contiguous_blocks(sentence):
    for i in range(len(sentence.chunks)):
        block = sentence.block(i)
        assert block == list(range(block[0], block[-1] + 1)), (
            f"descendant block of chunk {i} not contiguous: {block}"
        )


def assert_root_final(sentence):
    assert sentence.chunks[-1].head == ROOT
