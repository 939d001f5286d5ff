"""Annotated-sentence data model and corpus ingestion.

Sentences are sequences of chunks (bunsetsu-style units: one content word
plus attached function words) with chunk-level dependency heads and case
roles. The canonical on-disk format is JSONL, one sentence object per
line; a CoNLL-U importer is provided for interoperability with treebank
tooling. All objects are immutable after construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import FormatError, InvariantError

ROOT = -1

ANIMACY_TAGS = frozenset({"animate", "inanimate"})
SEMANTIC_TAGS = frozenset({"time", "location", "animate", "inanimate"})

#: Characters whose presence disqualifies a sentence under the default filter.
DEFAULT_FORBIDDEN_SYMBOLS = frozenset(
    "()（）[]［］{}｛｝「」『』【】〈〉《》〔〕<>＜＞"
)

#: POS tags treated as verbal when counting clauses.
VERB_POS = frozenset({"VERB"})

#: POS tags treated as conjunctions (blocked at sentence-initial position
#: for topicalization).
CONJUNCTION_POS = frozenset({"CCONJ", "SCONJ", "CONJ"})


class CaseRole(str, Enum):
    TOP = "TOP"
    TIM = "TIM"
    LOC = "LOC"
    NOM = "NOM"
    DAT = "DAT"
    ACC = "ACC"
    ADVERB = "ADVERB"
    PREDICATE = "PREDICATE"
    OTHER = "OTHER"

    def __str__(self) -> str:  # pragma: no cover - repr sugar
        return self.value


class AdverbType(str, Enum):
    MODAL = "MODAL"
    TIME = "TIME"
    MANNER = "MANNER"
    RESULTIVE = "RESULTIVE"


class Label(str, Enum):
    PREFER1 = "PREFER1"
    PREFER2 = "PREFER2"
    BROKEN = "BROKEN"


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str = "X"
    particle: str | None = None
    semantic_tags: frozenset[str] = frozenset()

    def validate(self, sentence_id: str | None = None) -> None:
        if not self.surface:
            raise InvariantError("token.surface", "token surface is empty", sentence_id)
        if len(self.semantic_tags & ANIMACY_TAGS) > 1:
            raise InvariantError(
                "token.animacy",
                f"token {self.surface!r} is tagged both animate and inanimate",
                sentence_id,
            )


@dataclass(frozen=True)
class Chunk:
    tokens: tuple[Token, ...]
    head: int = ROOT
    case_role: CaseRole = CaseRole.OTHER
    adverb_type: AdverbType | None = None

    @property
    def surface(self) -> str:
        return "".join(t.surface for t in self.tokens)

    @property
    def particle(self) -> str | None:
        """Particle attached to this chunk: the last token carrying one."""
        for tok in reversed(self.tokens):
            if tok.particle is not None:
                return tok.particle
        return None

    def validate(self, index: int, sentence_id: str | None = None) -> None:
        if not self.tokens:
            raise InvariantError("chunk.tokens", f"chunk {index} has no tokens", sentence_id)
        for tok in self.tokens:
            tok.validate(sentence_id)
        if self.adverb_type is not None and self.case_role is not CaseRole.ADVERB:
            raise InvariantError(
                "chunk.adverb_type",
                f"chunk {index} has adverb_type but role {self.case_role.value}",
                sentence_id,
            )
        if self.head == index:
            raise InvariantError(
                "chunk.head", f"chunk {index} is its own head", sentence_id
            )


@dataclass(frozen=True)
class Sentence:
    id: str
    chunks: tuple[Chunk, ...]
    verb_lemma: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "chunks", tuple(self.chunks))

    def validate(self) -> "Sentence":
        """Check all construction-time invariants; returns self for chaining."""
        n = len(self.chunks)
        roots = [i for i, c in enumerate(self.chunks) if c.head == ROOT]
        if len(roots) != 1:
            raise InvariantError(
                "sentence.root", f"expected exactly one ROOT chunk, found {len(roots)}", self.id
            )
        for i, chunk in enumerate(self.chunks):
            chunk.validate(i, self.id)
            if chunk.head != ROOT and not (0 <= chunk.head < n):
                raise InvariantError(
                    "sentence.head_range",
                    f"chunk {i} head {chunk.head} out of range 0..{n - 1}",
                    self.id,
                )
        # Every head chain must terminate at the ROOT chunk without cycles.
        for i in range(n):
            seen = set()
            j = i
            while self.chunks[j].head != ROOT:
                if j in seen:
                    raise InvariantError(
                        "sentence.acyclic", f"head cycle through chunk {i}", self.id
                    )
                seen.add(j)
                j = self.chunks[j].head
        return self

    @property
    def root_index(self) -> int:
        for i, c in enumerate(self.chunks):
            if c.head == ROOT:
                return i
        raise InvariantError("sentence.root", "no ROOT chunk", self.id)

    def children(self, index: int) -> list[int]:
        return [i for i, c in enumerate(self.chunks) if c.head == index]

    def descendants(self, index: int) -> list[int]:
        """Indices of the subtree below ``index`` (excluding it), sorted."""
        out: list[int] = []
        stack = [index]
        while stack:
            i = stack.pop()
            kids = self.children(i)
            out.extend(kids)
            stack.extend(kids)
        return sorted(out)

    def block(self, index: int) -> list[int]:
        """Chunk ``index`` together with its descendants, sorted."""
        return sorted([index] + self.descendants(index))

    def role_indices(self, role: CaseRole) -> list[int]:
        return [i for i, c in enumerate(self.chunks) if c.case_role is role]


def render_text(sentence: Sentence, separator: str = "") -> str:
    """Concatenate all token surfaces in chunk order.

    The default empty separator matches unsegmented scripts.
    """
    return separator.join(c.surface for c in sentence.chunks)


# ---------------------------------------------------------------------------
# JSON (de)serialization


def token_to_dict(tok: Token) -> dict:
    return {
        "surface": tok.surface,
        "pos": tok.pos,
        "particle": tok.particle,
        "sem": sorted(tok.semantic_tags),
    }


def token_from_dict(obj: dict) -> Token:
    return Token(
        surface=obj["surface"],
        pos=obj.get("pos", "X"),
        particle=obj.get("particle"),
        semantic_tags=frozenset(obj.get("sem") or ()),
    )


def sentence_to_dict(sentence: Sentence) -> dict:
    return {
        "id": sentence.id,
        "verb_lemma": sentence.verb_lemma,
        "chunks": [
            {
                "head": c.head,
                "role": c.case_role.value,
                "adverb_type": c.adverb_type.value if c.adverb_type else None,
                "tokens": [token_to_dict(t) for t in c.tokens],
            }
            for c in sentence.chunks
        ],
    }


def sentence_from_dict(obj: dict) -> Sentence:
    chunks = []
    for c in obj["chunks"]:
        adverb_type = c.get("adverb_type")
        chunks.append(
            Chunk(
                tokens=tuple(token_from_dict(t) for t in c["tokens"]),
                head=c["head"],
                case_role=CaseRole(c["role"]),
                adverb_type=AdverbType(adverb_type) if adverb_type else None,
            )
        )
    return Sentence(
        id=obj["id"], chunks=tuple(chunks), verb_lemma=obj.get("verb_lemma")
    )


def load_jsonl(path: str | Path) -> list[Sentence]:
    """Load sentences from the canonical JSONL format, validating each one.

    Raises FormatError with the line number on malformed input and
    InvariantError naming the violated invariant and sentence id.
    """
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc}", line=lineno, path=str(path)) from exc
            try:
                sentence = sentence_from_dict(obj)
            except (KeyError, ValueError, TypeError) as exc:
                raise FormatError(
                    f"bad sentence record: {exc}", line=lineno, path=str(path)
                ) from exc
            sentence.validate()
            sentences.append(sentence)
    return sentences


def save_jsonl(sentences: Iterable[Sentence], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in sentences:
            fh.write(json.dumps(sentence_to_dict(s), ensure_ascii=False))
            fh.write("\n")


# ---------------------------------------------------------------------------
# CoNLL-U import

_MISC_SKIP = {"", "_"}


def _parse_misc(misc: str) -> dict[str, str]:
    items: dict[str, str] = {}
    if misc in _MISC_SKIP:
        return items
    for part in misc.split("|"):
        if "=" in part:
            key, value = part.split("=", 1)
            items[key] = value
    return items


def _conllu_sentence_blocks(path: str | Path) -> Iterator[tuple[list[str], list[tuple[int, list[str]]]]]:
    """Yield (comment_lines, [(lineno, columns), ...]) per sentence."""
    comments: list[str] = []
    rows: list[tuple[int, list[str]]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                if rows:
                    yield comments, rows
                comments, rows = [], []
                continue
            if line.startswith("#"):
                comments.append(line)
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise FormatError(
                    f"expected 10 tab-separated columns, got {len(cols)}",
                    line=lineno,
                    path=str(path),
                )
            # Multiword-token and empty-node lines carry no chunk annotation.
            if "-" in cols[0] or "." in cols[0]:
                continue
            rows.append((lineno, cols))
    if rows:
        yield comments, rows


def import_conllu(path: str | Path) -> list[Sentence]:
    """Import 10-column CoNLL-U where MISC carries chunk annotations.

    MISC items used: ``Chunk=<int>`` (required on every token; equal values
    group tokens into one chunk and must be contiguous), ``Role=<enum>`` and
    ``Sem=<tag,...>`` (optional). A token with UPOS ``ADP`` or ``PART`` is
    recorded as the chunk's particle. Chunk heads follow the dependency head
    of the chunk's head token (the last token pointing outside the chunk); a
    chunk with no outside-pointing token is the ROOT chunk. Comments
    ``# sent_id = ...`` and ``# verb_lemma = ...`` populate the sentence
    fields.
    """
    sentences = []
    for index, (comments, rows) in enumerate(_conllu_sentence_blocks(path)):
        sent_id = f"conllu-{index + 1}"
        verb_lemma = None
        for comment in comments:
            body = comment.lstrip("#").strip()
            if "=" in body:
                key, value = (part.strip() for part in body.split("=", 1))
                if key == "sent_id":
                    sent_id = value
                elif key == "verb_lemma":
                    verb_lemma = value

        # Group contiguous runs of equal Chunk ids.
        chunk_ids: list[int] = []
        token_info = []
        for lineno, cols in rows:
            misc = _parse_misc(cols[9])
            if "Chunk" not in misc:
                raise FormatError(
                    f"token {cols[0]} ({cols[1]!r}) lacks a Chunk item in MISC",
                    line=lineno,
                    path=str(path),
                )
            try:
                chunk_ids.append(int(misc["Chunk"]))
            except ValueError as exc:
                raise FormatError(
                    f"non-integer Chunk value {misc['Chunk']!r}", line=lineno, path=str(path)
                ) from exc
            token_info.append((lineno, cols, misc))

        order: list[int] = []
        for cid in chunk_ids:
            if cid not in order:
                order.append(cid)
        for cid in order:
            positions = [i for i, c in enumerate(chunk_ids) if c == cid]
            if positions != list(range(positions[0], positions[-1] + 1)):
                raise FormatError(
                    f"tokens of chunk {cid} are not contiguous",
                    line=token_info[positions[0]][0],
                    path=str(path),
                )

        chunk_of_token: dict[int, int] = {}  # CoNLL-U token id -> chunk position
        for (lineno, cols, misc), cid in zip(token_info, chunk_ids):
            chunk_of_token[int(cols[0])] = order.index(cid)

        chunks: list[Chunk] = []
        for pos, cid in enumerate(order):
            members = [ti for ti, c in zip(token_info, chunk_ids) if c == cid]
            tokens = []
            role: CaseRole | None = None
            for lineno, cols, misc in members:
                upos = cols[3]
                sem = frozenset(t for t in misc.get("Sem", "").split(",") if t)
                tokens.append(
                    Token(
                        surface=cols[1],
                        pos=upos,
                        particle=cols[1] if upos in ("ADP", "PART") else None,
                        semantic_tags=sem,
                    )
                )
                if role is None and "Role" in misc:
                    try:
                        role = CaseRole(misc["Role"])
                    except ValueError as exc:
                        raise FormatError(
                            f"unknown Role {misc['Role']!r}", line=lineno, path=str(path)
                        ) from exc
            # Head: dependency head of the last token pointing outside the chunk.
            head = ROOT
            member_ids = {int(cols[0]) for _, cols, _ in members}
            for lineno, cols, misc in members:
                dep_head = int(cols[6])
                if dep_head == 0:
                    head = ROOT
                elif dep_head not in member_ids:
                    head = chunk_of_token.get(dep_head, ROOT)
            chunks.append(
                Chunk(tokens=tuple(tokens), head=head, case_role=role or CaseRole.OTHER)
            )

        sentence = Sentence(id=sent_id, chunks=tuple(chunks), verb_lemma=verb_lemma)
        sentence.validate()
        sentences.append(sentence)
    return sentences


# ---------------------------------------------------------------------------
# Sentence filtering


@dataclass(frozen=True)
class FilterCriteria:
    """Sentence-level admission criteria; all enabled checks must pass.

    ``require_single_predicate`` demands exactly one PREDICATE-role chunk
    and that it be the ROOT (the strictest reading of "one verb"). A clause
    is a maximal subtree headed by a PREDICATE-role or verb-POS chunk; a
    backward dependency is a chunk whose head precedes it.
    """

    max_clauses: int = 5
    require_single_predicate: bool = True
    require_sibling_chunks_with_particle_or_adverb: bool = True
    forbid_symbols: frozenset[str] = DEFAULT_FORBIDDEN_SYMBOLS
    forbid_backward_dependency: bool = True


def _is_clause_head(chunk: Chunk) -> bool:
    if chunk.case_role is CaseRole.PREDICATE:
        return True
    return any(tok.pos in VERB_POS for tok in chunk.tokens)


def passes_filter(sentence: Sentence, criteria: FilterCriteria | None = None) -> bool:
    criteria = criteria or FilterCriteria()

    if criteria.forbid_symbols:
        text = render_text(sentence)
        if any(ch in criteria.forbid_symbols for ch in text):
            return False

    if criteria.forbid_backward_dependency:
        for i, chunk in enumerate(sentence.chunks):
            if chunk.head != ROOT and chunk.head < i:
                return False

    if criteria.max_clauses is not None:
        n_clauses = sum(1 for c in sentence.chunks if _is_clause_head(c))
        if n_clauses > criteria.max_clauses:
            return False

    if criteria.require_single_predicate:
        predicates = sentence.role_indices(CaseRole.PREDICATE)
        if len(predicates) != 1 or sentence.chunks[predicates[0]].head != ROOT:
            return False

    if criteria.require_sibling_chunks_with_particle_or_adverb:
        found = False
        for head in range(len(sentence.chunks)):
            siblings = sentence.children(head)
            qualified = [
                i
                for i in siblings
                if sentence.chunks[i].particle is not None
                or sentence.chunks[i].case_role is CaseRole.ADVERB
            ]
            if len(qualified) >= 2:
                found = True
                break
        if not found:
            return False

    return True


def filter_sentences(
    sentences: Iterable[Sentence], criteria: FilterCriteria | None = None
) -> list[Sentence]:
    """Keep exactly the sentences satisfying all enabled criteria."""
    criteria = criteria or FilterCriteria()
    return [s for s in sentences if passes_filter(s, criteria)]


# ---------------------------------------------------------------------------
# Preference pairs


@dataclass(frozen=True)
class PreferencePair:
    id: str
    order1: Sentence
    order2: Sentence
    worker_labels: tuple[Label, ...]
    gold: Label | None = field(default=None)

    def validate(self) -> "PreferencePair":
        bag1 = sorted(c.surface for c in self.order1.chunks)
        bag2 = sorted(c.surface for c in self.order2.chunks)
        if bag1 != bag2:
            raise InvariantError(
                "pair.chunks",
                "order1 and order2 do not contain the same multiset of chunks",
                self.id,
            )
        if self.gold is not None and self.gold not in (Label.PREFER1, Label.PREFER2):
            raise InvariantError("pair.gold", f"gold may not be {self.gold}", self.id)
        return self


def majority_gold(labels: Sequence[Label], agreement: float = 0.9) -> Label | None:
    """Majority label when no label is BROKEN and agreement is at threshold.

    Requires at least ceil(agreement * n) identical non-BROKEN labels.
    """
    if not labels or any(lab is Label.BROKEN for lab in labels):
        return None
    needed = math.ceil(agreement * len(labels))
    for candidate in (Label.PREFER1, Label.PREFER2):
        if sum(1 for lab in labels if lab is candidate) >= needed:
            return candidate
    return None


def pair_from_dict(obj: dict) -> PreferencePair:
    labels = tuple(Label(lab) for lab in obj["labels"])
    pair = PreferencePair(
        id=obj["id"],
        order1=sentence_from_dict(obj["order1"]),
        order2=sentence_from_dict(obj["order2"]),
        worker_labels=labels,
        gold=majority_gold(labels),
    )
    pair.order1.validate()
    pair.order2.validate()
    return pair.validate()


def pair_to_dict(pair: PreferencePair) -> dict:
    return {
        "id": pair.id,
        "order1": sentence_to_dict(pair.order1),
        "order2": sentence_to_dict(pair.order2),
        "labels": [lab.value for lab in pair.worker_labels],
    }


def load_preference_pairs(path: str | Path) -> list[PreferencePair]:
    """Load preference pairs; gold is populated per the agreement rule."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc}", line=lineno, path=str(path)) from exc
            try:
                pairs.append(pair_from_dict(obj))
            except (KeyError, ValueError, TypeError) as exc:
                raise FormatError(
                    f"bad pair record: {exc}", line=lineno, path=str(path)
                ) from exc
    return pairs
