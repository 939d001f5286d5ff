"""Controlled word-order variants of annotated sentences.

All transforms are pure functions: they return new Sentence values, never
mutate, and move a chunk together with its whole descendant subtree as one
contiguous block. Dependency structure is preserved; only linear order
(and, for topicalization-style transforms, one particle) changes.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, replace
from enum import Enum

from .corpus import CONJUNCTION_POS, ROOT, CaseRole, Chunk, Sentence
from .errors import (
    ConjunctionInitialError,
    NoScrambleSiteError,
    NotRootArgumentError,
    RoleNotUniqueError,
    TooManyOrdersError,
    UnsupportedParticleError,
)

DEFAULT_ENUMERATION_CAP = 5040

#: Adverbial (toritate) particles accepted by substitute_adverbial_particle.
DEFAULT_ADVERBIAL_PARTICLES = frozenset({"は", "こそ", "も", "だけ"})

#: Case particles whose rewrite behavior is known: が and を are deleted
#: before the appended particle, に and で are kept and fused.
_DELETED_PARTICLES = ("が", "を")
_KEPT_PARTICLES = ("に", "で")


class RewriteAction(str, Enum):
    DELETE_THEN_APPEND = "DELETE_THEN_APPEND"
    KEEP_THEN_APPEND = "KEEP_THEN_APPEND"


@dataclass(frozen=True)
class ParticleRewriteRule:
    original_particle: str
    action: RewriteAction
    appended_particle: str

    def __post_init__(self) -> None:
        if not self.appended_particle:
            raise ValueError("appended_particle must be non-empty")


def rules_for_particle(appended: str) -> dict[str, ParticleRewriteRule]:
    """Rewrite table for appending one adverbial particle to a case particle."""
    rules = {}
    for particle in _DELETED_PARTICLES:
        rules[particle] = ParticleRewriteRule(particle, RewriteAction.DELETE_THEN_APPEND, appended)
    for particle in _KEPT_PARTICLES:
        rules[particle] = ParticleRewriteRule(particle, RewriteAction.KEEP_THEN_APPEND, appended)
    return rules


DEFAULT_TOPIC_RULES = rules_for_particle("は")


@dataclass(frozen=True)
class VariantSet:
    """A base sentence plus labeled word-order variants of it."""

    base: Sentence
    variants: tuple[tuple[str, Sentence], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variants", tuple(self.variants))
        labels = [label for label, _ in self.variants]
        if len(labels) != len(set(labels)):
            raise ValueError("variant labels must be unique within the set")

    def labels(self) -> list[str]:
        return [label for label, _ in self.variants]


# ---------------------------------------------------------------------------
# Order plumbing


def _apply_order(sentence: Sentence, new_order: list[int]) -> Sentence:
    """Rebuild the sentence with chunks in new_order (old indices), remapping heads."""
    old_to_new = {old: new for new, old in enumerate(new_order)}
    chunks = []
    for old in new_order:
        chunk = sentence.chunks[old]
        head = chunk.head if chunk.head == ROOT else old_to_new[chunk.head]
        chunks.append(replace(chunk, head=head))
    return replace(sentence, chunks=tuple(chunks))


def permute_children(sentence: Sentence, site: int, perm: tuple[int, ...]) -> Sentence:
    """Reorder the site's child blocks per ``perm`` (slot indices, new order)."""
    kids = sentence.children(site)
    blocks = [sentence.block(k) for k in kids]
    members = {i for block in blocks for i in block}
    flattened = [i for slot in perm for i in blocks[slot]]
    new_order: list[int] = []
    placed = False
    for i in range(len(sentence.chunks)):
        if i in members:
            if not placed:
                new_order.extend(flattened)
                placed = True
        else:
            new_order.append(i)
    return _apply_order(sentence, new_order)


def _move_block_front(sentence: Sentence, index: int) -> Sentence:
    block = sentence.block(index)
    member = set(block)
    rest = [i for i in range(len(sentence.chunks)) if i not in member]
    return _apply_order(sentence, block + rest)


def _swap_blocks(sentence: Sentence, a: int, b: int) -> Sentence:
    block_a, block_b = sentence.block(a), sentence.block(b)
    if block_a[0] > block_b[0]:
        block_a, block_b = block_b, block_a
    span = range(block_a[0], block_b[-1] + 1)
    ab = set(block_a) | set(block_b)
    middle = [i for i in span if i not in ab]
    new_segment = block_b + middle + block_a
    new_order = list(range(0, block_a[0])) + new_segment + list(
        range(block_b[-1] + 1, len(sentence.chunks))
    )
    return _apply_order(sentence, new_order)


# ---------------------------------------------------------------------------
# Transforms


def scramble_sites(sentence: Sentence) -> list[int]:
    """Chunks with at least two dependents, i.e. eligible scramble sites."""
    return [i for i in range(len(sentence.chunks)) if len(sentence.children(i)) >= 2]


def scramble(sentence: Sentence, rng_seed: int) -> Sentence:
    """Randomly reorder the children of one randomly chosen site.

    The site is drawn uniformly among chunks with >= 2 children and the new
    child order uniformly among the non-identity permutations; each child
    moves with all its descendants as one block. Deterministic per seed.
    """
    sites = scramble_sites(sentence)
    if not sites:
        raise NoScrambleSiteError(
            f"sentence {sentence.id} has no chunk with two or more children"
        )
    rng = random.Random(rng_seed)
    site = rng.choice(sites)
    k = len(sentence.children(site))
    identity = list(range(k))
    perm = identity[:]
    while perm == identity:
        rng.shuffle(perm)
    return permute_children(sentence, site, tuple(perm))


def enumerate_orders(
    sentence: Sentence, site: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> VariantSet:
    """All k! orderings of the site's children, labeled in one-line notation.

    Includes the original order (label "01...k-1"). Descendants travel with
    their heads; no dependency is altered.
    """
    kids = sentence.children(site)
    k = len(kids)
    if k < 2:
        raise NoScrambleSiteError(f"chunk {site} has {k} children; need at least 2")
    if math.factorial(k) > cap:
        raise TooManyOrdersError(k, cap)
    variants = []
    for perm in itertools.permutations(range(k)):
        label = "".join(str(slot) for slot in perm)
        variants.append((label, permute_children(sentence, site, perm)))
    return VariantSet(base=sentence, variants=tuple(variants))


def _unique_role_index(sentence: Sentence, role: CaseRole) -> int:
    indices = sentence.role_indices(role)
    if len(indices) != 1:
        raise RoleNotUniqueError(
            f"sentence {sentence.id}: role {role.value} occurs {len(indices)} times, need exactly 1"
        )
    return indices[0]


def swap_cases(sentence: Sentence, role_a: CaseRole, role_b: CaseRole) -> Sentence:
    """Exchange the linear positions of the unique role_a and role_b chunks.

    Both chunks (with their descendant blocks) must be siblings; any
    material between them keeps its position relative to the swap span.
    Applying the swap twice restores the original sentence.
    """
    a = _unique_role_index(sentence, role_a)
    b = _unique_role_index(sentence, role_b)
    if sentence.chunks[a].head != sentence.chunks[b].head:
        raise RoleNotUniqueError(
            f"sentence {sentence.id}: {role_a.value} and {role_b.value} chunks are not siblings"
        )
    return _swap_blocks(sentence, a, b)


def _rewrite_particle(chunk: Chunk, rules: dict[str, ParticleRewriteRule]) -> Chunk:
    particle = chunk.particle
    if particle is None:
        raise UnsupportedParticleError("chunk carries no particle")
    rule = rules.get(particle)
    if rule is None:
        raise UnsupportedParticleError(f"no rewrite rule for particle {particle!r}")

    position = max(i for i, tok in enumerate(chunk.tokens) if tok.particle is not None)
    token = chunk.tokens[position]
    if rule.action is RewriteAction.DELETE_THEN_APPEND:
        if token.surface == particle:
            surface = rule.appended_particle
        elif token.surface.endswith(particle):
            surface = token.surface[: -len(particle)] + rule.appended_particle
        else:
            raise UnsupportedParticleError(
                f"particle {particle!r} is not a suffix of token {token.surface!r}"
            )
        new_particle = rule.appended_particle
    else:
        surface = token.surface + rule.appended_particle
        new_particle = particle + rule.appended_particle

    tokens = list(chunk.tokens)
    tokens[position] = replace(token, surface=surface, particle=new_particle)
    return replace(chunk, tokens=tuple(tokens))


def _check_root_argument(sentence: Sentence, index: int) -> None:
    # Fronting an embedded chunk would tear its ancestors' spans apart;
    # only direct dependents of the ROOT chunk may move to the front.
    if sentence.chunks[index].head != sentence.root_index:
        raise NotRootArgumentError(
            f"chunk {index} is not a direct dependent of the root predicate"
        )


def _check_not_conjunction_initial(sentence: Sentence) -> None:
    first = sentence.chunks[0]
    if any(tok.pos in CONJUNCTION_POS for tok in first.tokens):
        raise ConjunctionInitialError(
            f"sentence {sentence.id} begins with a conjunction chunk"
        )


def topicalize(
    sentence: Sentence,
    role: CaseRole,
    rules: dict[str, ParticleRewriteRule] | None = None,
) -> Sentence:
    """Front the unique chunk of the given role and mark it as topic.

    The chunk (with its descendants) moves to sentence-initial position, its
    case particle is rewritten per the topic rule table (delete が/を, fuse
    に/で), and its role becomes TOP. Fronting an already-initial chunk only
    rewrites the particle.
    """
    _check_not_conjunction_initial(sentence)
    rules = rules if rules is not None else DEFAULT_TOPIC_RULES
    index = _unique_role_index(sentence, role)
    _check_root_argument(sentence, index)
    chunk = _rewrite_particle(sentence.chunks[index], rules)
    chunk = replace(chunk, case_role=CaseRole.TOP)
    chunks = list(sentence.chunks)
    chunks[index] = chunk
    rewritten = replace(sentence, chunks=tuple(chunks))
    return _move_block_front(rewritten, index)


def substitute_adverbial_particle(
    sentence: Sentence,
    role: CaseRole,
    particle: str,
    moved: bool = False,
    allowed: frozenset[str] = DEFAULT_ADVERBIAL_PARTICLES,
) -> Sentence:
    """Replace the case particle of the role's chunk with an adverbial particle.

    Uses the same delete/keep rules as topicalization, generalized to the
    given particle. With ``moved`` the chunk also fronts (the Moved variant);
    otherwise it stays in place (Non-moved). The case role is unchanged.
    """
    if particle not in allowed:
        raise UnsupportedParticleError(
            f"adverbial particle {particle!r} not in the configured set {sorted(allowed)}"
        )
    _check_not_conjunction_initial(sentence)
    index = _unique_role_index(sentence, role)
    if moved:
        _check_root_argument(sentence, index)
    chunk = _rewrite_particle(sentence.chunks[index], rules_for_particle(particle))
    chunks = list(sentence.chunks)
    chunks[index] = chunk
    rewritten = replace(sentence, chunks=tuple(chunks))
    if moved:
        return _move_block_front(rewritten, index)
    return rewritten
