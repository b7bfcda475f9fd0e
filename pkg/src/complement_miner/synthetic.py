"""
Synthetic corpus generator

Deterministic templated reviews for benchmarks and throughput tests. The
sentences come pre-parsed (tags and collapsed relations are part of each
template), so no parser is needed. Not meant as evaluation data.
"""

import random
from collections.abc import Callable

from .model import DependencyRelation, ParsedSentence, Review, Token

Words = list[tuple[str, str, str]]
Rels = list[tuple[str, int, int]]
Template = Callable[[random.Random], tuple[Words, Rels]]

_ENTITIES = [
    ("phone", "NN", "phone"),
    ("tablet", "NN", "tablet"),
    ("iPad", "NNP", "ipad"),
    ("laptop", "NN", "laptop"),
    ("Kindle", "NNP", "kindle"),
    ("book", "NN", "book"),
]
_SEED_VERBS = [("works", "work"), ("fits", "fit")]
_HOLD_VERBS = [("holds", "hold"), ("supports", "support"), ("protects", "protect")]
_ATTACH_VERBS = [("mount", "mount"), ("clip", "clip"), ("attach", "attach")]
_PREPS = ["to", "on", "with"]
_NOUNS = ["screen", "stand", "price", "quality", "hinge"]
_ADJECTIVES = ["great", "sturdy", "cheap", "solid"]


def _seed_verb_with_my(rng: random.Random) -> tuple[Words, Rels]:
    verb, lemma = rng.choice(_SEED_VERBS)
    entity = rng.choice(_ENTITIES)
    words = [("It", "PRP", "it"), (verb, "VBZ", lemma), ("with", "IN", "with"),
             ("my", "PRP$", "my"), entity]
    rels = [("nsubj", 2, 1), ("root", 0, 2), ("case", 5, 3), ("nmod:poss", 5, 4),
            ("nmod:with", 2, 5)]
    return words, rels


def _this_verb_my(rng: random.Random) -> tuple[Words, Rels]:
    verb, lemma = rng.choice(_HOLD_VERBS)
    entity = rng.choice(_ENTITIES)
    words = [("This", "DT", "this"), (verb, "VBZ", lemma), ("my", "PRP$", "my"),
             entity, ("well", "RB", "well")]
    rels = [("nsubj", 2, 1), ("root", 0, 2), ("nmod:poss", 4, 3), ("dobj", 2, 4),
            ("advmod", 2, 5)]
    return words, rels


def _attach_it_to_my(rng: random.Random) -> tuple[Words, Rels]:
    verb, lemma = rng.choice(_ATTACH_VERBS)
    prep = rng.choice(_PREPS)
    entity = rng.choice(_ENTITIES)
    words = [("I", "PRP", "i"), (verb, "VBP", lemma), ("it", "PRP", "it"),
             (prep, "IN", prep), ("my", "PRP$", "my"), entity]
    rels = [("nsubj", 2, 1), ("root", 0, 2), ("dobj", 2, 3), ("case", 6, 4),
            ("nmod:poss", 6, 5), (f"nmod:{prep}", 2, 6)]
    return words, rels


def _noun_is_adjective(rng: random.Random) -> tuple[Words, Rels]:
    noun = rng.choice(_NOUNS)
    adjective = rng.choice(_ADJECTIVES)
    words = [("The", "DT", "the"), (noun, "NN", noun), ("is", "VBZ", "be"),
             (adjective, "JJ", adjective)]
    rels = [("det", 2, 1), ("nsubj", 4, 2), ("cop", 4, 3), ("root", 0, 4)]
    return words, rels


def _it_fits_entity(rng: random.Random) -> tuple[Words, Rels]:
    entity = rng.choice(_ENTITIES)
    words = [("It", "DT", "it"), ("fits", "VBZ", "fit"), entity]
    rels = [("nsubj", 2, 1), ("root", 0, 2), ("dobj", 2, 3)]
    return words, rels


TEMPLATES: tuple[Template, ...] = (
    _seed_verb_with_my,
    _this_verb_my,
    _attach_it_to_my,
    _noun_is_adjective,
    _it_fits_entity,
)


def _sentence(words: Words, rels: Rels, sentence_id: str, review_id: str) -> ParsedSentence:
    tokens = tuple(
        Token(i, surface, lemma, pos) for i, (surface, pos, lemma) in enumerate(words, start=1)
    )
    relations = tuple(DependencyRelation(t, g, d) for t, g, d in rels)
    return ParsedSentence(sentence_id, tokens, relations, review_id)


def generate_reviews(
    n: int,
    *,
    category: str = "Tablet Stand",
    seed: int = 0,
    products: int = 5,
    max_sentences: int = 3,
) -> list[Review]:
    """Generate ``n`` reviews of one category; same arguments, same corpus"""
    if n < 0:
        raise ValueError(f"review count must be >= 0, got {n}")
    rng = random.Random(seed)
    reviews = []
    for i in range(n):
        review_id = f"syn-{i:06d}"
        sentences = []
        for ordinal in range(rng.randint(1, max_sentences)):
            words, rels = rng.choice(TEMPLATES)(rng)
            sentences.append(_sentence(words, rels, f"{review_id}:{ordinal}", review_id))
        product_id = f"product-{rng.randrange(products)}"
        reviews.append(Review(review_id, product_id, category, tuple(sentences)))
    return reviews
