"""
Pytest configuration and fixtures for complement-miner tests
"""

from collections.abc import Callable
from pathlib import Path

import pytest

from complement_miner.corpus import save_corpus, save_gold
from complement_miner.knowledge import build_domain_knowledge
from complement_miner.model import DomainKnowledge, GoldAnnotation, ParsedSentence, Review
from tests.fixture_corpus import (
    CATEGORY,
    build_fixture_corpus,
    build_fixture_gold,
    parse_compact,
)

PHONE_WORDS = "It/PRP works/VBZ/work with/IN my/PRP$ phone/NN"
PHONE_RELATIONS = "nsubj 2 1; root 0 2; case 5 3; nmod:poss 5 4; nmod:with 2 5"


@pytest.fixture
def phone_sentence() -> ParsedSentence:
    """The parse of "It works with my phone" with its five relations"""
    return parse_compact("r1:0", PHONE_WORDS, PHONE_RELATIONS, "r1")


@pytest.fixture
def compact() -> Callable[..., ParsedSentence]:
    """Build sentences from the compact word/TAG/lemma notation"""

    def build(words: str, relations: str, sentence_id: str = "s:0") -> ParsedSentence:
        return parse_compact(sentence_id, words, relations, sentence_id.split(":")[0])

    return build


@pytest.fixture
def fixture_reviews() -> list[Review]:
    """The 50-review hand-parsed fixture corpus"""
    return build_fixture_corpus()


@pytest.fixture
def fixture_gold() -> dict[str, GoldAnnotation]:
    return build_fixture_gold()


@pytest.fixture
def fixture_knowledge(fixture_reviews: list[Review]) -> DomainKnowledge:
    return build_domain_knowledge(fixture_reviews)


@pytest.fixture
def fixture_files(
    tmp_path: Path,
    fixture_reviews: list[Review],
    fixture_gold: dict[str, GoldAnnotation],
) -> dict[str, Path]:
    """Fixture corpus and gold annotations written to a temp directory"""
    corpus = tmp_path / "corpus.jsonl"
    gold = tmp_path / "gold.jsonl"
    save_corpus(fixture_reviews, corpus)
    save_gold(fixture_gold.values(), gold)
    return {"corpus": corpus, "gold": gold, "dir": tmp_path}


@pytest.fixture
def category() -> str:
    return CATEGORY
