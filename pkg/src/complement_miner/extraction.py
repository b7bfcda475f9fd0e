"""
Complementary entity extraction

Runs catalog paths over parsed sentences, widens every CETT binding into a
noun phrase and optionally filters the result with domain knowledge:
1. basic       - paths 1-6, any verb fills the VERB slot
2. knowledge   - same paths; VERB must be a domain-specific or seed verb and
                 single-word CETT chunks must be candidate complementary entities
3. baseline-my - nouns modified by "my"
4. baseline-np - every noun phrase of the sentence
"""

import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from functools import partial

from .catalog import PathCatalog, PathRole
from .chunking import noun_phrases, np_chunk
from .errors import DomainMismatchError
from .model import (
    DomainKnowledge,
    Extraction,
    ExtractionRecord,
    ParsedSentence,
    Review,
    TokenSpan,
)
from .paths import PathMatch, match_path

logger = logging.getLogger(__name__)

NOUN_PHRASE_PATH_ID = "np"

Accept = Callable[[ParsedSentence, PathMatch, TokenSpan], bool]


class ExtractionMode(str, Enum):
    BASIC = "basic"
    KNOWLEDGE = "knowledge"
    BASELINE_MY = "baseline-my"
    BASELINE_NP = "baseline-np"


def _collect(
    sent: ParsedSentence,
    catalog: PathCatalog,
    roles: Iterable[PathRole],
    accept: Accept | None = None,
) -> list[Extraction]:
    wanted = set(roles)
    found: dict[TokenSpan, tuple[int, Extraction]] = {}
    for position, entry in enumerate(catalog):
        if entry.role not in wanted or entry.pattern.capture_node is None:
            continue
        for match in match_path(entry.pattern, sent):
            head = match.cett
            assert head is not None
            span = np_chunk(sent, head)
            if span in found or (accept is not None and not accept(sent, match, span)):
                continue
            extraction = Extraction(
                sent.sentence_id, head, span, sent.text(span), entry.path_id
            )
            found[span] = (position, extraction)
    ordered = sorted(found.items(), key=lambda item: (item[0], item[1][0]))
    return [extraction for _, (_, extraction) in ordered]


def extract_basic(
    sent: ParsedSentence, catalog: PathCatalog | None = None
) -> list[Extraction]:
    """Extract with paths 1-6 (and user paths), any verb filling the VERB slot"""
    return _collect(sent, catalog or PathCatalog.default(), [PathRole.BASIC])


def knowledge_filter(dk: DomainKnowledge) -> Accept:
    """
    The knowledge check applied to every match

    VERB bindings need a domain-specific or seed verb lemma; CETT bindings need
    their lowercased chunk text in the candidate set unless the chunk spans
    more than one token.
    """

    def accept(sent: ParsedSentence, match: PathMatch, span: TokenSpan) -> bool:
        verb = match.verb
        if verb is not None and not dk.verb_allowed(sent.token(verb).lemma):
            return False
        if len(span) > 1:
            return True
        return dk.entity_known(sent.text(span))

    return accept


def extract_with_knowledge(
    sent: ParsedSentence,
    catalog: PathCatalog | None,
    dk: DomainKnowledge,
    *,
    category: str,
) -> list[Extraction]:
    """Extract like extract_basic, keeping only matches that pass the knowledge check"""
    if dk.domain != category:
        raise DomainMismatchError(
            f"knowledge for '{dk.domain}' applied to a '{category}' review "
            f"(sentence {sent.sentence_id})"
        )
    return _collect(
        sent, catalog or PathCatalog.default(), [PathRole.BASIC], knowledge_filter(dk)
    )


def extract_baseline_my(
    sent: ParsedSentence, catalog: PathCatalog | None = None
) -> list[Extraction]:
    """Extract every noun (phrase) modified by "my" """
    return _collect(sent, catalog or PathCatalog.default(), [PathRole.BASELINE])


def extract_noun_phrases(sent: ParsedSentence) -> list[Extraction]:
    """Extract every noun phrase, regardless of context"""
    return [
        Extraction(sent.sentence_id, span.end, span, sent.text(span), NOUN_PHRASE_PATH_ID)
        for span in noun_phrases(sent)
    ]


class ComplementExtractor:
    """
    Apply one extraction mode to reviews

    Knowledge mode requires a DomainKnowledge bundle whose domain equals the
    category of every review it is applied to.
    """

    def __init__(
        self,
        mode: ExtractionMode | str = ExtractionMode.BASIC,
        *,
        catalog: PathCatalog | None = None,
        knowledge: DomainKnowledge | None = None,
    ):
        self.mode = ExtractionMode(mode)
        self.catalog = catalog or PathCatalog.default()
        self.knowledge = knowledge
        if self.mode == ExtractionMode.KNOWLEDGE and knowledge is None:
            raise ValueError("knowledge mode needs a domain knowledge bundle")

    def extract_sentence(
        self, sent: ParsedSentence, category: str | None = None
    ) -> list[Extraction]:
        """Extract from one sentence according to the configured mode"""
        if self.mode == ExtractionMode.BASIC:
            return extract_basic(sent, self.catalog)
        if self.mode == ExtractionMode.BASELINE_MY:
            return extract_baseline_my(sent, self.catalog)
        if self.mode == ExtractionMode.BASELINE_NP:
            return extract_noun_phrases(sent)
        assert self.knowledge is not None
        return extract_with_knowledge(
            sent,
            self.catalog,
            self.knowledge,
            category=category if category is not None else self.knowledge.domain,
        )

    def extract_review(self, review: Review) -> list[ExtractionRecord]:
        """Extract from every sentence of a review, in sentence order"""
        return [
            ExtractionRecord(extraction, review.review_id, review.product_id)
            for sent in review.sentences
            for extraction in self.extract_sentence(sent, review.category)
        ]

    def extract_corpus(
        self, reviews: Sequence[Review], *, workers: int = 1
    ) -> list[ExtractionRecord]:
        """
        Extract from a whole corpus

        With workers > 1 reviews are spread over a process pool; the output
        order matches the sequential run.
        """
        logger.info(
            f"🔄 Extracting ({self.mode.value}) from {len(reviews)} reviews"
            + (f" with {workers} workers" if workers > 1 else "")
        )
        if workers > 1 and len(reviews) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                chunks = pool.map(
                    partial(_extract_review, self),
                    reviews,
                    chunksize=max(1, len(reviews) // (workers * 4)),
                )
                records = [record for chunk in chunks for record in chunk]
        else:
            records = [record for review in reviews for record in self.extract_review(review)]
        logger.info(f"✅ {len(records)} extractions")
        return records


def _extract_review(
    extractor: ComplementExtractor, review: Review
) -> list[ExtractionRecord]:
    return extractor.extract_review(review)
