"""
Core model - tokens, parsed sentences, reviews, extractions and domain knowledge

All types are frozen dataclasses and validate their invariants on construction:
1. Token indices are 1-based and gap free inside a sentence
2. Relations reference tokens of their own sentence (index 0 is the virtual ROOT)
3. Lemmas are lowercase; a missing lemma falls back to the lowercased surface
"""

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any, Literal, NamedTuple

from .errors import CorpusValidationError, UnresolvedRelationError

ROOT_INDEX = 0
ROOT_POS = "None"

Side = Literal["gov", "dep"]


class Endpoint(NamedTuple):
    """Resolved attributes of one side of a dependency relation"""

    surface: str
    lemma: str
    pos: str
    index: int


ROOT_ENDPOINT = Endpoint("ROOT", "root", ROOT_POS, ROOT_INDEX)


@dataclass(frozen=True)
class Token:
    """One word of a parsed sentence"""

    index: int
    surface: str
    lemma: str
    pos: str

    def __post_init__(self) -> None:
        if self.index < 1:
            raise CorpusValidationError(f"token index must be >= 1, got {self.index}")
        if not self.lemma:
            raise CorpusValidationError(f"token {self.index} has an empty lemma")
        if self.lemma != self.lemma.lower():
            raise CorpusValidationError(
                f"token {self.index} lemma '{self.lemma}' is not lowercase"
            )

    @classmethod
    def create(
        cls, index: int, surface: str, pos: str, lemma: str | None = None
    ) -> "Token":
        """Build a token, falling back to the lowercased surface form as lemma"""
        return cls(index, str(surface), str(lemma or surface).lower(), pos)


@dataclass(frozen=True)
class DependencyRelation:
    """A typed link from a governor token to a dependent token"""

    rel_type: str
    gov_idx: int
    dep_idx: int

    def __post_init__(self) -> None:
        if self.dep_idx < 1:
            raise CorpusValidationError(f"{self}: dependent index must be >= 1")
        if self.gov_idx < 0:
            raise CorpusValidationError(f"{self}: governor index must be >= 0")
        if self.gov_idx == self.dep_idx:
            raise CorpusValidationError(f"{self}: governor equals dependent")

    def __str__(self) -> str:
        return f"{self.rel_type}({self.gov_idx}, {self.dep_idx})"


@dataclass(frozen=True)
class ParsedSentence:
    """A dependency-parsed sentence; ids default to ``<review_id>:<ordinal>``"""

    sentence_id: str
    tokens: tuple[Token, ...]
    relations: tuple[DependencyRelation, ...]
    review_id: str = ""

    def __post_init__(self) -> None:
        for position, token in enumerate(self.tokens, start=1):
            if token.index != position:
                raise CorpusValidationError(
                    f"sentence {self.sentence_id}: expected token index {position}, "
                    f"got {token.index}"
                )
        for rel in self.relations:
            if rel.dep_idx > len(self.tokens) or rel.gov_idx > len(self.tokens):
                raise CorpusValidationError(
                    f"sentence {self.sentence_id}: relation {rel} points past "
                    f"{len(self.tokens)} tokens"
                )

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, index: int) -> Token:
        """Get a token by its 1-based index"""
        if not 1 <= index <= len(self.tokens):
            raise UnresolvedRelationError(
                f"sentence {self.sentence_id} has no token {index}"
            )
        return self.tokens[index - 1]

    def endpoint(self, rel: DependencyRelation, side: Side) -> Endpoint:
        """Shorthand for resolve_endpoint(self, rel, side)"""
        return resolve_endpoint(self, rel, side)

    def text(self, span: "TokenSpan | None" = None) -> str:
        """Space-joined surface forms of the sentence or of one span"""
        if span is None:
            return " ".join(token.surface for token in self.tokens)
        return " ".join(self.token(i).surface for i in span.indices())


def resolve_endpoint(
    sentence: ParsedSentence, rel: DependencyRelation, side: Side
) -> Endpoint:
    """
    Resolve the governor or dependent of a relation to token attributes

    Index 0 on the governor side resolves to the virtual ROOT whose POS is "None".
    Raises UnresolvedRelationError when the index lies outside the sentence.
    """
    index = rel.gov_idx if side == "gov" else rel.dep_idx
    if index == ROOT_INDEX and side == "gov":
        return ROOT_ENDPOINT
    token = sentence.token(index)
    return Endpoint(token.surface, token.lemma, token.pos, token.index)


@dataclass(frozen=True)
class Review:
    """A review of one target product; the category is the knowledge domain"""

    review_id: str
    product_id: str
    category: str
    sentences: tuple[ParsedSentence, ...] = ()

    def __post_init__(self) -> None:
        if not self.category:
            raise CorpusValidationError(f"review {self.review_id} has no category")

    def __iter__(self) -> Iterator[ParsedSentence]:
        return iter(self.sentences)


@dataclass(frozen=True, order=True)
class TokenSpan:
    """Inclusive 1-based token range"""

    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __contains__(self, index: object) -> bool:
        return isinstance(index, int) and self.start <= index <= self.end

    def indices(self) -> range:
        return range(self.start, self.end + 1)


@dataclass(frozen=True)
class Extraction:
    """One recognized complementary-entity mention"""

    sentence_id: str
    head_idx: int
    span: TokenSpan
    text: str
    path_id: str

    def __post_init__(self) -> None:
        if self.span.start > self.span.end or self.span.start < 1:
            raise CorpusValidationError(f"invalid span {self.span}")
        if self.head_idx not in self.span:
            raise CorpusValidationError(
                f"head {self.head_idx} outside span {self.span}"
            )


@dataclass(frozen=True)
class ExtractionRecord:
    """An extraction together with the review it came from"""

    extraction: Extraction
    review_id: str
    product_id: str

    def to_dict(self) -> dict[str, Any]:
        """Convert to the extraction-output record layout"""
        ext = self.extraction
        return {
            "sentence_id": ext.sentence_id,
            "review_id": self.review_id,
            "product_id": self.product_id,
            "head": ext.head_idx,
            "start": ext.span.start,
            "end": ext.span.end,
            "text": ext.text,
            "path_id": ext.path_id,
        }


@dataclass(frozen=True)
class GoldAnnotation:
    """Annotated complementary entities of one sentence (a multiset)"""

    sentence_id: str
    entities: tuple[str, ...] = ()
    product_id: str | None = None

    def __post_init__(self) -> None:
        for entity in self.entities:
            if not entity.strip():
                raise CorpusValidationError(
                    f"sentence {self.sentence_id}: empty gold entity"
                )


@dataclass(frozen=True)
class DomainKnowledge:
    """
    Bootstrapped knowledge of one product category

    ``cce`` maps lowercased chunk texts to occurrence counts, ``dsv`` maps verb
    lemmas to counts (always >= 2). Seed verbs are kept apart and always pass
    the verb check. ``cce_sources``/``dsv_sources`` are only filled when
    provenance was requested.
    """

    domain: str
    cce: Mapping[str, int]
    dsv: Mapping[str, int]
    seed_verbs: frozenset[str]
    source_review_count: int = 0
    cce_sources: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    dsv_sources: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.domain:
            raise CorpusValidationError("domain knowledge needs a domain")
        for lemma, count in self.dsv.items():
            if count < 2:
                raise CorpusValidationError(
                    f"domain-specific verb '{lemma}' has count {count} < 2"
                )

    @classmethod
    def empty(cls, domain: str, seeds: frozenset[str]) -> "DomainKnowledge":
        return cls(domain=domain, cce={}, dsv={}, seed_verbs=frozenset(seeds))

    @property
    def allowed_verbs(self) -> frozenset[str]:
        """Verb lemmas that pass the VERB check"""
        return frozenset(self.dsv) | self.seed_verbs

    def verb_allowed(self, lemma: str) -> bool:
        return lemma.lower() in self.dsv or lemma.lower() in self.seed_verbs

    def entity_known(self, text: str) -> bool:
        return text.lower() in self.cce
