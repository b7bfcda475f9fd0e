"""
Knowledge expansion - bootstrap domain knowledge from unlabeled reviews

One category at a time, exactly one pass each:
1. Candidate complementary entities (CCE): path 7 seeded with general verbs
   (fit, work), every chunked CETT binding is kept with its count
2. Domain-specific verbs (DSV): paths 8 and 9, a verb counts only when its
   CETT binding is a known candidate; verbs seen fewer than twice are dropped
"""

import logging
import time
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from tqdm import tqdm

from .catalog import DEFAULT_SEEDS, PathCatalog, PathRole, normalize_seeds
from .chunking import np_chunk
from .errors import CategoryMixtureError
from .model import DomainKnowledge, ParsedSentence, Review
from .paths import match_path

logger = logging.getLogger(__name__)

DSV_MIN_COUNT = 2


@dataclass(frozen=True)
class ExpansionSettings:
    """Knobs of the expansion; the defaults reproduce the plain bootstrap"""

    cce_min_count: int = 1
    stop_verbs: frozenset[str] = frozenset()
    path9_without_cett: bool = False
    keep_provenance: bool = False

    def __post_init__(self) -> None:
        if self.cce_min_count < 1:
            raise ValueError(f"cce_min_count must be >= 1, got {self.cce_min_count}")


@dataclass
class TermCounts:
    """Occurrence counts per term plus, optionally, the sentences behind them"""

    counts: Counter[str] = field(default_factory=Counter)
    sources: dict[str, list[str]] = field(default_factory=dict)

    def add(self, term: str, sentence_id: str, keep_source: bool) -> None:
        self.counts[term] += 1
        if keep_source:
            self.sources.setdefault(term, []).append(sentence_id)

    def merge(self, other: "TermCounts") -> "TermCounts":
        """Sum two partial counts (associative and commutative up to source order)"""
        merged = TermCounts(self.counts + other.counts, {})
        for part in (self.sources, other.sources):
            for term, ids in part.items():
                merged.sources.setdefault(term, []).extend(ids)
        return merged

    def at_least(self, minimum: int) -> "TermCounts":
        kept = Counter({t: c for t, c in self.counts.items() if c >= minimum})
        return TermCounts(kept, {t: ids for t, ids in self.sources.items() if t in kept})

    def __contains__(self, term: object) -> bool:
        return term in self.counts

    def __len__(self) -> int:
        return len(self.counts)


def review_category(reviews: Sequence[Review]) -> str | None:
    """The single category shared by all reviews (None for no reviews)"""
    categories = sorted({review.category for review in reviews})
    if len(categories) > 1:
        raise CategoryMixtureError(
            f"expansion needs one category, got {len(categories)}: {', '.join(categories)}"
        )
    return categories[0] if categories else None


def _sentences(reviews: Sequence[Review], desc: str, progress: bool) -> Iterable[ParsedSentence]:
    for review in tqdm(reviews, desc=desc, unit="review", disable=not progress):
        yield from review.sentences


def expand_cce(
    reviews: Sequence[Review],
    seeds: Iterable[str] = DEFAULT_SEEDS,
    *,
    settings: ExpansionSettings | None = None,
    progress: bool = False,
) -> TermCounts:
    """
    Collect candidate complementary entities with path 7

    Each chunked span counts once per sentence, keyed by its lowercased text.
    """
    settings = settings or ExpansionSettings()
    review_category(reviews)
    seed_set = normalize_seeds(seeds)
    found = TermCounts()
    if not seed_set:
        logger.warning("⚠️ No seed verbs given, no candidate entities collected")
        return found
    pattern = PathCatalog.default(seeds=seed_set).get("7").pattern
    for sent in _sentences(reviews, "CCE", progress):
        spans = {np_chunk(sent, match.cett) for match in match_path(pattern, sent)}  # type: ignore[arg-type]
        for span in sorted(spans):
            found.add(sent.text(span).lower(), sent.sentence_id, settings.keep_provenance)
    if settings.cce_min_count > 1:
        found = found.at_least(settings.cce_min_count)
    logger.debug(f"CCE pass: {len(found)} candidates")
    return found


def expand_dsv(
    reviews: Sequence[Review],
    cce: Iterable[str],
    *,
    settings: ExpansionSettings | None = None,
    progress: bool = False,
) -> TermCounts:
    """
    Collect domain-specific verbs with paths 8 and 9

    A match counts when its lowercased CETT chunk is a candidate entity (no
    multi-word exception here); each (sentence, verb token, span) counts once.
    Verbs seen fewer than DSV_MIN_COUNT times and stop verbs are dropped.
    """
    settings = settings or ExpansionSettings()
    review_category(reviews)
    known = {text.lower() for text in cce}
    catalog = PathCatalog.default(path9_without_cett=settings.path9_without_cett)
    patterns = [entry.pattern for entry in catalog.by_role(PathRole.DSV)]
    found = TermCounts()
    for sent in _sentences(reviews, "DSV", progress):
        seen: set[tuple[int, object]] = set()
        for pattern in patterns:
            for match in match_path(pattern, sent):
                verb = match.verb
                if verb is None:
                    continue
                span = None
                if match.cett is not None:
                    span = np_chunk(sent, match.cett)
                    if sent.text(span).lower() not in known:
                        continue
                if (verb, span) in seen:
                    continue
                seen.add((verb, span))
                lemma = sent.token(verb).lemma
                if lemma in settings.stop_verbs:
                    continue
                found.add(lemma, sent.sentence_id, settings.keep_provenance)
    kept = found.at_least(DSV_MIN_COUNT)
    logger.debug(f"DSV pass: {len(found)} verbs seen, {len(kept)} kept")
    return kept


def build_domain_knowledge(
    reviews: Sequence[Review],
    seeds: Iterable[str] = DEFAULT_SEEDS,
    *,
    domain: str | None = None,
    settings: ExpansionSettings | None = None,
    progress: bool = False,
) -> DomainKnowledge:
    """
    Build the knowledge bundle of one category: one CCE pass, then one DSV pass

    ``domain`` is required when ``reviews`` is empty; otherwise it must equal
    the reviews' category.
    """
    settings = settings or ExpansionSettings()
    seed_set = normalize_seeds(seeds)
    category = review_category(reviews)
    if category is None:
        if not domain:
            raise ValueError("a domain is required to build knowledge from no reviews")
        category = domain
    elif domain is not None and domain != category:
        raise CategoryMixtureError(
            f"reviews are '{category}' but knowledge for '{domain}' was requested"
        )

    logger.info(f"🔄 Expanding knowledge for '{category}' from {len(reviews)} reviews")
    started = time.perf_counter()
    cce = expand_cce(reviews, seed_set, settings=settings, progress=progress)
    dsv = expand_dsv(reviews, cce.counts, settings=settings, progress=progress)
    elapsed = time.perf_counter() - started
    logger.info(
        f"✅ '{category}': {len(cce)} candidate entities, {len(dsv)} domain verbs "
        f"in {elapsed:.2f}s"
    )

    return DomainKnowledge(
        domain=category,
        cce=dict(cce.counts),
        dsv=dict(dsv.counts),
        seed_verbs=seed_set,
        source_review_count=len(reviews),
        cce_sources={t: tuple(ids) for t, ids in cce.sources.items()},
        dsv_sources={t: tuple(ids) for t, ids in dsv.sources.items()},
    )
