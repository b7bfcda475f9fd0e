"""
Complement Miner - complementary entity recognition in product reviews

Finds the products a reviewed product works with ("It works with my phone")
by matching dependency paths over pre-parsed review sentences, optionally
filtered by domain knowledge bootstrapped from unlabeled reviews of the same
category.
"""

__version__ = "0.1.0"

from .catalog import DEFAULT_SEEDS, CatalogEntry, PathCatalog, PathRole  # noqa: E402
from .chunking import np_chunk  # noqa: E402
from .config import Settings  # noqa: E402
from .corpus import (  # noqa: E402
    load_corpus,
    load_extractions,
    load_gold,
    load_knowledge,
    sample_category,
    save_corpus,
    save_extractions,
    save_gold,
    save_knowledge,
)
from .evaluation import Counts, EvalReport, MatchMode, aggregate, evaluate, score_sentence  # noqa: E402
from .extraction import (  # noqa: E402
    ComplementExtractor,
    ExtractionMode,
    extract_baseline_my,
    extract_basic,
    extract_noun_phrases,
    extract_with_knowledge,
)
from .knowledge import build_domain_knowledge, expand_cce, expand_dsv  # noqa: E402
from .model import (  # noqa: E402
    DependencyRelation,
    DomainKnowledge,
    Extraction,
    ExtractionRecord,
    GoldAnnotation,
    ParsedSentence,
    Review,
    Token,
    TokenSpan,
)
from .paths import PathMatch, PathPattern, match_path, parse_path_dsl  # noqa: E402

__all__ = [
    "DEFAULT_SEEDS",
    "CatalogEntry",
    "ComplementExtractor",
    "Counts",
    "DependencyRelation",
    "DomainKnowledge",
    "EvalReport",
    "Extraction",
    "ExtractionMode",
    "ExtractionRecord",
    "GoldAnnotation",
    "MatchMode",
    "ParsedSentence",
    "PathCatalog",
    "PathMatch",
    "PathPattern",
    "PathRole",
    "Review",
    "Settings",
    "Token",
    "TokenSpan",
    "aggregate",
    "build_domain_knowledge",
    "evaluate",
    "expand_cce",
    "expand_dsv",
    "extract_baseline_my",
    "extract_basic",
    "extract_noun_phrases",
    "extract_with_knowledge",
    "load_corpus",
    "load_extractions",
    "load_gold",
    "load_knowledge",
    "match_path",
    "np_chunk",
    "parse_path_dsl",
    "sample_category",
    "save_corpus",
    "save_extractions",
    "save_gold",
    "save_knowledge",
    "score_sentence",
]
