"""
Corpus I/O - line-delimited JSON corpora, gold annotations, knowledge bundles
and extraction outputs

Field layouts are documented in docs/FORMATS.md. Every writer goes through
write_atomic (temp file + rename) and produces stable key order, so a
save -> load -> save cycle is byte-identical.
"""

import json
import logging
import os
import random
import tempfile
from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from pathlib import Path
from typing import Any, TypeVar

from .errors import CorpusFormatError, CorpusValidationError, DuplicateSentenceError
from .model import (
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

logger = logging.getLogger(__name__)

T = TypeVar("T")
PathLike = str | Path


def write_atomic(path: PathLike, text: str) -> None:
    """Write text to a temp file next to ``path`` and rename it into place"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _dumps(record: Mapping[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def _write_jsonl(path: PathLike, records: Iterable[Mapping[str, Any]]) -> None:
    write_atomic(path, "".join(_dumps(record) + "\n" for record in records))


def _iter_jsonl(path: PathLike, decode: Callable[[dict[str, Any]], T]) -> Iterator[T]:
    """Decode one record per non-blank line, attaching file and line to errors"""
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON: {exc.msg}", path=path, line=line_no) from exc
            if not isinstance(record, dict):
                raise CorpusFormatError("record is not an object", path=path, line=line_no)
            try:
                yield decode(record)
            except CorpusValidationError as exc:
                raise CorpusValidationError(f"{path}:{line_no}: {exc}") from exc
            except (KeyError, TypeError, ValueError, AttributeError) as exc:
                raise CorpusFormatError(
                    f"malformed record ({type(exc).__name__}: {exc})", path=path, line=line_no
                ) from exc


# Reviews


def sentence_from_dict(data: Mapping[str, Any], review_id: str, ordinal: int) -> ParsedSentence:
    tokens = tuple(
        Token.create(int(t["index"]), str(t["surface"]), str(t["pos"]), t.get("lemma"))
        for t in data["tokens"]
    )
    relations = tuple(
        DependencyRelation(str(rel_type), int(gov), int(dep))
        for rel_type, gov, dep in data.get("relations", [])
    )
    sentence_id = data.get("sentence_id") or f"{review_id}:{ordinal}"
    return ParsedSentence(sentence_id, tokens, relations, review_id)


def sentence_to_dict(sent: ParsedSentence) -> dict[str, Any]:
    return {
        "sentence_id": sent.sentence_id,
        "tokens": [
            {"index": t.index, "surface": t.surface, "lemma": t.lemma, "pos": t.pos}
            for t in sent.tokens
        ],
        "relations": [[r.rel_type, r.gov_idx, r.dep_idx] for r in sent.relations],
    }


def review_from_dict(data: Mapping[str, Any]) -> Review:
    review_id = str(data["review_id"])
    sentences = tuple(
        sentence_from_dict(sentence, review_id, ordinal)
        for ordinal, sentence in enumerate(data.get("sentences", []))
    )
    return Review(review_id, str(data["product_id"]), str(data["category"]), sentences)


def review_to_dict(review: Review) -> dict[str, Any]:
    return {
        "review_id": review.review_id,
        "product_id": review.product_id,
        "category": review.category,
        "sentences": [sentence_to_dict(sent) for sent in review.sentences],
    }


def iter_corpus(path: PathLike) -> Iterator[Review]:
    """Stream reviews from a corpus file"""
    return _iter_jsonl(path, review_from_dict)


def load_corpus(path: PathLike) -> list[Review]:
    """Load and validate every review of a corpus file"""
    reviews = list(iter_corpus(path))
    logger.debug(f"Loaded {len(reviews)} reviews from {path}")
    return reviews


def save_corpus(reviews: Iterable[Review], path: PathLike) -> None:
    _write_jsonl(path, (review_to_dict(review) for review in reviews))


# Gold annotations


def _gold_from_dict(data: Mapping[str, Any]) -> GoldAnnotation:
    entities = data.get("entities", [])
    if not isinstance(entities, list):
        raise TypeError("entities must be a list")
    product_id = data.get("product_id")
    return GoldAnnotation(
        str(data["sentence_id"]),
        tuple(str(entity) for entity in entities),
        str(product_id) if product_id is not None else None,
    )


def load_gold(path: PathLike) -> dict[str, GoldAnnotation]:
    """
    Load gold annotations keyed by sentence id

    Entity lists are multisets; a sentence id appearing twice is an error.
    """
    gold: dict[str, GoldAnnotation] = {}
    for line_no, annotation in enumerate(_iter_jsonl(path, _gold_from_dict), start=1):
        if annotation.sentence_id in gold:
            raise DuplicateSentenceError(
                f"duplicate sentence id '{annotation.sentence_id}' (record {line_no})",
                path=path,
            )
        gold[annotation.sentence_id] = annotation
    return gold


def save_gold(gold: Iterable[GoldAnnotation], path: PathLike) -> None:
    def encode(annotation: GoldAnnotation) -> dict[str, Any]:
        record: dict[str, Any] = {
            "sentence_id": annotation.sentence_id,
            "entities": list(annotation.entities),
        }
        if annotation.product_id is not None:
            record["product_id"] = annotation.product_id
        return record

    _write_jsonl(path, (encode(annotation) for annotation in gold))


# Knowledge bundles


def knowledge_to_dict(dk: DomainKnowledge) -> dict[str, Any]:
    def entries(key: str, counts: Mapping[str, int], sources: Mapping[str, tuple[str, ...]]) -> list[dict[str, Any]]:
        result = []
        for term in sorted(counts):
            entry: dict[str, Any] = {key: term, "count": counts[term]}
            if term in sources:
                entry["sources"] = list(sources[term])
            result.append(entry)
        return result

    return {
        "domain": dk.domain,
        "seed_verbs": sorted(dk.seed_verbs),
        "cce": entries("text", dk.cce, dk.cce_sources),
        "dsv": entries("lemma", dk.dsv, dk.dsv_sources),
        "source_review_count": dk.source_review_count,
    }


def knowledge_from_dict(data: Mapping[str, Any]) -> DomainKnowledge:
    def split(key: str, entries: list[dict[str, Any]]) -> tuple[dict[str, int], dict[str, tuple[str, ...]]]:
        counts: dict[str, int] = {}
        sources: dict[str, tuple[str, ...]] = {}
        for entry in entries:
            term = str(entry[key])
            counts[term] = int(entry["count"])
            if "sources" in entry:
                sources[term] = tuple(entry["sources"])
        return counts, sources

    cce, cce_sources = split("text", data.get("cce", []))
    dsv, dsv_sources = split("lemma", data.get("dsv", []))
    return DomainKnowledge(
        domain=str(data["domain"]),
        cce=cce,
        dsv=dsv,
        seed_verbs=frozenset(data.get("seed_verbs", [])),
        source_review_count=int(data.get("source_review_count", 0)),
        cce_sources=cce_sources,
        dsv_sources=dsv_sources,
    )


def save_knowledge(dk: DomainKnowledge, path: PathLike) -> None:
    write_atomic(path, json.dumps(knowledge_to_dict(dk), indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def load_knowledge(path: PathLike) -> DomainKnowledge:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    try:
        return knowledge_from_dict(data)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CorpusFormatError(f"malformed knowledge file ({exc})", path=path) from exc


# Extraction outputs


def _record_from_dict(data: Mapping[str, Any]) -> ExtractionRecord:
    extraction = Extraction(
        str(data["sentence_id"]),
        int(data["head"]),
        TokenSpan(int(data["start"]), int(data["end"])),
        str(data["text"]),
        str(data["path_id"]),
    )
    return ExtractionRecord(extraction, str(data["review_id"]), str(data["product_id"]))


def load_extractions(path: PathLike) -> list[ExtractionRecord]:
    return list(_iter_jsonl(path, _record_from_dict))


def save_extractions(records: Iterable[ExtractionRecord], path: PathLike) -> None:
    _write_jsonl(path, (record.to_dict() for record in records))


# Grouping and sampling


def group_by_category(reviews: Iterable[Review]) -> dict[str, list[Review]]:
    """Reviews per category, categories sorted, input order kept inside each"""
    groups: dict[str, list[Review]] = defaultdict(list)
    for review in reviews:
        groups[review.category].append(review)
    return {category: groups[category] for category in sorted(groups)}


def sample_category(
    reviews: Sequence[Review], category: str, n: int, seed: int
) -> list[Review]:
    """
    Deterministic sample of ``n`` reviews of one category

    Candidates are sorted by review id, then reservoir-sampled (Algorithm R)
    with ``random.Random(seed)``: slot j = int(random() * (i + 1)) for the
    i-th candidate (0-based, i >= n). The result is sorted by review id, so it
    depends only on corpus content, category, n and seed.
    """
    if n < 0:
        raise ValueError(f"sample size must be >= 0, got {n}")
    candidates = sorted(
        (review for review in reviews if review.category == category),
        key=lambda review: review.review_id,
    )
    if not candidates:
        logger.warning(f"⚠️ No reviews for category '{category}'")
        return []
    if n >= len(candidates):
        return candidates

    rng = random.Random(seed)
    reservoir = candidates[:n]
    for i in range(n, len(candidates)):
        j = int(rng.random() * (i + 1))
        if j < n:
            reservoir[j] = candidates[i]
    return sorted(reservoir, key=lambda review: review.review_id)
