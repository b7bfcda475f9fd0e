"""
CoNLL-U to corpus conversion

Relations are taken from the enhanced DEPS column when it is filled, else from
HEAD/DEPREL. Types are mapped to the collapsed representation the catalog
paths use:
1. obj -> dobj, obl:X -> nmod:X
2. in basic trees, nmod/obl with a ``case`` child -> nmod:<case lemma>
3. multiword-token lines (1-2) and empty nodes (8.1) are skipped

Review metadata comes from ``# review_id = ...``, ``# product_id = ...`` and
``# category = ...`` comments; each value holds until the next such comment.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError
from .model import DependencyRelation, ParsedSentence, Review, Token

logger = logging.getLogger(__name__)

_META_KEYS = ("review_id", "product_id", "category")


@dataclass
class _Row:
    index: int
    form: str
    lemma: str | None
    pos: str
    head: int
    deprel: str
    deps: str


@dataclass
class _Block:
    meta: dict[str, str] = field(default_factory=dict)
    rows: list[_Row] = field(default_factory=list)
    line: int = 0


def map_relation_type(deprel: str) -> str:
    """Map a UD relation type to its collapsed counterpart"""
    if deprel == "obj":
        return "dobj"
    if deprel == "obl":
        return "nmod"
    if deprel.startswith("obl:"):
        return "nmod:" + deprel[4:]
    return deprel


def _basic_relations(rows: list[_Row]) -> list[DependencyRelation]:
    case_of: dict[int, str] = {}
    for row in rows:
        if row.deprel == "case" and row.head not in case_of:
            case_of[row.head] = (row.lemma or row.form).lower()
    relations = []
    for row in rows:
        rel_type = row.deprel
        if rel_type in ("nmod", "obl") and row.index in case_of:
            rel_type = f"nmod:{case_of[row.index]}"
        relations.append(DependencyRelation(map_relation_type(rel_type), row.head, row.index))
    return relations


def _enhanced_relations(rows: list[_Row]) -> list[DependencyRelation]:
    relations = []
    for row in rows:
        for item in row.deps.split("|"):
            head, _, deprel = item.partition(":")
            if "." in head:
                continue
            relations.append(DependencyRelation(map_relation_type(deprel), int(head), row.index))
    return relations


def _to_sentence(block: _Block, sentence_id: str, review_id: str) -> ParsedSentence:
    tokens = tuple(Token.create(row.index, row.form, row.pos, row.lemma) for row in block.rows)
    enhanced = all(row.deps not in ("", "_") for row in block.rows)
    relations = _enhanced_relations(block.rows) if enhanced else _basic_relations(block.rows)
    return ParsedSentence(sentence_id, tokens, tuple(relations), review_id)


def _read_blocks(lines: Iterable[str], source: str) -> list[_Block]:
    blocks = []
    meta: dict[str, str] = {}
    current = _Block()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if current.rows:
                blocks.append(current)
            current = _Block()
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() in _META_KEYS:
                meta[key.strip()] = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise CorpusFormatError(f"expected 10 columns, got {len(cols)}", path=source, line=line_no)
        if "-" in cols[0] or "." in cols[0]:
            continue
        if not current.rows:
            current.meta = dict(meta)
            current.line = line_no
        try:
            current.rows.append(
                _Row(
                    index=int(cols[0]),
                    form=cols[1],
                    lemma=None if cols[2] == "_" else cols[2],
                    pos=cols[4] if cols[4] != "_" else cols[3],
                    head=int(cols[6]),
                    deprel=cols[7],
                    deps=cols[8],
                )
            )
        except ValueError as exc:
            raise CorpusFormatError(f"bad token line ({exc})", path=source, line=line_no) from exc
    if current.rows:
        blocks.append(current)
    return blocks


def convert_conllu(
    lines: Iterable[str],
    *,
    category: str | None = None,
    product_id: str | None = None,
    source: str = "<conllu>",
) -> list[Review]:
    """
    Convert CoNLL-U text into reviews

    ``category`` and ``product_id`` fill in for missing comments. Sentences
    without a review id comment each become a review named after their position.
    """
    grouped: dict[str, list[tuple[_Block, str, str]]] = {}
    for number, block in enumerate(_read_blocks(lines, source)):
        review_id = block.meta.get("review_id") or f"s{number}"
        block_category = block.meta.get("category") or category
        if not block_category:
            raise CorpusFormatError(
                "sentence has no category (add '# category = ...' or pass a default)",
                path=source,
                line=block.line,
            )
        block_product = block.meta.get("product_id") or product_id or "unknown"
        grouped.setdefault(review_id, []).append((block, block_category, block_product))

    reviews = []
    for review_id, blocks in grouped.items():
        _, block_category, block_product = blocks[0]
        sentences = tuple(
            _to_sentence(block, f"{review_id}:{ordinal}", review_id)
            for ordinal, (block, _, _) in enumerate(blocks)
        )
        reviews.append(Review(review_id, block_product, block_category, sentences))
    logger.info(f"✅ Converted {sum(len(r.sentences) for r in reviews)} sentences into {len(reviews)} reviews")
    return reviews


def convert_file(
    path: str | Path, *, category: str | None = None, product_id: str | None = None
) -> list[Review]:
    with open(path, encoding="utf-8") as handle:
        return convert_conllu(
            handle, category=category, product_id=product_id, source=str(path)
        )
