"""
Evaluation - per-mention precision, recall and F1 against gold annotations

Predictions and gold entities of a sentence are paired one-to-one, greedily in
prediction order. In ``equality`` mode a pair matches when both strings are
equal after lowercasing and whitespace normalization; ``containment`` mode
first takes all equal pairs, then also pairs a prediction with a gold entity
when one is a contiguous token subsequence of the other.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from tabulate import tabulate

from .errors import SentenceMismatchError
from .model import Extraction, ExtractionRecord, GoldAnnotation

logger = logging.getLogger(__name__)

UNKNOWN_PRODUCT = "unknown"


class MatchMode(str, Enum):
    EQUALITY = "equality"
    CONTAINMENT = "containment"


@dataclass(frozen=True)
class Counts:
    """True positives, false positives and false negatives"""

    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @property
    def precision(self) -> Fraction:
        total = self.tp + self.fp
        return Fraction(self.tp, total) if total else Fraction(0)

    @property
    def recall(self) -> Fraction:
        total = self.tp + self.fn
        return Fraction(self.tp, total) if total else Fraction(0)

    @property
    def f1(self) -> Fraction:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else Fraction(0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": float(self.precision),
            "recall": float(self.recall),
            "f1": float(self.f1),
        }


def _words(text: str) -> list[str]:
    return text.lower().split()


def _contains(outer: list[str], inner: list[str]) -> bool:
    if not inner or len(inner) > len(outer):
        return False
    return any(outer[i : i + len(inner)] == inner for i in range(len(outer) - len(inner) + 1))


def strings_match(predicted: str, gold: str, mode: MatchMode) -> bool:
    a, b = _words(predicted), _words(gold)
    if a == b:
        return True
    return mode == MatchMode.CONTAINMENT and (_contains(a, b) or _contains(b, a))


def match_counts(
    predicted: Sequence[str], gold: Sequence[str], mode: MatchMode = MatchMode.EQUALITY
) -> Counts:
    """Greedy one-to-one pairing of predicted and gold strings"""
    free = list(range(len(gold)))
    unmatched = []
    tp = 0
    for text in predicted:
        hit = next((g for g in free if _words(gold[g]) == _words(text)), None)
        if hit is None:
            unmatched.append(text)
        else:
            free.remove(hit)
            tp += 1
    fp = 0
    for text in unmatched:
        hit = None
        if mode == MatchMode.CONTAINMENT:
            hit = next((g for g in free if strings_match(text, gold[g], mode)), None)
        if hit is None:
            fp += 1
        else:
            free.remove(hit)
            tp += 1
    return Counts(tp, fp, len(free))


def score_sentence(
    pred: Sequence[Extraction],
    gold: GoldAnnotation,
    mode: MatchMode | str = MatchMode.EQUALITY,
) -> Counts:
    """Score the extractions of one sentence against its gold annotation"""
    for extraction in pred:
        if extraction.sentence_id != gold.sentence_id:
            raise SentenceMismatchError(
                f"extraction '{extraction.text}' belongs to sentence "
                f"{extraction.sentence_id}, gold is for {gold.sentence_id}"
            )
    return match_counts([e.text for e in pred], gold.entities, MatchMode(mode))


@dataclass(frozen=True)
class EvalReport:
    """Micro-averaged counts per product and overall, plus the matching mode"""

    mode: MatchMode
    per_product: Mapping[str, Counts] = field(default_factory=dict)
    sentences: int = 0

    @property
    def overall(self) -> Counts:
        return sum(self.per_product.values(), Counts())

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "sentences": self.sentences,
            "overall": self.overall.to_dict(),
            "per_product": {
                product: counts.to_dict()
                for product, counts in sorted(self.per_product.items())
            },
        }

    def format_table(self, per_product: bool = True) -> str:
        """Aligned P/R/F1 table, one row per product and a final overall row"""
        headers = ["Product", "TP", "FP", "FN", "P", "R", "F1"]
        rows = []
        if per_product:
            for product, counts in sorted(self.per_product.items()):
                rows.append(self._row(product, counts))
        rows.append(self._row("overall", self.overall))
        table = tabulate(rows, headers, tablefmt="pipe", floatfmt=".3f")
        return f"Matching mode: {self.mode.value}\n\n{table}"

    @staticmethod
    def _row(name: str, counts: Counts) -> list[Any]:
        return [
            name,
            counts.tp,
            counts.fp,
            counts.fn,
            float(counts.precision),
            float(counts.recall),
            float(counts.f1),
        ]


def aggregate(
    counts_by_product: Mapping[str, Iterable[Counts]],
    mode: MatchMode | str = MatchMode.EQUALITY,
) -> EvalReport:
    """Sum sentence counts per product; the overall row sums all products"""
    per_product = {}
    sentences = 0
    for product, counts in counts_by_product.items():
        listed = list(counts)
        sentences += len(listed)
        per_product[product] = sum(listed, Counts())
    return EvalReport(MatchMode(mode), per_product, sentences)


def evaluate(
    records: Iterable[ExtractionRecord],
    gold: Mapping[str, GoldAnnotation],
    *,
    mode: MatchMode | str = MatchMode.EQUALITY,
    products: Mapping[str, str] | None = None,
) -> EvalReport:
    """
    Score extraction records against gold annotations

    Every gold sentence is scored, with or without predictions. Predictions
    for sentences missing from the gold file are reported once and ignored.
    The product of a sentence comes from its gold record, else ``products``
    (sentence id -> product id), else the prediction records.
    """
    predictions: dict[str, list[Extraction]] = defaultdict(list)
    product_of = dict(products or {})
    for record in records:
        sentence_id = record.extraction.sentence_id
        predictions[sentence_id].append(record.extraction)
        product_of.setdefault(sentence_id, record.product_id)

    orphans = sorted(set(predictions) - set(gold))
    if orphans:
        logger.warning(
            f"⚠️ {len(orphans)} predicted sentences have no gold annotation and are "
            f"ignored (first: {orphans[0]})"
        )

    by_product: dict[str, list[Counts]] = defaultdict(list)
    for sentence_id in sorted(gold):
        annotation = gold[sentence_id]
        product = annotation.product_id or product_of.get(sentence_id, UNKNOWN_PRODUCT)
        by_product[product].append(
            score_sentence(predictions.get(sentence_id, []), annotation, mode)
        )
    return aggregate(by_product, mode)
