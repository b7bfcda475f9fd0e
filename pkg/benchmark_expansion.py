#!/usr/bin/env python3
"""
Knowledge expansion benchmark

Builds domain knowledge from 1,000, 3,000 and 6,000 review samples and reports
knowledge size, build time and how many mentions knowledge mode keeps compared
to basic mode. Uses a corpus file when one is given, synthetic reviews
otherwise:

    python benchmark_expansion.py
    python benchmark_expansion.py --corpus reviews.jsonl --category "Tablet Stand"
"""

import logging
import time
from dataclasses import dataclass
from pathlib import Path

import typer

from complement_miner.corpus import group_by_category, load_corpus, sample_category
from complement_miner.extraction import ComplementExtractor
from complement_miner.knowledge import build_domain_knowledge
from complement_miner.model import Review
from complement_miner.synthetic import generate_reviews

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s",
    datefmt="%H:%M:%S",
)

SIZES = (1000, 3000, 6000)


@dataclass
class BenchmarkCase:
    """One sample size and what came out of it"""

    size: int
    reviews: int = 0
    cce: int = 0
    dsv: int = 0
    expand_time: float = 0.0
    basic_mentions: int = 0
    knowledge_mentions: int = 0
    error: str | None = None

    @property
    def kept_ratio(self) -> float:
        return self.knowledge_mentions / self.basic_mentions if self.basic_mentions else 0.0


class ExpansionBenchmark:
    """Times knowledge expansion over growing samples of one category"""

    def __init__(self, reviews: list[Review], category: str, seed: int = 0):
        self.reviews = reviews
        self.category = category
        self.seed = seed
        self.logger = logging.getLogger(__name__)
        self.basic = ComplementExtractor("basic")

    def run_case(self, size: int) -> BenchmarkCase:
        case = BenchmarkCase(size)
        self.logger.info(f"🔄 Sampling {size} '{self.category}' reviews")
        try:
            picked = sample_category(self.reviews, self.category, size, self.seed)
            case.reviews = len(picked)

            started = time.perf_counter()
            dk = build_domain_knowledge(picked, domain=self.category)
            case.expand_time = time.perf_counter() - started
            case.cce, case.dsv = len(dk.cce), len(dk.dsv)

            case.basic_mentions = len(self.basic.extract_corpus(picked))
            filtered = ComplementExtractor("knowledge", knowledge=dk)
            case.knowledge_mentions = len(filtered.extract_corpus(picked))
            self.logger.info(
                f"✅ {size}: {case.cce} CCE, {case.dsv} DSV in {case.expand_time:.2f}s"
            )
        except Exception as e:
            case.error = str(e)
            self.logger.error(f"❌ ERROR size {size}: {e}")
        return case

    def run_all(self, sizes: tuple[int, ...] = SIZES) -> list[BenchmarkCase]:
        total_start = time.perf_counter()
        cases = [self.run_case(size) for size in sizes]
        self.logger.info(f"🏁 All sizes completed in {time.perf_counter() - total_start:.1f}s")
        return cases

    def print_summary(self, cases: list[BenchmarkCase]) -> None:
        print(f"\n📊 EXPANSION SUMMARY - {self.category}")
        print("=" * 72)
        print(f"{'size':>6} {'reviews':>8} {'CCE':>6} {'DSV':>5} {'time':>8} {'basic':>7} {'knowl.':>7} {'kept':>6}")
        for case in cases:
            if case.error:
                print(f"{case.size:>6}  ❌ {case.error}")
                continue
            print(
                f"{case.size:>6} {case.reviews:>8} {case.cce:>6} {case.dsv:>5} "
                f"{case.expand_time:>7.2f}s {case.basic_mentions:>7} "
                f"{case.knowledge_mentions:>7} {case.kept_ratio:>6.1%}"
            )
        slow = [c for c in cases if not c.error and c.size >= 6000 and c.expand_time > 10]
        if slow:
            print("\n⚠️  6,000-review expansion took longer than 10s")


def main(
    corpus: Path | None = typer.Option(None, "--corpus", help="Corpus file (default: synthetic reviews)."),
    category: str = typer.Option("Tablet Stand", "--category"),
    seed: int = typer.Option(0, "--seed"),
) -> None:
    """Benchmark knowledge expansion at 1K, 3K and 6K reviews."""
    if corpus is not None:
        groups = group_by_category(load_corpus(corpus))
        if category not in groups:
            print(f"❌ No reviews for category '{category}' (have: {', '.join(groups)})")
            raise typer.Exit(code=1)
        reviews = groups[category]
    else:
        reviews = generate_reviews(max(SIZES), category=category, seed=seed)

    benchmark = ExpansionBenchmark(reviews, category, seed)
    cases = benchmark.run_all()
    benchmark.print_summary(cases)
    if any(case.error for case in cases):
        raise typer.Exit(code=1)


if __name__ == "__main__":
    typer.run(main)
