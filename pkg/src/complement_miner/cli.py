"""
complement-miner command line

Subcommands:
1. expand   - build domain knowledge for one category
2. extract  - recognize complementary entities in a corpus
3. evaluate - score extractions against gold annotations
4. match    - run one path over sentences, optionally explaining every rule
5. convert  - CoNLL-U to corpus format
6. sample   - write a deterministic category sample
7. sweep    - knowledge size and build time for several sample sizes
8. paths    - list the path catalog
"""

import json
import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import typer
from tabulate import tabulate

from . import __version__
from .config import ENV_PREFIX, Settings
from .corpus import (
    group_by_category,
    load_corpus,
    load_extractions,
    load_gold,
    load_knowledge,
    sample_category,
    save_corpus,
    save_extractions,
    save_knowledge,
    write_atomic,
)
from .convert import convert_file
from .errors import ComplementMinerError, PathSyntaxError
from .evaluation import MatchMode, evaluate as evaluate_records
from .extraction import ComplementExtractor, ExtractionMode
from .knowledge import build_domain_knowledge
from .model import ParsedSentence, Review
from .paths import PathPattern, explain_segment, format_path, match_path, parse_path_dsl

logger = logging.getLogger(__name__)


def _env(name: str) -> str:
    """Environment variable read when a flag is not given"""
    return ENV_PREFIX + name

app = typer.Typer(
    help="Recognize complementary entities in product reviews with dependency paths.",
    no_args_is_help=True,
    add_completion=False,
)


@dataclass
class _State:
    settings: Settings
    progress: bool


def _state(ctx: typer.Context) -> _State:
    state = ctx.obj
    assert isinstance(state, _State)
    return state


@contextmanager
def _fail_on_errors() -> Iterator[None]:
    """Turn library and I/O errors into a message on stderr and exit code 1"""
    try:
        yield
    except PathSyntaxError as exc:
        typer.echo(f"❌ Error: {exc}\n{exc.caret()}", err=True)
        raise typer.Exit(code=1) from exc
    except (ComplementMinerError, OSError, KeyError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        typer.echo(f"❌ Error: {message}", err=True)
        raise typer.Exit(code=1) from exc


def _version(value: bool) -> None:
    if value:
        typer.echo(f"complement-miner {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", envvar=_env("VERBOSE"), help="Debug logging."),
    quiet: bool = typer.Option(
        False, "--quiet", "-q", envvar=_env("QUIET"), help="Warnings and errors only."
    ),
    config: Path | None = typer.Option(
        None,
        "--config",
        "-c",
        envvar=_env("CONFIG"),
        help="YAML settings file.",
    ),
    version: bool = typer.Option(
        False, "--version", callback=_version, is_eager=True, help="Show the version."
    ),
) -> None:
    """Recognize complementary entities in product reviews with dependency paths."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%H:%M:%S",
    )
    logging.getLogger().setLevel(level)
    with _fail_on_errors():
        ctx.obj = _State(Settings.load(config), progress=not quiet)


def _category_reviews(reviews: list[Review], category: str | None) -> tuple[str, list[Review]]:
    groups = group_by_category(reviews)
    if category is None:
        if len(groups) != 1:
            known = ", ".join(groups) or "none"
            raise typer.BadParameter(
                f"corpus has several categories ({known}); pass --category",
                param_hint="--category",
            )
        category = next(iter(groups))
    if category not in groups:
        logger.warning(f"⚠️ No reviews for category '{category}'")
    return category, groups.get(category, [])


@app.command()
def expand(
    ctx: typer.Context,
    corpus: Path = typer.Option(..., "--corpus", envvar=_env("CORPUS")),
    out: Path = typer.Option(..., "--out", "-o", envvar=_env("OUT"), help="Knowledge file to write."),
    category: str | None = typer.Option(
        None, "--category", envvar=_env("CATEGORY"), help="Defaults to the corpus's only category."
    ),
    sample: int | None = typer.Option(
        None, "--sample", min=0, envvar=_env("SAMPLE"), help="Number of reviews to sample (default: all)."
    ),
    seed: int = typer.Option(0, "--seed", envvar=_env("SEED")),
    seeds: str | None = typer.Option(
        None, "--seeds", envvar=_env("SEEDS"), help='Seed verbs, e.g. "fit,work".'
    ),
    cce_min_count: int | None = typer.Option(
        None, "--cce-min-count", min=1, envvar=_env("CCE_MIN_COUNT")
    ),
    provenance: bool | None = typer.Option(
        None, "--provenance/--no-provenance", envvar=_env("KEEP_PROVENANCE")
    ),
) -> None:
    """Build domain knowledge (candidate entities and domain-specific verbs)."""
    state = _state(ctx)
    with _fail_on_errors():
        settings = state.settings.merged(
            seeds=seeds, cce_min_count=cce_min_count, keep_provenance=provenance
        )
        category, reviews = _category_reviews(load_corpus(corpus), category)
        if sample is not None:
            reviews = sample_category(reviews, category, sample, seed)
        if not reviews:
            logger.warning(f"⚠️ No reviews selected for '{category}'; knowledge is empty")

        started = time.perf_counter()
        dk = build_domain_knowledge(
            reviews,
            settings.seeds,
            domain=category,
            settings=settings.expansion(),
            progress=state.progress,
        )
        elapsed = time.perf_counter() - started
        save_knowledge(dk, out)

    typer.echo(
        f"✅ {dk.domain}: {len(dk.cce)} candidate entities, "
        f"{len(dk.dsv)} domain-specific verbs from {dk.source_review_count} reviews"
    )
    typer.echo(f"⏱️ Expansion time: {elapsed:.2f}s")


@app.command()
def extract(
    ctx: typer.Context,
    corpus: Path = typer.Option(..., "--corpus", envvar=_env("CORPUS")),
    out: Path = typer.Option(..., "--out", "-o", envvar=_env("OUT"), help="Extraction file to write."),
    mode: ExtractionMode = typer.Option(
        ExtractionMode.BASIC, "--mode", case_sensitive=False, envvar=_env("EXTRACT_MODE")
    ),
    knowledge: Path | None = typer.Option(None, "--knowledge", envvar=_env("KNOWLEDGE")),
    workers: int | None = typer.Option(None, "--workers", min=1, envvar=_env("WORKERS")),
    disable_path: list[str] | None = typer.Option(
        None, "--disable-path", help="Leave out a built-in path by id (repeatable), e.g. 5."
    ),
) -> None:
    """Extract complementary entities from every sentence of a corpus."""
    state = _state(ctx)
    with _fail_on_errors():
        settings = state.settings.merged(workers=workers, disabled_paths=disable_path or None)
        dk = None
        if mode == ExtractionMode.KNOWLEDGE:
            if knowledge is None:
                raise typer.BadParameter("knowledge mode needs --knowledge", param_hint="--knowledge")
            dk = load_knowledge(knowledge)
        extractor = ComplementExtractor(mode, catalog=settings.catalog(), knowledge=dk)
        records = extractor.extract_corpus(load_corpus(corpus), workers=settings.workers)
        save_extractions(records, out)
    typer.echo(f"✅ {len(records)} extractions ({mode.value}) written to {out}")


@app.command()
def evaluate(
    ctx: typer.Context,
    pred: Path = typer.Option(..., "--pred", envvar=_env("PRED"), help="Extraction file."),
    gold: Path = typer.Option(..., "--gold", envvar=_env("GOLD"), help="Gold annotation file."),
    mode: MatchMode | None = typer.Option(
        None, "--mode", case_sensitive=False, envvar=_env("MATCH_MODE")
    ),
    per_product: bool = typer.Option(
        True, "--per-product/--overall-only", envvar=_env("PER_PRODUCT")
    ),
    corpus: Path | None = typer.Option(
        None, "--corpus", envvar=_env("CORPUS"), help="Corpus for sentence-to-product mapping."
    ),
    out: Path | None = typer.Option(
        None, "--out", "-o", envvar=_env("OUT"), help="Write the report as JSON."
    ),
) -> None:
    """Score extractions against gold annotations (P/R/F1)."""
    state = _state(ctx)
    with _fail_on_errors():
        settings = state.settings.merged(match_mode=mode)
        products = None
        if corpus is not None:
            products = {
                sent.sentence_id: review.product_id
                for review in load_corpus(corpus)
                for sent in review.sentences
            }
        report = evaluate_records(
            load_extractions(pred),
            load_gold(gold),
            mode=settings.match_mode,
            products=products,
        )
        if out is not None:
            write_atomic(out, json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    typer.echo(report.format_table(per_product=per_product))


def _select_pattern(ctx: typer.Context, path: str | None, path_id: str | None) -> PathPattern:
    if (path is None) == (path_id is None):
        raise typer.BadParameter("give exactly one of --path and --path-id")
    if path is not None:
        return parse_path_dsl(path, "dsl")
    return _state(ctx).settings.catalog().get(path_id).pattern  # type: ignore[arg-type]


def _print_match(sent: ParsedSentence, pattern: PathPattern, explain: bool) -> int:
    matches = match_path(pattern, sent)
    for match in matches:
        parts = [sent.sentence_id, f"path={pattern.path_id}"]
        for tag, index in sorted(match.bindings.items()):
            parts.append(f"{tag}={index} ({sent.token(index).surface})")
        parts.append("tokens=" + ",".join(str(i) for i in match.node_indices))
        parts.append(" ".join(str(rel) for rel in match.matched_relations))
        typer.echo("  ".join(parts))
        if not explain:
            continue
        for number, (seg, rel) in enumerate(zip(pattern.segments, match.matched_relations), start=1):
            typer.echo(f"  segment {number}: {seg.src} -{seg.edge}-> {seg.dst}  ~  {rel}")
            rows = [
                [d.attribute, d.pattern, d.value, d.rule, "yes" if d.passed else "no"]
                for d in explain_segment(seg, rel, sent)
            ]
            table = tabulate(rows, ["attribute", "pattern", "value", "rule", "match"])
            typer.echo("\n".join("    " + line for line in table.splitlines()))
    return len(matches)


@app.command()
def match(
    ctx: typer.Context,
    sentence_file: Path = typer.Option(
        ..., "--sentence-file", envvar=_env("SENTENCE_FILE"), help="Corpus file with the sentences."
    ),
    path: str | None = typer.Option(None, "--path", envvar=_env("PATH"), help="Path in DSL text."),
    path_id: str | None = typer.Option(
        None, "--path-id", envvar=_env("PATH_ID"), help="Catalog path id."
    ),
    sentence_id: str | None = typer.Option(
        None, "--sentence-id", envvar=_env("SENTENCE_ID"), help="Only this sentence."
    ),
    explain: bool = typer.Option(
        False, "--explain", envvar=_env("EXPLAIN"), help="Show the rule applied per attribute."
    ),
) -> None:
    """List the matches of one dependency path."""
    with _fail_on_errors():
        pattern = _select_pattern(ctx, path, path_id)
        typer.echo(f"🔎 {format_path(pattern)}")
        total = 0
        for review in load_corpus(sentence_file):
            for sent in review.sentences:
                if sentence_id is None or sent.sentence_id == sentence_id:
                    total += _print_match(sent, pattern, explain)
    typer.echo(f"📊 {total} matches")


@app.command()
def convert(
    source: Path = typer.Argument(..., envvar=_env("CONLLU"), help="CoNLL-U file."),
    out: Path = typer.Option(..., "--out", "-o", envvar=_env("OUT"), help="Corpus file to write."),
    category: str | None = typer.Option(
        None, "--category", envvar=_env("CATEGORY"), help="Category for sentences without one."
    ),
    product_id: str | None = typer.Option(
        None, "--product-id", envvar=_env("PRODUCT_ID"), help="Product for sentences without one."
    ),
) -> None:
    """Convert a CoNLL-U treebank export into the corpus format."""
    with _fail_on_errors():
        reviews = convert_file(source, category=category, product_id=product_id)
        save_corpus(reviews, out)
    typer.echo(f"✅ {len(reviews)} reviews written to {out}")


@app.command()
def sample(
    corpus: Path = typer.Option(..., "--corpus", envvar=_env("CORPUS")),
    category: str = typer.Option(..., "--category", envvar=_env("CATEGORY")),
    n: int = typer.Option(..., "-n", "--size", min=0, envvar=_env("SAMPLE"), help="Number of reviews."),
    seed: int = typer.Option(0, "--seed", envvar=_env("SEED")),
    out: Path = typer.Option(..., "--out", "-o", envvar=_env("OUT")),
) -> None:
    """Write a deterministic sample of one category."""
    with _fail_on_errors():
        reviews = sample_category(load_corpus(corpus), category, n, seed)
        save_corpus(reviews, out)
    typer.echo(f"✅ {len(reviews)} '{category}' reviews written to {out}")


@app.command()
def sweep(
    ctx: typer.Context,
    corpus: Path = typer.Option(..., "--corpus", envvar=_env("CORPUS")),
    category: str | None = typer.Option(None, "--category", envvar=_env("CATEGORY")),
    sizes: str = typer.Option(
        "1000,3000,6000", "--sizes", envvar=_env("SIZES"), help="Comma-separated sample sizes."
    ),
    seed: int = typer.Option(0, "--seed", envvar=_env("SEED")),
) -> None:
    """Build knowledge from several sample sizes and report sizes and time."""
    state = _state(ctx)
    with _fail_on_errors():
        try:
            counts = [int(size) for size in sizes.split(",") if size.strip()]
        except ValueError as exc:
            raise typer.BadParameter(f"invalid sizes '{sizes}'", param_hint="--sizes") from exc
        category, reviews = _category_reviews(load_corpus(corpus), category)
        rows = []
        for size in counts:
            picked = sample_category(reviews, category, size, seed)
            started = time.perf_counter()
            dk = build_domain_knowledge(
                picked,
                state.settings.seeds,
                domain=category,
                settings=state.settings.expansion(),
            )
            elapsed = time.perf_counter() - started
            rows.append([size, len(picked), len(dk.cce), len(dk.dsv), elapsed])
    typer.echo(f"📊 {category}")
    typer.echo(
        tabulate(rows, ["size", "reviews", "CCE", "DSV", "seconds"], tablefmt="pipe", floatfmt=".2f")
    )


@app.command("paths")
def list_paths(ctx: typer.Context) -> None:
    """List the path catalog (id, role, DSL)."""
    with _fail_on_errors():
        catalog = _state(ctx).settings.catalog()
    rows = [[entry.path_id, entry.role.value, format_path(entry.pattern)] for entry in catalog]
    typer.echo(tabulate(rows, ["id", "role", "path"]))


if __name__ == "__main__":
    app()
