"""
Built-in path catalog

Paths 1-6 recognize complementary entities, "my" is the possessive baseline,
path 7 bootstraps candidate complementary entities from the seed verbs, and
paths 8-9 bootstrap domain-specific verbs.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum

from .errors import PathSemanticError
from .paths import PathPattern, compile_path

DEFAULT_SEEDS = frozenset({"fit", "work"})


class PathRole(str, Enum):
    BASIC = "basic"
    BASELINE = "baseline"
    CCE = "cce"
    DSV = "dsv"


@dataclass(frozen=True)
class CatalogEntry:
    pattern: PathPattern
    role: PathRole
    description: str = ""

    @property
    def path_id(self) -> str:
        return self.pattern.path_id


_BUILTIN: tuple[tuple[str, PathRole, str, str], ...] = (
    ("1", PathRole.BASIC, "(VERB, V) -nmod:cmprel-> (CETT, N)", "Verb+Prep"),
    ("2", PathRole.BASIC, "(*, N) -nmod:cmprel-> (CETT, N)", "Noun+Prep"),
    ("3", PathRole.BASIC, "(*, J) -nmod:cmprel-> (CETT, N)", "Adjective+Prep"),
    ("4", PathRole.BASIC, "(*, DT) -nmod:cmprel-> (CETT, N)", "Determiner+Prep"),
    (
        "5",
        PathRole.BASIC,
        "(VERB, V) -dobj-> (CETT, N) -nmod:poss-> (my, PRP$)",
        "Verb, possessive object",
    ),
    (
        "6",
        PathRole.BASIC,
        "(it|this, DT) <-nsubj- (VERB, V) -dobj-> (CETT, N)",
        "Verb, pronoun subject",
    ),
    ("my", PathRole.BASELINE, "(CETT, N) -nmod:poss-> (my, PRP$)", "\"My\" entity"),
    (
        "8",
        PathRole.DSV,
        "(VERB, V) -nmod:cmprel-> (CETT, N) -nmod:poss-> (my, PRP$)",
        "Verb+Prep verbs",
    ),
    (
        "9",
        PathRole.DSV,
        "(this, DT) <-nsubj- (VERB, V) -dobj-> (CETT, N) -nmod:poss-> (my, PRP$)",
        "Verb verbs",
    ),
)

BUILTIN_IDS = frozenset({path_id for path_id, *_ in _BUILTIN} | {"7"})

# Path 9 with no CETT node and a possessive hanging off the verb.
PATH_9_WITHOUT_CETT = "(this, DT) <-dobj- (VERB, V) -nmod:poss-> (my, PRP$)"


def normalize_seeds(seeds: Iterable[str]) -> frozenset[str]:
    """Lowercased, stripped seed verbs; blanks dropped"""
    return frozenset(seed.strip().lower() for seed in seeds if seed.strip())


def cce_path_text(seeds: Iterable[str] = DEFAULT_SEEDS) -> str:
    """Path 7 with the seed verbs as its literal"""
    normalized = normalize_seeds(seeds)
    if not normalized:
        raise PathSemanticError("path 7 needs at least one seed verb")
    literal = "|".join(sorted(normalized))
    return f"({literal}, V) -nmod:cmprel-> (CETT, N) -nmod:poss-> (my, PRP$)"


@dataclass(frozen=True)
class PathCatalog:
    """An ordered collection of paths; order decides dedup ties"""

    entries: tuple[CatalogEntry, ...]

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def by_role(self, role: PathRole) -> tuple[CatalogEntry, ...]:
        return tuple(entry for entry in self.entries if entry.role == role)

    def get(self, path_id: str) -> CatalogEntry:
        for entry in self.entries:
            if entry.path_id == path_id:
                return entry
        known = ", ".join(entry.path_id for entry in self.entries)
        raise KeyError(f"unknown path id '{path_id}' (known: {known})")

    def position(self, path_id: str) -> int:
        for i, entry in enumerate(self.entries):
            if entry.path_id == path_id:
                return i
        return len(self.entries)

    def with_paths(self, extra: Iterable[CatalogEntry]) -> "PathCatalog":
        """Append user paths; ids must stay unique"""
        entries = list(self.entries)
        taken = {entry.path_id for entry in entries}
        for entry in extra:
            if entry.path_id in taken:
                raise ValueError(f"duplicate path id '{entry.path_id}'")
            taken.add(entry.path_id)
            entries.append(entry)
        return PathCatalog(tuple(entries))

    @classmethod
    def default(
        cls,
        *,
        seeds: Iterable[str] = DEFAULT_SEEDS,
        path9_without_cett: bool = False,
        disabled: Iterable[str] = (),
    ) -> "PathCatalog":
        """
        Paths 1-6, the "my" baseline and knowledge paths 7-9

        Path 7 is left out when there are no seed verbs. ``disabled`` drops
        built-in paths by id, e.g. {"5", "6"} to run without the object paths.
        """
        skipped = set(disabled)
        unknown = skipped - BUILTIN_IDS
        if unknown:
            raise KeyError(
                f"unknown built-in path ids: {', '.join(sorted(unknown))} "
                f"(known: {', '.join(sorted(BUILTIN_IDS))})"
            )
        seed_set = normalize_seeds(seeds)
        entries = []
        for path_id, role, text, description in _BUILTIN:
            if path_id == "9" and path9_without_cett:
                text, description = PATH_9_WITHOUT_CETT, "Verb verbs (no CETT)"
            if path_id not in skipped:
                entries.append(CatalogEntry(compile_path(text, path_id), role, description))
            if path_id == "my" and seed_set and "7" not in skipped:
                seven = CatalogEntry(
                    compile_path(cce_path_text(seed_set), "7"), PathRole.CCE, "Seed verbs"
                )
                entries.append(seven)
        return cls(tuple(entries))


def user_path(path_id: str, text: str, role: PathRole = PathRole.BASIC) -> CatalogEntry:
    """Catalog entry for a path given as DSL text (config files, CLI)"""
    return CatalogEntry(compile_path(text, path_id), role, "user path")
