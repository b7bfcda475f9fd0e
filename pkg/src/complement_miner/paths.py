"""
Dependency paths - a small DSL for dependency-path patterns and a matcher

A path is written as a chain of nodes joined by typed edges:

    (work, V) -nmod:cmprel-> (CETT, N) -nmod:poss-> (my, PRP$)
    (it|this, DT) <-nsubj- (VERB, V) -dobj-> (CETT, N)

Each edge is one segment read from governor (src) to dependent (dst); the node
written between two edges is shared by both segments and must bind the same
token. Word patterns match lemmas, POS patterns match a tag class (N, V, J) or
one exact tag, and the edge type ``nmod:cmprel`` stands for the preposition
relations used to bring out complementary entities.
"""

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, NamedTuple

from lark import Lark, Token as LarkToken, Transformer, v_args
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    VisitError,
)

from .errors import PathSemanticError, PathSyntaxError
from .model import DependencyRelation, Endpoint, ParsedSentence

CETT = "CETT"
VERB = "VERB"

POS_CLASSES: dict[str, frozenset[str]] = {
    "N": frozenset({"NN", "NNP", "NNPS", "NP"}),
    "V": frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"}),
    "J": frozenset({"JJ", "JJR", "JJS"}),
}

CMPREL = "nmod:cmprel"
CMPREL_TYPES = frozenset(
    {
        "nmod:with",
        "nmod:for",
        "nmod:in",
        "nmod:on",
        "nmod:to",
        "nmod:inside",
        "nmod:into",
    }
)

WordKind = Literal["literal", "wildcard", "cett", "verb"]
EndName = Literal["src", "dst"]


@dataclass(frozen=True)
class WordPattern:
    """Lemma set, wildcard, CETT capture or VERB slot"""

    kind: WordKind
    lemmas: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.kind == "literal":
            if not self.lemmas:
                raise PathSemanticError("literal word pattern needs at least one lemma")
            if any(lemma != lemma.lower() for lemma in self.lemmas):
                raise PathSemanticError(f"literal lemmas must be lowercase: {self}")

    @classmethod
    def literal(cls, *lemmas: str) -> "WordPattern":
        return cls("literal", frozenset(lemma.lower() for lemma in lemmas))

    def matches(self, lemma: str) -> bool:
        if self.kind == "literal":
            return lemma.lower() in self.lemmas
        return True

    def __str__(self) -> str:
        if self.kind == "literal":
            return "|".join(sorted(self.lemmas))
        return {"wildcard": "*", "cett": CETT, "verb": VERB}[self.kind]


@dataclass(frozen=True)
class PosPattern:
    """A POS class (N, V, J) or one exact tag"""

    kind: Literal["class", "exact"]
    value: str

    def __post_init__(self) -> None:
        if self.kind == "class" and self.value not in POS_CLASSES:
            raise PathSemanticError(f"unknown POS class '{self.value}'")

    @classmethod
    def parse(cls, text: str) -> "PosPattern":
        return cls("class" if text in POS_CLASSES else "exact", text)

    @property
    def tags(self) -> frozenset[str]:
        if self.kind == "class":
            return POS_CLASSES[self.value]
        return frozenset({self.value})

    def matches(self, pos: str) -> bool:
        return pos in self.tags

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EdgePattern:
    """One exact dependency type or the nmod:cmprel macro"""

    kind: Literal["exact", "cmprel"]
    value: str

    @classmethod
    def parse(cls, text: str) -> "EdgePattern":
        return cls("cmprel", CMPREL) if text == CMPREL else cls("exact", text)

    @property
    def types(self) -> frozenset[str]:
        return CMPREL_TYPES if self.kind == "cmprel" else frozenset({self.value})

    def matches(self, rel_type: str) -> bool:
        return rel_type in self.types

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class NodePattern:
    """Word and POS pattern of one path node"""

    word: WordPattern
    pos: PosPattern

    def __str__(self) -> str:
        return f"({self.word}, {self.pos})"


@dataclass(frozen=True)
class Segment:
    """An abstract dependency relation, always read src (governor) -> dst (dependent)"""

    src: NodePattern
    dst: NodePattern
    edge: EdgePattern


class Connection(NamedTuple):
    """Which end of segment i and of segment i+1 is the shared node"""

    left: EndName
    right: EndName

    @property
    def arrows(self) -> str:
        first = "→" if self.left == "dst" else "←"
        second = "→" if self.right == "src" else "←"
        return first + second


@dataclass(frozen=True)
class PathPattern:
    """
    A chain of nodes joined by directed edges

    ``forward[i]`` tells whether the edge between node i and node i+1 points
    from node i (governor) to node i+1 (dependent).
    """

    path_id: str
    nodes: tuple[NodePattern, ...]
    edges: tuple[EdgePattern, ...]
    forward: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) < 2:
            raise PathSemanticError("a path needs at least one segment")
        if not len(self.edges) == len(self.forward) == len(self.nodes) - 1:
            raise PathSemanticError("edges must join adjacent nodes")
        captures = [n for n in self.nodes if n.word.kind == "cett"]
        if len(captures) > 1:
            raise PathSemanticError(
                f"path '{self.path_id}' has {len(captures)} CETT tags, "
                "at most one allowed"
            )
        if captures and not captures[0].pos.tags <= POS_CLASSES["N"]:
            raise PathSemanticError(
                f"path '{self.path_id}': CETT must be a noun (N or one of its tags), "
                f"got {captures[0].pos}"
            )
        slots = [n for n in self.nodes if n.word.kind == "verb"]
        if len(slots) > 1:
            raise PathSemanticError(
                f"path '{self.path_id}' has {len(slots)} VERB slots, at most one allowed"
            )

    @property
    def segments(self) -> tuple[Segment, ...]:
        result = []
        for i, (edge, fwd) in enumerate(zip(self.edges, self.forward)):
            left, right = self.nodes[i], self.nodes[i + 1]
            segment = Segment(left, right, edge) if fwd else Segment(right, left, edge)
            result.append(segment)
        return tuple(result)

    @property
    def connections(self) -> tuple[Connection, ...]:
        return tuple(
            Connection(
                "dst" if self.forward[i] else "src",
                "src" if self.forward[i + 1] else "dst",
            )
            for i in range(len(self.forward) - 1)
        )

    @property
    def capture_node(self) -> int | None:
        """Position of the CETT node, if any"""
        for position, node in enumerate(self.nodes):
            if node.word.kind == "cett":
                return position
        return None

    @property
    def verb_nodes(self) -> tuple[int, ...]:
        return tuple(i for i, node in enumerate(self.nodes) if node.word.kind == "verb")

    def with_id(self, path_id: str) -> "PathPattern":
        return PathPattern(path_id, self.nodes, self.edges, self.forward)

    def __str__(self) -> str:
        return format_path(self)


@dataclass(frozen=True)
class PathMatch:
    """One assignment of sentence relations to the segments of a path"""

    path_id: str
    bindings: dict[str, int]
    matched_relations: tuple[DependencyRelation, ...]
    node_indices: tuple[int, ...] = field(default=(), compare=False)

    @property
    def cett(self) -> int | None:
        return self.bindings.get(CETT)

    @property
    def verb(self) -> int | None:
        return self.bindings.get(VERB)


_PATH_GRAMMAR = r"""
    start: node (edge node)+

    node: "(" word "," TAG ")"

    word: "*"                   -> wildcard
        | NAME ("|" NAME)*      -> names

    edge: "-" RELTYPE "->"      -> forward_edge
        | "<-" RELTYPE "-"      -> backward_edge

    NAME: /[A-Za-z0-9][A-Za-z0-9_'.]*/
    TAG: /[A-Za-z]+\$?/
    RELTYPE: /[a-z_]+(?::[a-z_]+)*/

    %import common.WS
    %ignore WS
"""

_parser = Lark(_PATH_GRAMMAR, parser="lalr", lexer="contextual")


@v_args(inline=True)
class _PathBuilder(Transformer):  # type: ignore[type-arg]
    """Turn the parse tree into (nodes, edges, forward) tuples"""

    def wildcard(self) -> WordPattern:
        return WordPattern("wildcard")

    def names(self, *names: LarkToken) -> WordPattern:
        values = [str(name) for name in names]
        tags = [v for v in values if v in (CETT, VERB)]
        if tags and len(values) > 1:
            raise PathSemanticError(f"{tags[0]} cannot be part of an alternation")
        if values == [CETT]:
            return WordPattern("cett")
        if values == [VERB]:
            return WordPattern("verb")
        return WordPattern.literal(*values)

    def node(self, word: WordPattern, tag: LarkToken) -> NodePattern:
        return NodePattern(word, PosPattern.parse(str(tag)))

    def forward_edge(self, rel_type: LarkToken) -> tuple[EdgePattern, bool]:
        return EdgePattern.parse(str(rel_type)), True

    def backward_edge(self, rel_type: LarkToken) -> tuple[EdgePattern, bool]:
        return EdgePattern.parse(str(rel_type)), False

    def start(
        self, *items: NodePattern | tuple[EdgePattern, bool]
    ) -> tuple[tuple[NodePattern, ...], tuple[EdgePattern, ...], tuple[bool, ...]]:
        nodes = tuple(item for item in items if isinstance(item, NodePattern))
        steps = [item for item in items if isinstance(item, tuple)]
        return nodes, tuple(s[0] for s in steps), tuple(s[1] for s in steps)


def parse_path_dsl(text: str, path_id: str = "") -> PathPattern:
    """
    Parse DSL text into a PathPattern

    Raises PathSyntaxError (with the failing position) on malformed text and
    PathSemanticError when the text describes an invalid path.
    """
    try:
        tree = _parser.parse(text)
    except UnexpectedEOF as exc:
        raise PathSyntaxError(
            "unexpected end of path", text=text, position=len(text)
        ) from exc
    except UnexpectedCharacters as exc:
        raise PathSyntaxError(
            f"unexpected character {exc.char!r}",
            text=text,
            position=exc.pos_in_stream,
        ) from exc
    except UnexpectedInput as exc:
        token = getattr(exc, "token", None)
        if token is None or token.type == "$END":
            raise PathSyntaxError(
                "unexpected end of path", text=text, position=len(text)
            ) from exc
        raise PathSyntaxError(
            f"unexpected token {str(token)!r}", text=text, position=token.start_pos
        ) from exc
    try:
        nodes, edges, forward = _PathBuilder().transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, PathSemanticError):
            raise exc.orig_exc from None
        raise
    return PathPattern(path_id, nodes, edges, forward)


def format_path(pattern: PathPattern) -> str:
    """Pretty-print a path back into DSL text"""
    parts = [str(pattern.nodes[0])]
    for edge, fwd, node in zip(pattern.edges, pattern.forward, pattern.nodes[1:]):
        parts.append(f"-{edge}->" if fwd else f"<-{edge}-")
        parts.append(str(node))
    return " ".join(parts)


def match_segment(seg: Segment, rel: DependencyRelation, sent: ParsedSentence) -> bool:
    """Check one segment against one relation (src/gov, dst/dep, edge/type)"""
    if not seg.edge.matches(rel.rel_type):
        return False
    gov = sent.endpoint(rel, "gov")
    if not (seg.src.word.matches(gov.lemma) and seg.src.pos.matches(gov.pos)):
        return False
    dep = sent.endpoint(rel, "dep")
    return seg.dst.word.matches(dep.lemma) and seg.dst.pos.matches(dep.pos)


class RuleDecision(NamedTuple):
    """How one path attribute was checked against one relation attribute"""

    attribute: str
    pattern: str
    value: str
    rule: str
    passed: bool


def _word_decision(attribute: str, word: WordPattern, end: Endpoint) -> RuleDecision:
    rule = {
        "literal": "lemmatized word",
        "wildcard": "any word (*)",
        "cett": "any word (CETT capture)",
        "verb": "any word (verb slot)",
    }[word.kind]
    return RuleDecision(attribute, str(word), end.lemma, rule, word.matches(end.lemma))


def _pos_decision(attribute: str, pos: PosPattern, end: Endpoint) -> RuleDecision:
    rule = f"{pos.value} class" if pos.kind == "class" else "exact tag"
    return RuleDecision(attribute, str(pos), end.pos, rule, pos.matches(end.pos))


def explain_segment(
    seg: Segment, rel: DependencyRelation, sent: ParsedSentence
) -> list[RuleDecision]:
    """List the attribute rule applied for each of the five segment attributes"""
    gov = sent.endpoint(rel, "gov")
    dep = sent.endpoint(rel, "dep")
    edge_rule = "nmod:cmprel macro" if seg.edge.kind == "cmprel" else "exact type"
    return [
        _word_decision("src", seg.src.word, gov),
        _pos_decision("srcpos", seg.src.pos, gov),
        _word_decision("dst", seg.dst.word, dep),
        _pos_decision("dstpos", seg.dst.pos, dep),
        RuleDecision(
            "pathtype",
            str(seg.edge),
            rel.rel_type,
            edge_rule,
            seg.edge.matches(rel.rel_type),
        ),
    ]


def _distinct(relations: Iterable[DependencyRelation]) -> tuple[DependencyRelation, ...]:
    return tuple(dict.fromkeys(relations))


def match_key(match: PathMatch) -> tuple[int, tuple[int, ...], tuple[str, ...]]:
    """Result order: first segment's dependent, then every bound index"""
    rels = match.matched_relations
    indices = tuple(i for rel in rels for i in (rel.gov_idx, rel.dep_idx))
    return rels[0].dep_idx, indices, tuple(rel.rel_type for rel in rels)


def match_path(pat: PathPattern, sent: ParsedSentence) -> list[PathMatch]:
    """
    Enumerate every match of a path in a sentence

    Each segment takes one relation; nodes shared by adjacent segments must bind
    the same token and all VERB nodes must bind one token. Matches are unique
    per relation tuple and ordered by match_key.
    """
    segments = pat.segments
    candidates = [
        _distinct(rel for rel in sent.relations if match_segment(seg, rel, sent))
        for seg in segments
    ]
    if not all(candidates):
        return []

    found: dict[tuple[DependencyRelation, ...], tuple[int, ...]] = {}

    def extend(step: int, chosen: list[DependencyRelation], bound: list[int]) -> None:
        if step == len(segments):
            verbs = {bound[i] for i in pat.verb_nodes}
            if len(verbs) <= 1:
                found.setdefault(tuple(chosen), tuple(bound))
            return
        fwd = pat.forward[step]
        for rel in candidates[step]:
            near, far = (rel.gov_idx, rel.dep_idx) if fwd else (rel.dep_idx, rel.gov_idx)
            if step == 0:
                extend(step + 1, [rel], [near, far])
            elif near == bound[step]:
                extend(step + 1, [*chosen, rel], [*bound, far])

    extend(0, [], [])

    capture = pat.capture_node
    matches = []
    for rels, bound in found.items():
        bindings = {}
        if capture is not None:
            bindings[CETT] = bound[capture]
        if pat.verb_nodes:
            bindings[VERB] = bound[pat.verb_nodes[0]]
        matches.append(PathMatch(pat.path_id, bindings, rels, bound))
    return sorted(matches, key=match_key)


@lru_cache(maxsize=256)
def compile_path(text: str, path_id: str = "") -> PathPattern:
    """Cached parse_path_dsl for catalog and config paths"""
    return parse_path_dsl(text, path_id)
