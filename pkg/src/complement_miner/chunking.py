"""
Noun-phrase chunking over POS tags

A single extracted noun is widened to the noun phrase around it: one noun
followed by any number of nouns or numbers (<N><N|CD>*), e.g.
Samsung/NNP Galaxy/NNP S6/NNP.
"""

from functools import lru_cache

import nltk

from .errors import ChunkError
from .model import ParsedSentence, TokenSpan
from .paths import POS_CLASSES

_NOUN_TAGS = "|".join(sorted(POS_CLASSES["N"]))
_GRAMMAR = f"NP: {{<{_NOUN_TAGS}><{_NOUN_TAGS}|CD>*}}"

_chunker = nltk.RegexpParser(_GRAMMAR)


@lru_cache(maxsize=8192)
def noun_phrases(sent: ParsedSentence) -> tuple[TokenSpan, ...]:
    """All <N><N|CD>* chunks of a sentence, left to right"""
    if not sent.tokens:
        return ()
    tree = _chunker.parse([(token.surface, token.pos) for token in sent.tokens])
    spans = []
    position = 1
    for node in tree:
        if isinstance(node, nltk.Tree):
            spans.append(TokenSpan(position, position + len(node) - 1))
            position += len(node)
        else:
            position += 1
    return tuple(spans)


def np_chunk(sent: ParsedSentence, head_idx: int) -> TokenSpan:
    """Expand the noun at head_idx into its noun phrase"""
    head = sent.token(head_idx)
    if head.pos not in POS_CLASSES["N"]:
        raise ChunkError(
            f"sentence {sent.sentence_id}: token {head_idx} '{head.surface}' "
            f"is {head.pos}, not a noun"
        )
    for span in noun_phrases(sent):
        if head_idx in span:
            return span
    return TokenSpan(head_idx, head_idx)
