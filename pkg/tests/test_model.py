"""
Tests for the core model types
"""

import random

import pytest

from complement_miner.errors import (
    ComplementMinerError,
    CorpusValidationError,
    UnresolvedRelationError,
)
from complement_miner.model import (
    ROOT_ENDPOINT,
    DependencyRelation,
    DomainKnowledge,
    Extraction,
    ExtractionRecord,
    GoldAnnotation,
    ParsedSentence,
    Review,
    Token,
    TokenSpan,
    resolve_endpoint,
)
from tests.test_matcher_oracle import random_sentence


class TestToken:
    """Test token construction and validation"""

    def test_lemma_falls_back_to_lowercased_surface(self):
        """Test a missing lemma becomes the lowercased surface form"""
        token = Token.create(1, "iPad", "NNP")
        assert token.lemma == "ipad"

    def test_explicit_lemma_is_lowercased(self):
        """Test an explicit lemma is lowercased"""
        assert Token.create(2, "Works", "VBZ", "Work").lemma == "work"

    def test_index_must_be_positive(self):
        """Test index 0 is reserved for ROOT"""
        with pytest.raises(CorpusValidationError):
            Token(0, "It", "it", "PRP")

    def test_uppercase_lemma_rejected(self):
        """Test lemmas must be lowercase"""
        with pytest.raises(CorpusValidationError):
            Token(1, "It", "It", "PRP")


class TestParsedSentence:
    """Test sentence invariants and endpoint resolution"""

    def test_phone_sentence(self, phone_sentence):
        """Test the "It works with my phone" parse has five tokens and five relations"""
        assert len(phone_sentence) == 5
        assert len(phone_sentence.relations) == 5
        assert phone_sentence.text() == "It works with my phone"

    def test_index_gap_rejected(self):
        """Test token indices must be contiguous from 1"""
        tokens = (Token.create(1, "It", "PRP"), Token.create(3, "works", "VBZ"))
        with pytest.raises(CorpusValidationError, match="expected token index 2"):
            ParsedSentence("s:0", tokens, ())

    def test_dangling_relation_rejected(self):
        """Test relations must point inside the sentence"""
        tokens = (Token.create(1, "It", "PRP"), Token.create(2, "works", "VBZ"))
        with pytest.raises(CorpusValidationError, match="points past"):
            ParsedSentence("s:0", tokens, (DependencyRelation("nsubj", 2, 9),))

    def test_self_loop_rejected(self):
        """Test a relation cannot link a token to itself"""
        with pytest.raises(CorpusValidationError):
            DependencyRelation("dep", 2, 2)

    def test_resolve_root_endpoint(self, phone_sentence):
        """Test governor index 0 resolves to the virtual ROOT"""
        root = next(r for r in phone_sentence.relations if r.rel_type == "root")
        assert resolve_endpoint(phone_sentence, root, "gov") == ROOT_ENDPOINT
        assert ROOT_ENDPOINT.pos == "None"

    def test_resolve_dependent(self, phone_sentence):
        """Test dependent resolution returns the token attributes"""
        rel = next(r for r in phone_sentence.relations if r.rel_type == "nmod:with")
        end = phone_sentence.endpoint(rel, "dep")
        assert (end.surface, end.lemma, end.pos, end.index) == ("phone", "phone", "NN", 5)

    def test_unresolved_token(self, phone_sentence):
        """Test asking for a missing token raises an IndexError subclass"""
        with pytest.raises(UnresolvedRelationError):
            phone_sentence.token(6)
        with pytest.raises(IndexError):
            phone_sentence.token(0)

    def test_span_text(self, phone_sentence):
        """Test span text joins surface forms"""
        assert phone_sentence.text(TokenSpan(4, 5)) == "my phone"

    def test_resolve_never_fails_on_valid_sentences(self):
        """Test both sides of every relation resolve on 2,000 random sentences"""
        rng = random.Random(11)
        for number in range(2000):
            sent = random_sentence(rng, number)
            for rel in sent.relations:
                gov = resolve_endpoint(sent, rel, "gov")
                dep = resolve_endpoint(sent, rel, "dep")
                token = sent.token(rel.dep_idx)
                assert dep == (token.surface, token.lemma, token.pos, token.index)
                if rel.gov_idx == 0:
                    assert gov == ROOT_ENDPOINT
                else:
                    assert gov.index == rel.gov_idx
                    assert gov.lemma == sent.token(rel.gov_idx).lemma


class TestSpansAndExtractions:
    """Test spans, extraction records and annotations"""

    def test_span_is_inclusive(self):
        """Test spans include both ends"""
        span = TokenSpan(5, 7)
        assert len(span) == 3
        assert 5 in span and 7 in span and 8 not in span
        assert list(span.indices()) == [5, 6, 7]

    def test_spans_order_by_start_then_end(self):
        """Test spans sort by start, then end"""
        assert sorted([TokenSpan(5, 7), TokenSpan(2, 2), TokenSpan(5, 5)]) == [
            TokenSpan(2, 2),
            TokenSpan(5, 5),
            TokenSpan(5, 7),
        ]

    def test_head_outside_span_rejected(self):
        """Test the head must lie inside the span"""
        with pytest.raises(CorpusValidationError):
            Extraction("s:0", 3, TokenSpan(5, 7), "Samsung Galaxy S6", "1")

    def test_record_to_dict(self):
        """Test the extraction record layout"""
        ext = Extraction("r1:0", 7, TokenSpan(5, 7), "Samsung Galaxy S6", "1")
        record = ExtractionRecord(ext, "r1", "stand-a").to_dict()
        assert record == {
            "sentence_id": "r1:0",
            "review_id": "r1",
            "product_id": "stand-a",
            "head": 7,
            "start": 5,
            "end": 7,
            "text": "Samsung Galaxy S6",
            "path_id": "1",
        }

    def test_gold_allows_duplicates_and_empty(self):
        """Test gold entities are a multiset and may be empty"""
        assert GoldAnnotation("s:0", ("phone", "phone")).entities == ("phone", "phone")
        assert GoldAnnotation("s:1").entities == ()

    def test_review_requires_category(self):
        """Test every review carries a category"""
        with pytest.raises(CorpusValidationError):
            Review("r1", "p1", "")


class TestDomainKnowledge:
    """Test the knowledge bundle"""

    def test_verbs_need_two_occurrences(self):
        """Test a domain-specific verb with count 1 is invalid"""
        with pytest.raises(CorpusValidationError):
            DomainKnowledge("Stylus", {}, {"insert": 1}, frozenset({"fit", "work"}))

    def test_seed_verbs_always_allowed(self):
        """Test seeds pass the verb check without being counted"""
        dk = DomainKnowledge.empty("Stylus", frozenset({"fit", "work"}))
        assert dk.verb_allowed("work")
        assert not dk.verb_allowed("insert")
        assert dk.allowed_verbs == frozenset({"fit", "work"})

    def test_entity_lookup_is_case_insensitive(self):
        """Test candidate lookup lowercases the text"""
        dk = DomainKnowledge("Stylus", {"ipad": 3}, {}, frozenset())
        assert dk.entity_known("iPad")

    def test_errors_share_a_base(self):
        """Test library errors derive from one base class"""
        assert issubclass(CorpusValidationError, ComplementMinerError)
        assert issubclass(CorpusValidationError, ValueError)
