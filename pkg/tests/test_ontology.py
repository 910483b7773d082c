import dataclasses
import json

import pytest
from hypothesis import given, settings, strategies as st

from nimlang import ontology as ont
from nimlang.errors import (
    DuplicateConceptError,
    OntologyParseError,
    OntologyValidationError,
    UnknownConstraintError,
)


class TestIds:
    @pytest.mark.parametrize("good", ["market", "day(+1)", "event climate", "b2"])
    def test_valid(self, good):
        assert ont.is_valid_id(good)

    @pytest.mark.parametrize("bad", ["", "Market", " lead", "a_b", "日本"])
    def test_invalid(self, bad):
        assert not ont.is_valid_id(bad)


class TestLookup:
    def test_hit(self, seed_ontology):
        entry = ont.lookup(seed_ontology, "market", ont.NOUN)
        assert entry.sc == "location"
        assert entry.st == "commercial"
        assert entry.explication == (("purpose", ("business",)),)

    def test_miss_is_none(self, seed_ontology):
        assert ont.lookup(seed_ontology, "mandi", ont.NOUN) is None

    def test_pos_is_part_of_key(self, seed_ontology):
        assert ont.lookup(seed_ontology, "market", ont.VERB) is None

    def test_allowed_molecules(self, seed_ontology):
        allowed = ont.allowed_molecules(seed_ontology, "automobile", "wheels")
        assert "two" in allowed and "four" in allowed

    def test_unknown_constraint(self, seed_ontology):
        with pytest.raises(UnknownConstraintError):
            ont.allowed_molecules(seed_ontology, "automobile", "purpose")


class TestValidate:
    def test_seed_is_clean(self, seed_ontology):
        assert ont.validate(seed_ontology).ok

    def test_dangling_class_reported(self, seed_ontology):
        bad = ont.ConceptEntry("zork", ont.NOUN, "no such class", "commercial",
                               (("purpose", ("business",)),))
        concepts = dict(seed_ontology.concepts)
        concepts[("zork", ont.NOUN)] = bad
        broken = dataclasses.replace(seed_ontology, concepts=concepts)
        rules = {v.rule for v in ont.validate(broken)}
        assert "dangling-sc" in rules

    def test_molecule_not_allowed_reported(self, seed_ontology):
        bad = ont.ConceptEntry("zork", ont.NOUN, "location", "commercial",
                               (("purpose", ("two",)),))
        concepts = dict(seed_ontology.concepts)
        concepts[("zork", ont.NOUN)] = bad
        broken = dataclasses.replace(seed_ontology, concepts=concepts)
        rules = {v.rule for v in ont.validate(broken)}
        assert "molecule-not-allowed" in rules

    def test_explication_order_enforced(self, seed_ontology):
        flipped = ont.ConceptEntry("zork", ont.NOUN, "event", "event climate",
                                   (("intensity", ("high",)), ("category", ("wind",))))
        concepts = dict(seed_ontology.concepts)
        concepts[("zork", ont.NOUN)] = flipped
        broken = dataclasses.replace(seed_ontology, concepts=concepts)
        rules = {v.rule for v in ont.validate(broken)}
        assert "explication-order" in rules


GOOD_ENTRY = ont.ConceptEntry("mandi", ont.NOUN, "location", "commercial",
                              (("purpose", ("business",)),))


class TestInsert:
    def test_version_bumps_by_one(self, seed_ontology):
        updated = ont.insert_concept(seed_ontology, GOOD_ENTRY)
        assert updated.version == seed_ontology.version + 1
        assert ont.lookup(updated, "mandi", ont.NOUN) is not None
        # original snapshot untouched
        assert ont.lookup(seed_ontology, "mandi", ont.NOUN) is None

    def test_duplicate_rejected(self, seed_ontology):
        dup = dataclasses.replace(GOOD_ENTRY, lemma="market")
        with pytest.raises(DuplicateConceptError):
            ont.insert_concept(seed_ontology, dup)

    def test_invalid_rejected_without_version_change(self, seed_ontology):
        bad = dataclasses.replace(GOOD_ENTRY, st="automobile")
        before = seed_ontology.version
        with pytest.raises(OntologyValidationError):
            ont.insert_concept(seed_ontology, bad)
        assert seed_ontology.version == before
        assert ont.lookup(seed_ontology, "mandi", ont.NOUN) is None

    @given(st.integers(min_value=1, max_value=6))
    @settings(max_examples=10)
    def test_version_strictly_monotone(self, seed_ontology, n):
        o = seed_ontology
        for i in range(n):
            entry = dataclasses.replace(GOOD_ENTRY, lemma=f"bazaar{i}")
            before = o.version
            o = ont.insert_concept(o, entry)
            assert o.version == before + 1


class TestStats:
    def test_seed_counts(self, seed_ontology):
        s = ont.stats(seed_ontology)
        assert s.noun.classes == 6
        assert s.verb.classes == 3
        assert s.noun.concepts + s.verb.concepts == len(seed_ontology.concepts)
        assert s.ideographs > 0

    def test_as_dict_shape(self, seed_ontology):
        d = ont.stats(seed_ontology).as_dict()
        assert set(d) == {"noun", "verb", "ideographs"}
        assert set(d["noun"]) == {"classes", "templates", "tuples", "concepts"}


class TestPersistence:
    def test_round_trip_byte_stable(self, seed_ontology, tmp_path):
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        ont.save_ontology(seed_ontology, p1)
        reloaded = ont.load_ontology(p1)
        ont.save_ontology(reloaded, p2)
        assert p1.read_bytes() == p2.read_bytes()
        assert reloaded == seed_ontology

    def test_load_rejects_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{ nope")
        with pytest.raises(OntologyParseError):
            ont.load_ontology(p)

    def test_load_rejects_non_object(self, tmp_path):
        p = tmp_path / "arr.json"
        p.write_text("[]")
        with pytest.raises(OntologyParseError):
            ont.load_ontology(p)

    def test_load_validates(self, seed_ontology, tmp_path):
        doc = ont.to_document(seed_ontology)
        doc["concepts"].append({
            "lemma": "zork", "pos": "noun", "sc": "ghost", "st": "commercial",
            "explication": [{"sv": "purpose", "sm": ["business"]}],
        })
        p = tmp_path / "broken.json"
        p.write_text(json.dumps(doc))
        with pytest.raises(OntologyValidationError):
            ont.load_ontology(p)

    def test_duplicate_concept_in_document(self, seed_ontology, tmp_path):
        doc = ont.to_document(seed_ontology)
        doc["concepts"].append(doc["concepts"][0])
        p = tmp_path / "dup.json"
        p.write_text(json.dumps(doc))
        with pytest.raises(OntologyParseError):
            ont.load_ontology(p)

    def test_concept_dict_round_trip(self):
        entry = dataclasses.replace(GOOD_ENTRY, admitted_at="2026-01-01T00:00:00+00:00",
                                    provenance=ont.LLM_ADMITTED)
        assert ont.concept_from_dict(ont.concept_to_dict(entry)) == entry
