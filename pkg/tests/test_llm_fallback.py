import json

import pytest

from nimlang import llm_fallback as llm, ontology as ont
from nimlang.errors import (
    ExhaustedRetriesError,
    InsufficientExamplesError,
    MalformedResponseError,
    TranscriptMissError,
    UnknownTemplateError,
)


class TestPromptBuilding:
    def test_sc_st_prompt_is_deterministic(self, seed_ontology):
        a = llm.build_prompt_sc_st("mandi", seed_ontology, 5)
        b = llm.build_prompt_sc_st("mandi", seed_ontology, 5)
        assert a.rendered == b.rendered
        assert len(a.examples) == 5

    def test_sc_st_excludes_query_word(self, seed_ontology):
        p = llm.build_prompt_sc_st("market", seed_ontology, 30)
        assert all(w != "market" for w, _ in p.examples)

    def test_sc_st_requires_examples(self, seed_ontology):
        with pytest.raises(InsufficientExamplesError):
            llm.build_prompt_sc_st("mandi", seed_ontology, 0)
        with pytest.raises(InsufficientExamplesError):
            llm.build_prompt_sc_st("mandi", seed_ontology, 10_000)

    def test_sc_st_two_level_framing(self, seed_ontology):
        p = llm.build_prompt_sc_st("mandi", seed_ontology, 5)
        assert "2 levels" in p.context
        assert '"mandi"' in p.instructions

    def test_svsm_enumerates_constraints(self, seed_ontology):
        p = llm.build_prompt_svsm("automobile", "automobile", seed_ontology)
        assert "category" in p.context
        assert "wheels" in p.context
        assert "two" in p.context

    def test_svsm_unknown_template(self, seed_ontology):
        with pytest.raises(UnknownTemplateError):
            llm.build_prompt_svsm("mandi", "no such template", seed_ontology)

    def test_retry_instructions_carries_violations(self):
        text = llm.retry_instructions(["unknown semantic class 'food'"])
        assert "unknown semantic class 'food'" in text


class TestParsing:
    def test_sc_st(self):
        sc, st = llm.parse_response('{"SC":"Location","ST":"Commercial"}', llm.STAGE_SC_ST)
        assert (sc, st) == ("location", "commercial")

    def test_sc_st_with_surrounding_prose(self):
        raw = 'Sure! Here you go: {"SC": "Things", "ST": "Automobile"} hope that helps'
        assert llm.parse_response(raw, llm.STAGE_SC_ST) == ("things", "automobile")

    def test_sv_sm_single(self):
        tuples = llm.parse_response('{"Key1":"Purpose","Value1":"Business"}', llm.STAGE_SV_SM)
        assert tuples == [("purpose", ("business",))]

    def test_sv_sm_multi_pair_and_multi_molecule(self):
        raw = '{"Key1":"Path","Value1":"parent; parent","Key2":"Gender","Value2":"male"}'
        tuples = llm.parse_response(raw, llm.STAGE_SV_SM)
        assert tuples == [("path", ("parent", "parent")), ("gender", ("male",))]

    @pytest.mark.parametrize("raw,stage", [
        ("no json here", llm.STAGE_SC_ST),
        ('{"SC":"x"}', llm.STAGE_SC_ST),
        ("{}", llm.STAGE_SC_ST),
        ('{"Key1":"a"}', llm.STAGE_SV_SM),
        ("{}", llm.STAGE_SV_SM),
    ])
    def test_malformed(self, raw, stage):
        with pytest.raises(MalformedResponseError):
            llm.parse_response(raw, stage)

    def test_skips_invalid_json_prefix(self):
        raw = '{broken} then {"SC":"location","ST":"commercial"}'
        assert llm.parse_response(raw, llm.STAGE_SC_ST) == ("location", "commercial")


class TestInference:
    def test_mandi_end_to_end(self, seed_ontology, mandi_provider):
        entry = llm.infer_entailment("mandi", ont.NOUN, seed_ontology, mandi_provider)
        assert entry.sc == "location"
        assert entry.st == "commercial"
        assert entry.explication == (("purpose", ("business",)),)
        assert entry.provenance == ont.LLM_ADMITTED
        assert mandi_provider.calls == 2

    def test_invalid_class_exhausts_retries(self, seed_ontology):
        class AlwaysFood:
            calls = 0

            def complete(self, prompt, *, max_tokens=256, temperature=0.0):
                self.calls += 1
                return '{"SC":"food","ST":"snacks"}'

        provider = AlwaysFood()
        with pytest.raises(ExhaustedRetriesError) as exc:
            llm.infer_entailment("mandi", ont.NOUN, seed_ontology, provider, retries=1)
        assert provider.calls == 2
        assert any("food" in v for v in exc.value.violations)

    def test_retry_recovers_from_bad_first_answer(self, seed_ontology):
        prov = llm.TranscriptReplayProvider()
        p1 = llm.build_prompt_sc_st("mandi", seed_ontology, 5)
        prov.add(p1.rendered, '{"SC":"food","ST":"snacks"}')
        violations = ["unknown semantic class 'food'", "unknown semantic template 'snacks'"]
        p1_retry = llm.build_prompt_sc_st(
            "mandi", seed_ontology, 5,
            extra_instructions=llm.retry_instructions(violations))
        prov.add(p1_retry.rendered, '{"SC":"Location","ST":"Commercial"}')
        p2 = llm.build_prompt_svsm("mandi", "commercial", seed_ontology)
        prov.add(p2.rendered, '{"Key1":"Purpose","Value1":"Business"}')

        entry = llm.infer_entailment("mandi", ont.NOUN, seed_ontology, prov, retries=1)
        assert entry.st == "commercial"
        assert prov.calls == 3

    def test_tuples_canonicalized_to_slot_order(self, seed_ontology):
        prov = llm.TranscriptReplayProvider()
        p1 = llm.build_prompt_sc_st("cyclone", seed_ontology, 5)
        prov.add(p1.rendered, '{"SC":"event","ST":"event climate"}')
        p2 = llm.build_prompt_svsm("cyclone", "event climate", seed_ontology)
        prov.add(p2.rendered,
                 '{"Key1":"Intensity","Value1":"high","Key2":"Category","Value2":"wind"}')
        entry = llm.infer_entailment("cyclone", ont.NOUN, seed_ontology, prov)
        assert entry.explication == (("category", ("wind",)), ("intensity", ("high",)))

    def test_audit_log_records_raw_responses(self, seed_ontology, mandi_provider):
        audit = []
        llm.infer_entailment("mandi", ont.NOUN, seed_ontology, mandi_provider, audit=audit)
        assert len(audit) == 1
        assert len(audit[0].raw_responses) == 2


class TestReplayProvider:
    def test_miss_raises(self):
        prov = llm.TranscriptReplayProvider()
        with pytest.raises(TranscriptMissError):
            prov.complete("never recorded")

    def test_from_file(self, tmp_path):
        entries = [{"prompt_sha256": llm.prompt_sha256("hi"), "response": "ok"}]
        path = tmp_path / "t.json"
        path.write_text(json.dumps(entries))
        prov = llm.TranscriptReplayProvider.from_file(path)
        assert prov.complete("hi") == "ok"
        assert prov.calls == 1
