import json
from pathlib import Path

import pytest

from nimlang import decompose, llm_fallback as llm, ontology as ont
from nimlang.cli import seed_ontology_path
from nimlang.config import default_config

DATA = Path(__file__).parent / "data"

MSG_1 = "I am going to market on motorcycle to buy seeds"
MSG_2 = "There may be a typhoon tomorrow"
MSG_OOV = "I am going to mandi on motorcycle to buy seeds"

MANDI_SC_ST = '{"SC":"Location","ST":"Commercial"}'
MANDI_SV_SM = '{"Key1":"Purpose","Value1":"Business"}'


@pytest.fixture(scope="session")
def seed_ontology():
    return ont.load_ontology(seed_ontology_path())


@pytest.fixture(scope="session")
def cfg():
    return default_config()


def make_mandi_provider(o):
    """Replay provider answering the two-stage mandi prompts."""
    prov = llm.TranscriptReplayProvider()
    p1 = llm.build_prompt_sc_st("mandi", o, 5, pos=ont.NOUN)
    prov.add(p1.rendered, MANDI_SC_ST)
    p2 = llm.build_prompt_svsm("mandi", "commercial", o)
    prov.add(p2.rendered, MANDI_SV_SM)
    return prov


@pytest.fixture
def mandi_provider(seed_ontology):
    return make_mandi_provider(seed_ontology)


@pytest.fixture
def mandi_providers(mandi_provider):
    return decompose.Providers(fallback=mandi_provider)


def golden(name):
    return (DATA / name).read_text(encoding="utf-8")
