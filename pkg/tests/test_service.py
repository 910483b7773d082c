import json

import pytest
from fastapi.testclient import TestClient

from nimlang import decompose, ontology as ont, serialize
from nimlang.cli import seed_ontology_path
from nimlang.config import default_config
from nimlang.service import ServiceState, create_app
from conftest import MSG_1, MSG_OOV, make_mandi_provider


@pytest.fixture
def state(seed_ontology, cfg):
    return ServiceState(seed_ontology, cfg)


@pytest.fixture
def client(state):
    return TestClient(create_app(state))


class TestHealth:
    def test_healthz(self, client, seed_ontology):
        resp = client.get("/healthz")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok",
                               "ontology_version": seed_ontology.version}


class TestStats:
    def test_counts(self, client):
        doc = client.get("/v1/ontology/stats").json()
        assert doc["noun"]["classes"] == 6
        assert doc["ideographs"] > 0


class TestCompile:
    def test_returns_wire_json(self, client, cfg, seed_ontology):
        resp = client.post("/v1/compile", json={"text": MSG_1})
        assert resp.status_code == 200
        expected, _ = decompose.compile_message(MSG_1, cfg, seed_ontology)
        assert resp.content == serialize.to_wire_json(expected)

    def test_empty_text_400(self, client):
        resp = client.post("/v1/compile", json={"text": "  "})
        assert resp.status_code == 400
        body = resp.json()
        assert body["stage"] == "input"
        assert "error" in body

    def test_oov_without_provider_422(self, client):
        resp = client.post("/v1/compile", json={"text": MSG_OOV})
        assert resp.status_code == 422
        assert resp.json()["stage"] == "decompose"

    def test_provider_error_502(self, seed_ontology, cfg):
        class Down:
            def complete(self, prompt, *, max_tokens=256, temperature=0.0):
                from nimlang.errors import ProviderUnreachableError
                raise ProviderUnreachableError("down")

        state = ServiceState(seed_ontology, cfg,
                             providers=decompose.Providers(fallback=Down()))
        client = TestClient(create_app(state))
        resp = client.post("/v1/compile", json={"text": MSG_OOV})
        assert resp.status_code == 502
        assert resp.json()["stage"] == "provider"

    def test_oov_admission_updates_snapshot(self, seed_ontology, cfg, tmp_path):
        path = tmp_path / "ont.json"
        ont.save_ontology(seed_ontology, path)
        state = ServiceState(
            seed_ontology, cfg,
            providers=decompose.Providers(fallback=make_mandi_provider(seed_ontology)),
            ontology_path=str(path))
        client = TestClient(create_app(state))
        resp = client.post("/v1/compile", json={"text": MSG_OOV})
        assert resp.status_code == 200
        assert state.snapshot.version == seed_ontology.version + 1
        # persisted to disk
        assert ont.lookup(ont.load_ontology(path), "mandi", ont.NOUN) is not None
        # second request served from the updated snapshot, no provider call
        calls_before = state.providers.fallback.calls
        resp = client.post("/v1/compile", json={"text": MSG_OOV})
        assert resp.status_code == 200
        assert state.providers.fallback.calls == calls_before

    def test_binding_lang_echoed(self, client):
        resp = client.post("/v1/compile", json={"text": MSG_1, "binding_lang": "en"})
        assert json.loads(resp.content)["binding_lang"] == "en"


class TestIcons:
    def test_known_icon_is_png(self, client, seed_ontology):
        icon_id = seed_ontology.classes["location"].icon
        resp = client.get(f"/v1/icons/{icon_id}")
        assert resp.status_code == 200
        assert resp.headers["content-type"] == "image/png"
        assert resp.content[:8] == b"\x89PNG\r\n\x1a\n"

    def test_unknown_icon_404(self, client):
        resp = client.get("/v1/icons/icon:nope")
        assert resp.status_code == 404
        assert resp.json()["stage"] == "icons"

    def test_icon_root_override(self, seed_ontology, cfg, tmp_path):
        icon_id = seed_ontology.classes["location"].icon
        rel = seed_ontology.icon_manifest[icon_id]
        (tmp_path / rel).parent.mkdir(parents=True, exist_ok=True)
        (tmp_path / rel).write_bytes(b"\x89PNG\r\n\x1a\ncustom")
        state = ServiceState(seed_ontology, cfg, icon_root=tmp_path)
        client = TestClient(create_app(state))
        resp = client.get(f"/v1/icons/{icon_id}")
        assert resp.content.endswith(b"custom")
