"""Local HTTP service exposing the compile pipeline, ontology stats and
icons to the viewer and to other programs.

Requests share an immutable ontology snapshot; OOV admissions serialize
through a single writer lock and swap the served snapshot atomically.
"""

from __future__ import annotations

import threading
from importlib import resources
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from . import decompose, ontology as ont, serialize
from .config import PipelineConfig, default_config
from .errors import InputError, NimError, OntologyError, ProviderError


class ServiceState:
    def __init__(self, o: ont.Ontology, cfg: PipelineConfig,
                 providers: Optional[decompose.Providers] = None,
                 ontology_path: Optional[str] = None,
                 icon_root: Optional[Path] = None):
        self.cfg = cfg
        self.providers = providers or decompose.Providers()
        self.ontology_path = ontology_path
        self.icon_root = icon_root
        self._snapshot = o
        self._write_lock = threading.Lock()

    @property
    def snapshot(self) -> ont.Ontology:
        return self._snapshot

    def admit(self, updated: ont.Ontology) -> None:
        """Single-writer snapshot swap; persists when a path is configured."""
        with self._write_lock:
            if updated.version > self._snapshot.version:
                if self.ontology_path:
                    ont.save_ontology(updated, self.ontology_path)
                self._snapshot = updated


def _error_response(status: int, exc: NimError) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": str(exc), "stage": exc.stage})


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="nim-service")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "ontology_version": state.snapshot.version}

    @app.get("/v1/ontology/stats")
    def ontology_stats():
        return ont.stats(state.snapshot).as_dict()

    @app.post("/v1/compile")
    async def compile_endpoint(request: Request):
        body = await request.json()
        text = body.get("text", "")
        binding_lang = body.get("binding_lang") or state.cfg.binding_lang
        snapshot = state.snapshot
        try:
            message, updated = decompose.compile_message(
                text, state.cfg, snapshot, state.providers,
                binding_lang=binding_lang)
        except InputError as e:
            return _error_response(400, e)
        except ProviderError as e:
            return _error_response(502, e)
        except OntologyError as e:
            return _error_response(422, e)
        if updated.version != snapshot.version:
            state.admit(updated)
        return Response(content=serialize.to_wire_json(message),
                        media_type="application/json")

    @app.get("/v1/icons/{icon_id}")
    def icon(icon_id: str):
        manifest = state.snapshot.icon_manifest
        if icon_id not in manifest:
            return JSONResponse(status_code=404,
                                content={"error": f"unknown icon {icon_id!r}", "stage": "icons"})
        rel = manifest[icon_id]
        if state.icon_root is not None:
            data = (state.icon_root / rel).read_bytes()
        else:
            data = resources.files("nimlang.data").joinpath(rel).read_bytes()
        return Response(content=data, media_type="image/png")

    return app


def default_state(ontology_path=None, config_path=None,
                  providers: Optional[decompose.Providers] = None) -> ServiceState:
    from .config import load_config
    from .cli import seed_ontology_path

    path = ontology_path or seed_ontology_path()
    o = ont.load_ontology(path)
    cfg = load_config(config_path)
    return ServiceState(o, cfg, providers=providers, ontology_path=ontology_path)
