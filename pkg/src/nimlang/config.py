"""Pipeline configuration: one TOML file with env-var overrides for secrets."""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from typing import Optional

from .complexity import PartitionConfig, load_familiar_words


@dataclass(frozen=True)
class PipelineConfig:
    source_lang: str = "en"
    binding_lang: str = "en"
    admit_oov: bool = True
    retries: int = 2
    k_examples: int = 5
    partition: PartitionConfig = field(default_factory=PartitionConfig)
    completion_endpoint: Optional[str] = None
    translation_endpoint: Optional[str] = None
    token_env: str = "NIM_PROVIDER_TOKEN"


def default_config() -> PipelineConfig:
    return PipelineConfig(
        partition=PartitionConfig(familiar_words=load_familiar_words()))


def load_config(path=None) -> PipelineConfig:
    """Read the TOML config file; unspecified keys keep their defaults."""
    if path is None:
        return default_config()
    with open(path, "rb") as f:
        doc = tomllib.load(f)

    part = doc.get("partition", {})
    familiar = load_familiar_words(part.get("familiar_words_file"))
    pcfg = PartitionConfig(
        max_words=int(part.get("max_words", 20)),
        strict=bool(part.get("strict", True)),
        noun_gate=str(part.get("noun_gate", "all")),
        verb_threshold=float(part.get("verb_threshold", 0.5)),
        noun_threshold=float(part.get("noun_threshold", 0.5)),
        weights=tuple(part.get("weights", (0.4, 0.2, 0.4))),
        familiar_words=familiar,
    )
    top = doc.get("pipeline", {})
    providers = doc.get("providers", {})
    return PipelineConfig(
        source_lang=str(top.get("source_lang", "en")),
        binding_lang=str(top.get("binding_lang", "en")),
        admit_oov=bool(top.get("admit_oov", True)),
        retries=int(top.get("retries", 2)),
        k_examples=int(top.get("k_examples", 5)),
        partition=pcfg,
        completion_endpoint=providers.get("completion_endpoint"),
        translation_endpoint=providers.get("translation_endpoint"),
        token_env=str(providers.get("token_env", "NIM_PROVIDER_TOKEN")),
    )
