"""NIM message compiler: ideographs for complex nouns and verbs, decomposed
through an NSM-style ontology, plus translated binding text, with an
evaluation harness for comprehensibility, learnability and ideograph
effectiveness.
"""

from .complexity import PartitionConfig, PartitionResult, partition, word_complexity
from .config import PipelineConfig, default_config, load_config
from .decompose import (
    Elementalization,
    NimMessage,
    Providers,
    Segment,
    ablation_strip_text,
    compile_message,
    decompose_word,
)
from .metrics import comprehensibility, lcr, meteor, mia, sts_score
from .ontology import (
    ConceptEntry,
    Ontology,
    allowed_molecules,
    insert_concept,
    load_ontology,
    lookup,
    save_ontology,
    stats,
    validate,
)
from .serialize import from_wire_json, render_terminal, to_elementalization, to_wire_json

__version__ = "0.1.0"

__all__ = [
    "ConceptEntry",
    "Elementalization",
    "NimMessage",
    "Ontology",
    "PartitionConfig",
    "PartitionResult",
    "PipelineConfig",
    "Providers",
    "Segment",
    "ablation_strip_text",
    "allowed_molecules",
    "compile_message",
    "comprehensibility",
    "decompose_word",
    "default_config",
    "from_wire_json",
    "insert_concept",
    "lcr",
    "load_config",
    "load_ontology",
    "lookup",
    "meteor",
    "mia",
    "partition",
    "render_terminal",
    "save_ontology",
    "stats",
    "sts_score",
    "to_elementalization",
    "to_wire_json",
    "validate",
    "word_complexity",
]
