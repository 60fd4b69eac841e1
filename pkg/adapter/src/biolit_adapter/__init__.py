"""Bridge real models to the biolit toolkit over its PubTator file formats."""

__version__ = "0.1.0"

from .config import AdapterConfig
from .encoder import AdapterError, run_encoder_ner
from .llm import LlmRunReport, run_llm_ner
from .tagging import TagSetError, align_subword_labels

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "LlmRunReport",
    "TagSetError",
    "align_subword_labels",
    "run_encoder_ner",
    "run_llm_ner",
]
