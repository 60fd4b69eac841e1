"""Adapter configuration, loadable from a JSON file."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

# Defaults for the chat-endpoint protocol: low-ish sampling temperature, a
# generation budget that fits long abstracts, and a fresh session every five
# documents to keep hallucinations down on long inputs.
DEFAULT_TEMPERATURE = 0.5
DEFAULT_MAX_GENERATED_TOKENS = 2000
DEFAULT_BATCH_SIZE = 5

MODES = ("encoder-ner", "llm-ner")


@dataclass
class AdapterConfig:
    mode: str
    model: str = ""
    endpoint: str = ""
    examples_path: str = ""
    temperature: float = DEFAULT_TEMPERATURE
    max_generated_tokens: int = DEFAULT_MAX_GENERATED_TOKENS
    batch_size: int = DEFAULT_BATCH_SIZE
    api_key_env: str = "ADAPTER_API_KEY"
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")

    @classmethod
    def from_json(cls, path: str | Path) -> "AdapterConfig":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {
            k: payload.pop(k)
            for k in (
                "mode", "model", "endpoint", "examples_path", "temperature",
                "max_generated_tokens", "batch_size", "api_key_env",
            )
            if k in payload
        }
        return cls(**known, extra=payload)
