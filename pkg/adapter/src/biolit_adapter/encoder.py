"""Token-classification mode: run a per-token labeling model over documents.

A model is any callable taking the word-token surfaces of one document and
returning one BIO tag per token. Built-in stubs: "gold-replay" (echoes the
tags implied by the document's own annotations; pipeline sanity check) and
"all-o" (predicts nothing). Anything else is resolved as a dotted
"module:attribute" path.
"""

from __future__ import annotations

import importlib
from typing import Callable, Protocol

from .config import AdapterConfig
from .pubtator_lite import Document, serialize
from .tagging import Token, decode_tags, gold_tags, tokenize


class EncoderModel(Protocol):
    def __call__(self, tokens: list[str], doc: Document) -> list[str]: ...


class AdapterError(RuntimeError):
    pass


def _gold_replay(tokens: list[str], doc: Document) -> list[str]:
    return gold_tags(doc, tokenize(doc.text))


def _all_o(tokens: list[str], doc: Document) -> list[str]:
    return ["O"] * len(tokens)


BUILTIN_MODELS: dict[str, EncoderModel] = {
    "gold-replay": _gold_replay,
    "all-o": _all_o,
}


def resolve_model(name: str) -> EncoderModel:
    if name in BUILTIN_MODELS:
        return BUILTIN_MODELS[name]
    module_name, sep, attr = name.partition(":")
    if not sep:
        raise AdapterError(
            f"unknown model {name!r}; use a built-in "
            f"({', '.join(BUILTIN_MODELS)}) or a module:attribute path"
        )
    try:
        module = importlib.import_module(module_name)
        return getattr(module, attr)
    except (ImportError, AttributeError) as exc:
        raise AdapterError(f"cannot load model {name!r}: {exc}")


def run_encoder_ner(docs: list[Document], config: AdapterConfig) -> str:
    """Predict mentions for each document and render them as PubTator text.

    Per-token model labels are decoded into spans; the concept-id column is
    "-" (the adapter does not link entities). A model emitting labels outside
    the BIO tag set is an error listing the unknown tags.
    """
    model = resolve_model(config.model)
    predicted: list[Document] = []
    for doc in docs:
        tokens = tokenize(doc.text)
        tags = list(model([t.surface for t in tokens], doc))
        if len(tags) != len(tokens):
            raise AdapterError(
                f"{doc.doc_id}: model returned {len(tags)} labels for "
                f"{len(tokens)} tokens"
            )
        mentions = decode_tags(doc, tokens, tags)
        predicted.append(Document(doc.doc_id, doc.title, doc.abstract, mentions))
    return serialize(predicted)
