"""Word tokenization and BIO tag handling shared by the adapter's model modes."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .pubtator_lite import Document, Mention

# Core entity tag names and the raw annotation labels they serialize as.
CORE_TYPES = ("Gene", "Variant", "Disease", "Chemical")
RAW_LABELS = {
    "Gene": "GeneOrGeneProduct",
    "Variant": "SequenceVariant",
    "Disease": "DiseaseOrPhenotypicFeature",
    "Chemical": "ChemicalEntity",
}
CORE_OF_RAW = {raw: core for core, raw in RAW_LABELS.items()}

VALID_TAGS = frozenset(
    {"O"} | {f"{prefix}-{t}" for prefix in "BI" for t in CORE_TYPES}
)

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    """Maximal runs of non-whitespace, offsets into the original text."""
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(text)]


class TagSetError(ValueError):
    """The model emitted labels outside the BIO tag set."""


def check_tags(tags: list[str]) -> None:
    unknown = sorted({t for t in tags if t not in VALID_TAGS})
    if unknown:
        raise TagSetError(f"unknown tags from model: {', '.join(unknown)}")


def gold_tags(doc: Document, tokens: list[Token]) -> list[str]:
    """BIO tags implied by the document's own core-type annotations."""
    tags = ["O"] * len(tokens)
    mentions = sorted(
        (m for m in doc.mentions if m.raw_type in CORE_OF_RAW),
        key=lambda m: (m.start, -(m.end - m.start)),
    )
    for m in mentions:
        idx = [
            i for i, t in enumerate(tokens) if t.start < m.end and m.start < t.end
        ]
        if not idx or any(tags[i] != "O" for i in idx):
            continue
        core = CORE_OF_RAW[m.raw_type]
        for n, i in enumerate(idx):
            tags[i] = ("B-" if n == 0 else "I-") + core
    return tags


def decode_tags(doc: Document, tokens: list[Token], tags: list[str]) -> list[Mention]:
    """Turn a BIO tag sequence back into mentions with text offsets."""
    check_tags(tags)
    mentions: list[Mention] = []
    run: list[Token] = []
    run_type: str | None = None

    def close() -> None:
        nonlocal run, run_type
        if run_type is not None:
            start, end = run[0].start, run[-1].end
            mentions.append(
                Mention(start, end, doc.text[start:end], RAW_LABELS[run_type], "-")
            )
        run, run_type = [], None

    for token, tag in zip(tokens, tags):
        if tag == "O":
            close()
            continue
        prefix, _, core = tag.partition("-")
        if prefix == "I" and core == run_type:
            run.append(token)
            continue
        close()
        run_type = core
        run = [token]
    close()
    return mentions


def align_subword_labels(
    tokens: list[Token],
    subword_spans: list[tuple[int, int]],
    subword_labels: list[str],
) -> list[str]:
    """Project labels from model subwords onto word tokens.

    Each word token takes the label of the first subword overlapping it;
    words no subword covers stay O. This is the standard first-subword rule
    for word-level evaluation of subword token classifiers.
    """
    if len(subword_spans) != len(subword_labels):
        raise ValueError("subword spans and labels must align")
    labels = []
    for token in tokens:
        label = "O"
        for (s, e), sub_label in zip(subword_spans, subword_labels):
            if s < token.end and token.start < e:
                label = sub_label
                break
        labels.append(label)
    return labels
