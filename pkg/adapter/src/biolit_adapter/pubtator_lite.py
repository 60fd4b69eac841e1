"""Minimal PubTator reader/writer for the adapter.

The adapter talks to the scoring toolkit over files, so it carries its own
small implementation of the wire format: pipe-delimited title/abstract lines,
tab-delimited annotation lines, blank line between documents, offsets into
``title + " " + abstract``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class Mention:
    start: int
    end: int
    surface: str
    raw_type: str
    concept_id: str | None = None


@dataclass
class Document:
    doc_id: str
    title: str
    abstract: str
    mentions: list[Mention] = field(default_factory=list)

    @property
    def text(self) -> str:
        return self.title + " " + self.abstract


def parse(text: str) -> list[Document]:
    docs: list[Document] = []
    current: Document | None = None
    for line in text.splitlines():
        if not line.strip():
            if current is not None:
                docs.append(current)
                current = None
            continue
        if "\t" not in line and "|" in line:
            pmid, tag, body = line.split("|", 2)
            if tag == "t":
                current = Document(pmid, body, "")
            elif tag == "a" and current is not None:
                current.abstract = body
            continue
        fields = line.split("\t")
        if current is None or len(fields) < 5:
            continue
        try:
            start, end = int(fields[1]), int(fields[2])
        except ValueError:
            continue  # relation line; the adapter only handles mentions
        current.mentions.append(
            Mention(start, end, fields[3], fields[4],
                    fields[5] if len(fields) > 5 else None)
        )
    if current is not None:
        docs.append(current)
    return docs


def read(path: str | Path) -> list[Document]:
    return parse(Path(path).read_text(encoding="utf-8"))


def serialize(docs: list[Document]) -> str:
    blocks = []
    for doc in docs:
        lines = [f"{doc.doc_id}|t|{doc.title}", f"{doc.doc_id}|a|{doc.abstract}"]
        for m in sorted(doc.mentions, key=lambda m: (m.start, m.end)):
            row = [doc.doc_id, str(m.start), str(m.end), m.surface, m.raw_type]
            if m.concept_id is not None:
                row.append(m.concept_id)
            lines.append("\t".join(row))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def write(docs: list[Document], path: str | Path) -> None:
    Path(path).write_text(serialize(docs), encoding="utf-8")
