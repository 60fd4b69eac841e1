"""Reader/writer for the PubTator standoff format, plus corpus statistics.

The format is line-oriented, UTF-8, LF endings:

    PMID|t|Title text
    PMID|a|Abstract text
    PMID<TAB>start<TAB>end<TAB>surface<TAB>type[<TAB>concept_id[<TAB>...]]
    PMID<TAB>label<TAB>concept_a<TAB>concept_b[<TAB>...]

Documents are separated by blank lines. Annotation lines whose second field
parses as an integer are mentions; the rest are relations (robust to optional
trailing fields on both kinds).
"""

from __future__ import annotations

import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .model import (
    CoreEntityType,
    Document,
    Mention,
    RelationAnnotation,
    concept_types,
    map_entity_type,
)


class PubTatorParseError(ValueError):
    """Malformed PubTator input; carries the 1-based line number."""

    def __init__(self, lineno: int, reason: str, line: str = ""):
        self.lineno = lineno
        self.reason = reason
        self.line = line
        shown = f": {line!r}" if line else ""
        super().__init__(f"line {lineno}: {reason}{shown}")


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of documents with unique ids."""

    documents: tuple[Document, ...] = ()
    source_name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "documents", tuple(self.documents))

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def doc_ids(self) -> tuple[str, ...]:
        return tuple(d.doc_id for d in self.documents)

    def get(self, doc_id: str) -> Document | None:
        for d in self.documents:
            if d.doc_id == doc_id:
                return d
        return None


def _iter_lines(source: str | IO[str] | Iterable[str]) -> Iterator[str]:
    if isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        yield line.rstrip("\r\n")


def _is_int(s: str) -> bool:
    try:
        int(s)
        return True
    except ValueError:
        return False


def parse_pubtator(
    source: str | IO[str] | Iterable[str],
    source_name: str = "",
    type_map: dict[str, CoreEntityType | None] | None = None,
) -> Corpus:
    """Parse PubTator text into a Corpus; raises PubTatorParseError on bad lines."""
    docs: list[Document] = []
    seen_ids: set[str] = set()

    pmid: str | None = None
    title: str | None = None
    abstract: str | None = None
    mentions: list[Mention] = []
    relations: list[RelationAnnotation] = []
    lineno = 0

    def flush(at_line: int) -> None:
        nonlocal pmid, title, abstract, mentions, relations
        if pmid is None:
            return
        if title is None:
            raise PubTatorParseError(at_line, f"document {pmid} has no title line")
        if pmid in seen_ids:
            raise PubTatorParseError(at_line, f"duplicate document id {pmid}")
        seen_ids.add(pmid)
        docs.append(
            Document(
                doc_id=pmid,
                title=title,
                abstract=abstract if abstract is not None else "",
                mentions=tuple(mentions),
                relations=tuple(relations),
            )
        )
        pmid, title, abstract = None, None, None
        mentions, relations = [], []

    for lineno, line in enumerate(_iter_lines(source), start=1):
        if not line.strip():
            flush(lineno)
            continue

        if "\t" not in line and "|" in line:
            parts = line.split("|", 2)
            if len(parts) != 3 or parts[1] not in ("t", "a"):
                raise PubTatorParseError(lineno, "unrecognized passage line", line)
            line_pmid, tag, text = parts
            if not line_pmid:
                raise PubTatorParseError(lineno, "empty PMID", line)
            if pmid is None:
                pmid = line_pmid
            elif line_pmid != pmid:
                raise PubTatorParseError(
                    lineno, f"PMID {line_pmid} does not match block PMID {pmid}", line
                )
            if tag == "t":
                if title is not None:
                    raise PubTatorParseError(lineno, "duplicate title line", line)
                title = text
            else:
                if abstract is not None:
                    raise PubTatorParseError(lineno, "duplicate abstract line", line)
                abstract = text
            continue

        if "\t" in line:
            fields = line.split("\t")
            if pmid is None:
                raise PubTatorParseError(lineno, "annotation line outside a document", line)
            if fields[0] != pmid:
                raise PubTatorParseError(
                    lineno, f"PMID {fields[0]} does not match block PMID {pmid}", line
                )
            if len(fields) < 4:
                raise PubTatorParseError(lineno, "wrong field count", line)
            if _is_int(fields[1]):
                # Mention: PMID start end surface type [concept_field [extras...]]
                if len(fields) < 5:
                    raise PubTatorParseError(lineno, "wrong field count for mention", line)
                if not _is_int(fields[2]):
                    raise PubTatorParseError(lineno, "non-integer offsets", line)
                mentions.append(
                    Mention.of(
                        start=int(fields[1]),
                        end=int(fields[2]),
                        surface=fields[3],
                        raw_type=fields[4],
                        concept_field=fields[5] if len(fields) > 5 else None,
                        extras=tuple(fields[6:]),
                        type_map=type_map,
                    )
                )
            else:
                # Relation: PMID label concept_a concept_b [extras...]
                relations.append(
                    RelationAnnotation(
                        concept_a=fields[2],
                        concept_b=fields[3],
                        raw_label=fields[1],
                        extras=tuple(fields[4:]),
                    )
                )
            continue

        raise PubTatorParseError(lineno, "unrecognized line", line)

    flush(lineno + 1)
    return Corpus(documents=tuple(docs), source_name=source_name)


def serialize_document(doc: Document) -> str:
    """Render one document block, without a trailing blank line."""
    lines = [f"{doc.doc_id}|t|{doc.title}", f"{doc.doc_id}|a|{doc.abstract}"]
    for m in doc.mentions:
        fields = [doc.doc_id, str(m.start), str(m.end), m.surface, m.raw_type]
        if m.concept_field is not None:
            fields.append(m.concept_field)
        fields.extend(m.extras)
        lines.append("\t".join(fields))
    for r in doc.relations:
        fields = [doc.doc_id, r.raw_label, r.concept_a, r.concept_b]
        fields.extend(r.extras)
        lines.append("\t".join(fields))
    return "\n".join(lines)


def serialize_pubtator(corpus: Corpus) -> str:
    """Canonical serialization: one blank line between documents, newline at EOF."""
    if not corpus.documents:
        return ""
    return "\n\n".join(serialize_document(d) for d in corpus.documents) + "\n"


def read_pubtator(
    path: str | Path,
    type_map: dict[str, CoreEntityType | None] | None = None,
) -> Corpus:
    p = Path(path)
    with p.open(encoding="utf-8") as fh:
        return parse_pubtator(fh, source_name=p.stem, type_map=type_map)


def write_pubtator(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(serialize_pubtator(corpus), encoding="utf-8")


# --- corpus statistics -----------------------------------------------------

# Canonical pair-category order, as used when reporting relation counts.
PAIR_CODES = ("G-D", "G-G", "G-C", "D-V", "C-D", "C-V", "C-C")

_LETTER = {
    CoreEntityType.GENE: "G",
    CoreEntityType.DISEASE: "D",
    CoreEntityType.VARIANT: "V",
    CoreEntityType.CHEMICAL: "C",
}

_PAIR_BY_TYPES: dict[frozenset, str] = {
    frozenset({CoreEntityType.GENE, CoreEntityType.DISEASE}): "G-D",
    frozenset({CoreEntityType.GENE}): "G-G",
    frozenset({CoreEntityType.GENE, CoreEntityType.CHEMICAL}): "G-C",
    frozenset({CoreEntityType.DISEASE, CoreEntityType.VARIANT}): "D-V",
    frozenset({CoreEntityType.CHEMICAL, CoreEntityType.DISEASE}): "C-D",
    frozenset({CoreEntityType.CHEMICAL, CoreEntityType.VARIANT}): "C-V",
    frozenset({CoreEntityType.CHEMICAL}): "C-C",
}


def pair_code(a: CoreEntityType | None, b: CoreEntityType | None) -> str:
    """Canonical entity-pair category, or "other" for unlisted combinations."""
    if a is None or b is None:
        return "other"
    return _PAIR_BY_TYPES.get(frozenset({a, b}), "other")


@dataclass
class TypeCount:
    total: int = 0
    unique: int = 0


@dataclass
class SplitStats:
    abstracts: int = 0
    mentions: dict[CoreEntityType, TypeCount] = field(default_factory=dict)
    relations: int = 0
    pair_label_counts: Counter = field(default_factory=Counter)

    def mention_count(self, t: CoreEntityType) -> TypeCount:
        return self.mentions.get(t, TypeCount())


@dataclass
class StatsTable:
    """Per-split counts plus a union split named "total" when multi-split."""

    splits: dict[str, SplitStats]

    def to_rows(self) -> list[tuple[str, str, str, str, int]]:
        """Flatten to (split, metric, entity_or_pair, label, value) rows."""
        rows: list[tuple[str, str, str, str, int]] = []
        for name, s in self.splits.items():
            rows.append((name, "abstracts", "", "", s.abstracts))
            for t in CoreEntityType:
                c = s.mention_count(t)
                rows.append((name, "mentions", t.value, "", c.total))
                rows.append((name, "unique_mentions", t.value, "", c.unique))
            rows.append((name, "relations", "", "", s.relations))
            for (pair, label), n in sorted(s.pair_label_counts.items()):
                rows.append((name, "relation_types", pair, label, n))
        return rows

    def to_csv(self) -> str:
        out = ["split,metric,entity_or_pair,label,value"]
        for row in self.to_rows():
            out.append(",".join(_csv_cell(c) for c in row))
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        records = [
            {
                "split": split,
                "metric": metric,
                "entity_or_pair": entity,
                "label": label,
                "value": value,
            }
            for split, metric, entity, label, value in self.to_rows()
        ]
        return json.dumps(records, indent=2) + "\n"

    def to_markdown(self) -> str:
        lines = ["| Split | Abstracts | " + " | ".join(t.value for t in CoreEntityType) + " | Relations |"]
        lines.append("|" + "---|" * (len(CoreEntityType) + 3))
        for name, s in self.splits.items():
            cells = [name, str(s.abstracts)]
            for t in CoreEntityType:
                c = s.mention_count(t)
                cells.append(f"{c.total} ({c.unique})")
            cells.append(str(s.relations))
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
        pair_labels = sorted({label for s in self.splits.values() for (_, label) in s.pair_label_counts})
        if pair_labels:
            lines.append("| Split | Relation type | " + " | ".join(PAIR_CODES) + " | other |")
            lines.append("|" + "---|" * (len(PAIR_CODES) + 3))
            codes = PAIR_CODES + ("other",)
            for name, s in self.splits.items():
                for label in pair_labels:
                    cells = [name, label]
                    cells += [str(s.pair_label_counts.get((code, label), 0)) for code in codes]
                    lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    s = str(value)
    if any(ch in s for ch in ",\"\n"):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _split_stats(docs: Iterable[Document], case_sensitive: bool = True) -> SplitStats:
    stats = SplitStats()
    surfaces: dict[CoreEntityType, set[str]] = {t: set() for t in CoreEntityType}
    totals: Counter = Counter()
    for doc in docs:
        stats.abstracts += 1
        types = concept_types(doc)
        for m in doc.mentions:
            if m.core_type is None:
                continue
            totals[m.core_type] += 1
            surfaces[m.core_type].add(m.surface if case_sensitive else m.surface.casefold())
        for rel in doc.relations:
            stats.relations += 1
            code = pair_code(types.get(rel.concept_a), types.get(rel.concept_b))
            stats.pair_label_counts[(code, rel.raw_label)] += 1
    stats.mentions = {t: TypeCount(totals[t], len(surfaces[t])) for t in CoreEntityType}
    return stats


def corpus_stats(
    corpora: dict[str, Corpus] | list[tuple[str, Corpus]],
    case_sensitive: bool = True,
    with_total: bool | None = None,
) -> StatsTable:
    """Count abstracts, mentions (total and unique surfaces), and relations.

    Unique-mention counting uses the exact surface string per core type;
    ``case_sensitive=False`` switches to case-folded surfaces. With more than
    one split (or ``with_total=True``) a "total" split over the union of all
    documents is appended; its unique counts are computed over the union, not
    summed.
    """
    items = list(corpora.items()) if isinstance(corpora, dict) else list(corpora)
    table = StatsTable(splits={})
    for name, corpus in items:
        table.splits[name] = _split_stats(corpus.documents, case_sensitive)
    if with_total is None:
        with_total = len(items) > 1
    if with_total:
        union = [doc for _, corpus in items for doc in corpus.documents]
        table.splits["total"] = _split_stats(union, case_sensitive)
    return table
