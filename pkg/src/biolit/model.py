"""Core data model: annotated documents, span validation, entity-type mapping.

Offsets follow the PubTator convention: every mention indexes the document's
full text, which is ``title + " " + abstract``, counted in Unicode code
points.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field


class CoreEntityType(enum.Enum):
    """The four entity types kept for downstream processing."""

    GENE = "Gene"
    VARIANT = "Variant"
    DISEASE = "Disease"
    CHEMICAL = "Chemical"

    def __str__(self) -> str:
        return self.value


# Raw annotation label -> core type. ``None`` marks labels that are known but
# deliberately excluded (species, cell lines). Unknown labels are also
# excluded, with a validation warning.
DEFAULT_TYPE_MAP: dict[str, CoreEntityType | None] = {
    "GeneOrGeneProduct": CoreEntityType.GENE,
    "DiseaseOrPhenotypicFeature": CoreEntityType.DISEASE,
    "SequenceVariant": CoreEntityType.VARIANT,
    "ChemicalEntity": CoreEntityType.CHEMICAL,
    "OrganismTaxon": None,
    "CellLine": None,
}

# Canonical raw label to emit when only the core type is known (e.g. when
# reconstructing mentions from tag sequences).
RAW_LABEL_FOR_TYPE: dict[CoreEntityType, str] = {
    CoreEntityType.GENE: "GeneOrGeneProduct",
    CoreEntityType.DISEASE: "DiseaseOrPhenotypicFeature",
    CoreEntityType.VARIANT: "SequenceVariant",
    CoreEntityType.CHEMICAL: "ChemicalEntity",
}

_ID_SEP = re.compile(r"[,;]")


def map_entity_type(
    raw_type: str, mapping: dict[str, CoreEntityType | None] | None = None
) -> CoreEntityType | None:
    """Map a raw annotation label to a core type, or None when filtered.

    Total and deterministic: any label absent from the mapping is filtered.
    """
    table = DEFAULT_TYPE_MAP if mapping is None else mapping
    return table.get(raw_type)


@dataclass(frozen=True)
class Mention:
    """A typed text span with character offsets into the document full text.

    ``concept_field`` holds the identifier column verbatim as read from a
    file (None when the line carried no identifier column at all), so that
    serialization can round-trip byte-identically. ``concept_ids`` exposes
    the parsed identifiers.
    """

    start: int
    end: int
    surface: str
    raw_type: str
    concept_field: str | None = None
    extras: tuple[str, ...] = ()
    core_type: CoreEntityType | None = None

    @property
    def concept_ids(self) -> tuple[str, ...]:
        if self.concept_field is None:
            return ()
        parts = _ID_SEP.split(self.concept_field)
        return tuple(p.strip() for p in parts if p.strip() and p.strip() != "-")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @classmethod
    def of(
        cls,
        start: int,
        end: int,
        surface: str,
        raw_type: str,
        concept_field: str | None = None,
        extras: tuple[str, ...] = (),
        type_map: dict[str, CoreEntityType | None] | None = None,
    ) -> "Mention":
        """Construct a mention with ``core_type`` derived from ``raw_type``."""
        return cls(
            start=start,
            end=end,
            surface=surface,
            raw_type=raw_type,
            concept_field=concept_field,
            extras=tuple(extras),
            core_type=map_entity_type(raw_type, type_map),
        )


@dataclass(frozen=True, eq=False)
class RelationAnnotation:
    """A document-level typed link between two concept identifiers.

    The concept pair is unordered: annotations that differ only in argument
    order compare (and hash) equal. ``extras`` keeps trailing fields, such as
    a novelty flag, verbatim.
    """

    concept_a: str
    concept_b: str
    raw_label: str
    extras: tuple[str, ...] = ()

    @property
    def pair(self) -> tuple[str, str]:
        """The concept pair in a canonical (sorted) order."""
        a, b = self.concept_a, self.concept_b
        return (a, b) if a <= b else (b, a)

    def _key(self) -> tuple:
        return (self.pair, self.raw_label, self.extras)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelationAnnotation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


@dataclass(frozen=True)
class Document:
    """One PubMed record: title, abstract, mentions, and relations.

    Mentions are stored sorted by (start, end); construction normalizes the
    order. Documents are immutable after construction.
    """

    doc_id: str
    title: str
    abstract: str
    mentions: tuple[Mention, ...] = ()
    relations: tuple[RelationAnnotation, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.mentions, key=lambda m: (m.start, m.end)))
        object.__setattr__(self, "mentions", ordered)
        object.__setattr__(self, "relations", tuple(self.relations))

    @property
    def full_text(self) -> str:
        return full_text(self)

    def core_mentions(self) -> tuple[Mention, ...]:
        return tuple(m for m in self.mentions if m.core_type is not None)


def full_text(doc: Document) -> str:
    """Title + single space + abstract; all mention offsets index this."""
    return doc.title + " " + doc.abstract


def concept_types(doc: Document) -> dict[str, CoreEntityType]:
    """Core type per concept id, by majority over the id's mentions.

    Ties break alphabetically on the type name, so the result is
    deterministic even for inconsistently typed ids.
    """
    votes: dict[str, Counter] = {}
    for m in doc.mentions:
        if m.core_type is None:
            continue
        for cid in m.concept_ids:
            votes.setdefault(cid, Counter())[m.core_type] += 1
    out: dict[str, CoreEntityType] = {}
    for cid, counter in votes.items():
        best = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0].value))
        out[cid] = best[0][0]
    return out


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    context: str | None = None

    def __str__(self) -> str:
        if self.context:
            return f"{self.code}: {self.message} ({self.context})"
        return f"{self.code}: {self.message}"


@dataclass
class ValidationReport:
    """Problems found in a document; empty errors means it passes."""

    doc_id: str
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, context: str | None = None) -> None:
        self.errors.append(ValidationIssue(code, message, context))

    def warn(self, code: str, message: str, context: str | None = None) -> None:
        self.warnings.append(ValidationIssue(code, message, context))


def validate_document(
    doc: Document,
    strict: bool = False,
    type_map: dict[str, CoreEntityType | None] | None = None,
) -> ValidationReport:
    """Check span bounds, surface agreement, duplicates, and dangling relations.

    Problems are reported, never raised. ``strict`` promotes surface-mismatch
    warnings to errors; everything else keeps its severity.
    """
    report = ValidationReport(doc.doc_id)
    table = DEFAULT_TYPE_MAP if type_map is None else type_map

    if not doc.doc_id:
        report.error("empty-id", "document id is empty")
    elif not doc.doc_id.isdigit():
        report.warn("nondigit-id", f"document id {doc.doc_id!r} is not all digits")
    if not doc.title:
        report.warn("empty-title", "document has no title text")
    if not doc.abstract:
        report.warn("empty-abstract", "document has no abstract text")

    text = full_text(doc)
    seen_spans: set[tuple[int, int, str]] = set()
    known_ids: set[str] = set()
    for m in doc.mentions:
        where = f"mention {m.start}..{m.end}"
        if m.start < 0 or m.start >= m.end or m.end > len(text):
            report.error("span-out-of-bounds", "span out of bounds", where)
        elif text[m.start : m.end] != m.surface:
            msg = (
                f"surface {m.surface!r} does not match text "
                f"{text[m.start:m.end]!r}"
            )
            if strict:
                report.error("surface-mismatch", msg, where)
            else:
                report.warn("surface-mismatch", msg, where)
        key = (m.start, m.end, m.raw_type)
        if key in seen_spans:
            report.warn("duplicate-mention", "duplicate mention", where)
        seen_spans.add(key)
        if m.raw_type not in table:
            report.warn("unknown-type", f"unknown raw type {m.raw_type!r}", where)
        known_ids.update(m.concept_ids)

    seen_relations: set[RelationAnnotation] = set()
    for i, rel in enumerate(doc.relations):
        where = f"relation {i}: {rel.concept_a} - {rel.concept_b}"
        if not rel.raw_label:
            report.error("empty-label", "relation label is empty", where)
        else:
            try:
                int(rel.raw_label)
            except ValueError:
                pass
            else:
                # An all-digit label would serialize into a line that parses
                # back as a mention.
                report.error(
                    "ambiguous-label",
                    f"relation label {rel.raw_label!r} is indistinguishable "
                    f"from a mention offset",
                    where,
                )
        for cid in (rel.concept_a, rel.concept_b):
            if cid not in known_ids:
                report.warn(
                    "dangling-relation",
                    f"relation references concept {cid!r} with no mention",
                    where,
                )
        if rel in seen_relations:
            report.warn("duplicate-relation", "duplicate relation", where)
        seen_relations.add(rel)

    return report
