"""Turn predicted relations into findings and check them against a reference.

A reference table is a curated list of entity-pair statements, each tied to a
source publication (P = journal paper, A = conference abstract). Matching is
name-based: case-fold, trim, synonym substitution, and decomposition of
"X + Y" composite entities on the reference side. A finding only supports
rows from the same source kind (and the same source id, when both carry one).
"""

from __future__ import annotations

import csv
import enum
import json
import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from .model import Document
from .preprocess import CoreRelationLabel, normalize_relation_label
from .pubtator import Corpus
from .evaluate import RelationKey


class SourceKind(enum.Enum):
    PAPER = "P"
    ABSTRACT = "A"

    def __str__(self) -> str:
        return self.value


class ReferenceLoadError(ValueError):
    """Malformed reference or synonyms CSV; carries a row number."""


_WS = re.compile(r"\s+")
COMPOSITE_SEP = " + "


def _normalize(s: str) -> str:
    return _WS.sub(" ", s.strip()).casefold()


def canon(s: str, synonyms: dict[str, str] | None = None) -> str:
    """Canonical form for entity-name comparison: fold, trim, map synonyms.

    Synonym values are already canonical (resolved at load time), so the
    function is idempotent.
    """
    key = _normalize(s)
    if synonyms:
        return synonyms.get(key, key)
    return key


@dataclass(frozen=True, eq=False)
class Finding:
    """One entity-pair statement attributed to a source document."""

    entity_a: str
    entity_b: str
    source_kind: SourceKind
    source_id: str = ""
    label: CoreRelationLabel = CoreRelationLabel.ASSOCIATION
    entity_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.entity_a or not self.entity_b:
            raise ValueError("finding entity names must be non-empty")

    def name_pair(self, synonyms: dict[str, str] | None = None) -> frozenset[str]:
        return frozenset((canon(self.entity_a, synonyms), canon(self.entity_b, synonyms)))

    def _key(self) -> tuple:
        return (self.name_pair(), self.source_kind, self.source_id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Finding):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


@dataclass(frozen=True)
class ReferenceRow:
    index: int
    entity_a: str
    entity_b: str
    source_kind: SourceKind
    source_id: str = ""

    @property
    def finding_text(self) -> str:
        return f"{self.entity_a} and {self.entity_b}"


@dataclass
class ReferenceTable:
    rows: list[ReferenceRow]
    synonyms: dict[str, str] = field(default_factory=dict)


def _split_finding(text: str, rownum: int) -> tuple[str, str]:
    """Split a finding string into its entity pair.

    The rightmost " and " separates the pair; a finding with no " and " but
    with " + " is a combination therapy, split the same way.
    """
    for sep in (" and ", COMPOSITE_SEP):
        idx = text.rfind(sep)
        if idx > 0:
            a, b = text[:idx].strip(), text[idx + len(sep) :].strip()
            if a and b:
                return a, b
    raise ReferenceLoadError(f"row {rownum}: cannot split finding {text!r} into a pair")


def load_synonyms(stream: IO[str]) -> dict[str, str]:
    """Load alias -> canonical rows, resolving chains so lookup is idempotent."""
    raw: dict[str, str] = {}
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        return {}
    for rownum, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise ReferenceLoadError(f"row {rownum}: synonyms need alias,canonical")
        raw[_normalize(row[0])] = _normalize(row[1])
    resolved: dict[str, str] = {}
    for alias, target in raw.items():
        seen = {alias}
        while target in raw and raw[target] != target:
            if raw[target] in seen:
                raise ReferenceLoadError(f"synonym cycle involving {alias!r}")
            seen.add(target)
            target = raw[target]
        resolved[alias] = target
    return resolved


def load_reference_table(
    table: IO[str], synonyms: IO[str] | None = None
) -> ReferenceTable:
    """Load the reference CSV (index, finding, source_kind[, source_id])."""
    reader = csv.DictReader(table)
    required = {"index", "finding", "source_kind"}
    fields = set(reader.fieldnames or ())
    if not required <= fields:
        raise ReferenceLoadError(
            f"reference CSV is missing columns: {sorted(required - fields)}"
        )
    rows: list[ReferenceRow] = []
    seen_idx: set[int] = set()
    for rownum, record in enumerate(reader, start=2):
        finding = (record["finding"] or "").strip()
        if not finding:
            raise ReferenceLoadError(f"row {rownum}: empty finding")
        try:
            index = int(record["index"])
        except (TypeError, ValueError):
            raise ReferenceLoadError(f"row {rownum}: bad index {record['index']!r}")
        if index in seen_idx:
            raise ReferenceLoadError(f"row {rownum}: duplicate index {index}")
        seen_idx.add(index)
        kind_text = (record["source_kind"] or "").strip().upper()
        try:
            kind = SourceKind(kind_text)
        except ValueError:
            raise ReferenceLoadError(f"row {rownum}: bad source_kind {kind_text!r}")
        a, b = _split_finding(finding, rownum)
        rows.append(
            ReferenceRow(
                index=index,
                entity_a=a,
                entity_b=b,
                source_kind=kind,
                source_id=(record.get("source_id") or "").strip(),
            )
        )
    if [r.index for r in rows] != list(range(1, len(rows) + 1)):
        raise ReferenceLoadError("reference indices must be contiguous from 1")
    synonym_map = load_synonyms(synonyms) if synonyms is not None else {}
    return ReferenceTable(rows=rows, synonyms=synonym_map)


def _entity_covered(ref_entity: str, finding_names: frozenset[str], synonyms: dict[str, str]) -> bool:
    """A reference entity matches verbatim, or componentwise when composite."""
    if canon(ref_entity, synonyms) in finding_names:
        return True
    if COMPOSITE_SEP in ref_entity:
        parts = ref_entity.split(COMPOSITE_SEP)
        return all(canon(p, synonyms) in finding_names for p in parts)
    return False


def _row_matches(row: ReferenceRow, finding: Finding, synonyms: dict[str, str]) -> bool:
    if row.source_kind is not finding.source_kind:
        return False
    if row.source_id and finding.source_id and row.source_id != finding.source_id:
        return False
    names = finding.name_pair(synonyms)
    ra = canon(row.entity_a, synonyms)
    rb = canon(row.entity_b, synonyms)
    if frozenset((ra, rb)) == names:
        return True
    return _entity_covered(row.entity_a, names, synonyms) and _entity_covered(
        row.entity_b, names, synonyms
    )


@dataclass
class RowResult:
    row: ReferenceRow
    matched: bool
    finding: Finding | None = None


@dataclass
class CoverageReport:
    rows: list[RowResult]

    @property
    def matched_count(self) -> int:
        return sum(1 for r in self.rows if r.matched)

    @property
    def total(self) -> int:
        return len(self.rows)

    @property
    def coverage(self) -> float:
        return self.matched_count / self.total if self.total else 0.0

    def to_markdown(self) -> str:
        lines = [
            "| # | Finding | Source | Matched | By |",
            "|---|---|---|---|---|",
        ]
        for r in self.rows:
            mark = "✓" if r.matched else ""
            by = ""
            if r.finding is not None:
                by = f"{r.finding.entity_a} / {r.finding.entity_b}"
            lines.append(
                f"| {r.row.index} | {r.row.finding_text} | {r.row.source_kind} "
                f"| {mark} | {by} |"
            )
        lines.append("")
        lines.append(
            f"Matched {self.matched_count} of {self.total} "
            f"(coverage {self.coverage:.4f})"
        )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "rows": [
                {
                    "index": r.row.index,
                    "finding": r.row.finding_text,
                    "source_kind": r.row.source_kind.value,
                    "source_id": r.row.source_id,
                    "matched": r.matched,
                    "matched_by": (
                        [r.finding.entity_a, r.finding.entity_b] if r.finding else None
                    ),
                }
                for r in self.rows
            ],
            "matched": self.matched_count,
            "total": self.total,
            "coverage": self.coverage,
        }
        return json.dumps(payload, indent=2) + "\n"


def match_findings(reference: ReferenceTable, findings: Iterable[Finding]) -> CoverageReport:
    """Mark each reference row matched by the first finding that covers it.

    Rows are independent evidence statements, so one finding may match any
    number of rows.
    """
    findings = list(findings)
    results: list[RowResult] = []
    for row in reference.rows:
        hit: Finding | None = None
        for f in findings:
            if _row_matches(row, f, reference.synonyms):
                hit = f
                break
        results.append(RowResult(row=row, matched=hit is not None, finding=hit))
    return CoverageReport(rows=results)


# --- findings construction ----------------------------------------------------


def _display_name(doc: Document, concept_id: str, name_map: dict[str, str]) -> str:
    if concept_id in name_map:
        return name_map[concept_id]
    best = ""
    for m in doc.mentions:
        if concept_id in m.concept_ids and len(m.surface) > len(best):
            best = m.surface
    return best or concept_id


def aggregate_findings(
    corpora: Iterable[Corpus],
    name_map: dict[str, str] | None = None,
    source_kind: SourceKind = SourceKind.PAPER,
    source_kinds: dict[str, SourceKind] | None = None,
) -> list[Finding]:
    """One finding per predicted document-level relation, deduplicated.

    Names resolve through ``name_map`` and fall back to the longest mention
    surface for the concept in that document. ``source_kinds`` overrides the
    kind per document id.
    """
    name_map = name_map or {}
    source_kinds = source_kinds or {}
    out: list[Finding] = []
    seen: set[Finding] = set()
    for corpus in corpora:
        for doc in corpus.documents:
            kind = source_kinds.get(doc.doc_id, source_kind)
            for rel in doc.relations:
                finding = Finding(
                    entity_a=_display_name(doc, rel.concept_a, name_map),
                    entity_b=_display_name(doc, rel.concept_b, name_map),
                    source_kind=kind,
                    source_id=doc.doc_id,
                    label=normalize_relation_label(rel.raw_label),
                    entity_ids=(rel.concept_a, rel.concept_b),
                )
                if finding not in seen:
                    seen.add(finding)
                    out.append(finding)
    return out


def findings_from_keys(
    keys: Iterable[RelationKey],
    name_map: dict[str, str] | None = None,
    source_kind: SourceKind = SourceKind.PAPER,
    source_kinds: dict[str, SourceKind] | None = None,
) -> list[Finding]:
    """Findings from bare relation keys; names resolve via name_map or the id."""
    name_map = name_map or {}
    source_kinds = source_kinds or {}
    out: list[Finding] = []
    seen: set[Finding] = set()
    for k in keys:
        finding = Finding(
            entity_a=name_map.get(k.concept_a, k.concept_a),
            entity_b=name_map.get(k.concept_b, k.concept_b),
            source_kind=source_kinds.get(k.doc_id, source_kind),
            source_id=k.doc_id,
            label=k.label,
            entity_ids=(k.concept_a, k.concept_b),
        )
        if finding not in seen:
            seen.add(finding)
            out.append(finding)
    return out


def load_findings(stream: IO[str]) -> list[Finding]:
    """Findings CSV: entity_a, entity_b, source_kind[, source_id, label]."""
    reader = csv.DictReader(stream)
    required = {"entity_a", "entity_b", "source_kind"}
    fields = set(reader.fieldnames or ())
    if not required <= fields:
        raise ReferenceLoadError(
            f"findings CSV is missing columns: {sorted(required - fields)}"
        )
    out: list[Finding] = []
    for rownum, record in enumerate(reader, start=2):
        try:
            kind = SourceKind((record["source_kind"] or "").strip().upper())
        except ValueError:
            raise ReferenceLoadError(
                f"row {rownum}: bad source_kind {record['source_kind']!r}"
            )
        label = normalize_relation_label(record.get("label") or "Association")
        out.append(
            Finding(
                entity_a=(record["entity_a"] or "").strip(),
                entity_b=(record["entity_b"] or "").strip(),
                source_kind=kind,
                source_id=(record.get("source_id") or "").strip(),
                label=label,
            )
        )
    return out
