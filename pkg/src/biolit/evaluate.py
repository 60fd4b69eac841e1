"""Scoring: strict/relaxed NER metrics and document-level RE metrics.

Counting is micro-averaged: tp/fp/fn are pooled over all documents per
category (entity type for NER, entity-pair category for RE), then turned into
precision/recall/F1 once. Zero denominators yield 0 and are listed in the
report metadata.
"""

from __future__ import annotations

import enum
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

from .model import CoreEntityType, Document, Mention, concept_types, full_text
from .preprocess import CoreRelationLabel, ReInstance, normalize_relation_label, tokenize
from .pubtator import Corpus, PAIR_CODES, pair_code


class MatchMode(enum.Enum):
    STRICT = "strict"
    RELAXED = "relaxed"


class ScoringError(ValueError):
    """Inputs violate a scoring precondition (e.g. unknown document ids)."""


def _token_indices(span: tuple[int, int], tokens) -> frozenset[int]:
    start, end = span
    return frozenset(
        i for i, t in enumerate(tokens) if t.start < end and start < t.end
    )


def match_mentions(
    gold: list[Mention],
    pred: list[Mention],
    mode: MatchMode,
    text: str | None = None,
) -> list[tuple[int, int]]:
    """Injective matching between gold and predicted mentions of one document.

    Strict pairs mentions with identical (start, end, core_type). Relaxed
    walks gold in order and pairs each with the first unmatched prediction of
    the same type sharing at least one token; ``text`` is required to compute
    token overlap. Returns (gold_index, pred_index) pairs.
    """
    matches: list[tuple[int, int]] = []
    used = [False] * len(pred)

    if mode is MatchMode.STRICT:
        by_key: dict[tuple, list[int]] = defaultdict(list)
        for j, p in enumerate(pred):
            by_key[(p.start, p.end, p.core_type)].append(j)
        for i, g in enumerate(gold):
            queue = by_key.get((g.start, g.end, g.core_type))
            if queue:
                matches.append((i, queue.pop(0)))
        return matches

    if text is None:
        raise ValueError("relaxed matching needs the document text for token overlap")
    tokens = tokenize(text)
    pred_tokens = [_token_indices(p.span, tokens) for p in pred]
    for i, g in enumerate(gold):
        g_tokens = _token_indices(g.span, tokens)
        for j, p in enumerate(pred):
            if used[j] or p.core_type is not g.core_type:
                continue
            if g_tokens & pred_tokens[j]:
                matches.append((i, j))
                used[j] = True
                break
    return matches


@dataclass(frozen=True)
class CategoryScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass
class MetricReport:
    """Per-category counts and ratios, plus zero-denominator bookkeeping."""

    categories: dict[str, CategoryScore] = field(default_factory=dict)

    @property
    def undefined(self) -> list[str]:
        """Category.metric entries where the denominator was 0 (reported as 0)."""
        out = []
        for name, s in self.categories.items():
            if s.tp + s.fp == 0:
                out.append(f"{name}.precision")
            if s.tp + s.fn == 0:
                out.append(f"{name}.recall")
            if s.precision + s.recall == 0:
                out.append(f"{name}.f1")
        return out


def _fmt(x: float) -> str:
    return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def report_to_csv(report: MetricReport) -> str:
    lines = ["category,tp,fp,fn,precision,recall,f1"]
    for name, s in report.categories.items():
        lines.append(
            f"{name},{s.tp},{s.fp},{s.fn},{_fmt(s.precision)},{_fmt(s.recall)},{_fmt(s.f1)}"
        )
    return "\n".join(lines) + "\n"


def report_to_json(report: MetricReport) -> str:
    payload = {
        "categories": {
            name: {
                "tp": s.tp,
                "fp": s.fp,
                "fn": s.fn,
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
            }
            for name, s in report.categories.items()
        },
        "metadata": {"zero_denominator": report.undefined, "convention": "undefined->0"},
    }
    return json.dumps(payload, indent=2) + "\n"


def report_to_markdown(report: MetricReport) -> str:
    lines = [
        "| Category | TP | FP | FN | Precision | Recall | F1 |",
        "|---|---|---|---|---|---|---|",
    ]
    for name, s in report.categories.items():
        lines.append(
            f"| {name} | {s.tp} | {s.fp} | {s.fn} | {_fmt(s.precision)} "
            f"| {_fmt(s.recall)} | {_fmt(s.f1)} |"
        )
    return "\n".join(lines) + "\n"


def _check_doc_ids(gold: Corpus, pred_ids) -> None:
    unknown = sorted(set(pred_ids) - set(gold.doc_ids()))
    if unknown:
        raise ScoringError(
            "predictions reference document ids absent from gold: " + ", ".join(unknown)
        )


def score_ner(gold: Corpus, pred: Corpus, mode: MatchMode) -> MetricReport:
    """Micro-averaged P/R/F1 per entity type over all gold documents.

    Documents missing from the predictions contribute all their gold mentions
    as false negatives; prediction documents absent from gold are an error.
    """
    _check_doc_ids(gold, pred.doc_ids())
    tp: Counter = Counter()
    fp: Counter = Counter()
    fn: Counter = Counter()

    for gold_doc in gold.documents:
        pred_doc = pred.get(gold_doc.doc_id)
        g = list(gold_doc.core_mentions())
        p = list(pred_doc.core_mentions()) if pred_doc is not None else []
        matches = match_mentions(g, p, mode, text=full_text(gold_doc))
        matched_gold = {i for i, _ in matches}
        matched_pred = {j for _, j in matches}
        for i, m in enumerate(g):
            (tp if i in matched_gold else fn)[m.core_type] += 1
        for j, m in enumerate(p):
            if j not in matched_pred:
                fp[m.core_type] += 1

    report = MetricReport()
    for t in CoreEntityType:
        report.categories[t.value] = CategoryScore(tp[t], fp[t], fn[t])
    report.categories["overall"] = CategoryScore(
        sum(tp.values()), sum(fp.values()), sum(fn.values())
    )
    return report


# --- document-level relations -------------------------------------------------


@dataclass(frozen=True, eq=False)
class RelationKey:
    """Identity of one document-level relation prediction or gold annotation.

    Equality and hashing ignore concept order and the pair_type attribute
    (which only buckets the key for reporting).
    """

    doc_id: str
    concept_a: str
    concept_b: str
    label: CoreRelationLabel
    pair_type: str = "other"

    @property
    def pair(self) -> tuple[str, str]:
        a, b = self.concept_a, self.concept_b
        return (a, b) if a <= b else (b, a)

    def _key(self) -> tuple:
        return (self.doc_id, self.pair, self.label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelationKey):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


def corpus_to_relation_keys(corpus: Corpus) -> list[RelationKey]:
    """Normalized relation keys for every annotated relation in the corpus."""
    keys: list[RelationKey] = []
    for doc in corpus.documents:
        types = concept_types(doc)
        for rel in doc.relations:
            keys.append(
                RelationKey(
                    doc_id=doc.doc_id,
                    concept_a=rel.concept_a,
                    concept_b=rel.concept_b,
                    label=normalize_relation_label(rel.raw_label),
                    pair_type=pair_code(
                        types.get(rel.concept_a), types.get(rel.concept_b)
                    ),
                )
            )
    return keys


@dataclass(frozen=True)
class InstancePrediction:
    instance: ReInstance
    label: CoreRelationLabel | None
    confidence: float = 1.0


def aggregate_instance_predictions(
    predictions: list[InstancePrediction],
) -> list[RelationKey]:
    """Collapse instance-level predictions to one label per (document, pair).

    Majority vote over non-None labels; ties break on higher mean confidence,
    then on the fixed label order Association < Negative < Positive. Pairs
    predicted None everywhere emit nothing.
    """
    grouped: dict[tuple[str, tuple[str, str]], list[InstancePrediction]] = defaultdict(list)
    pair_types: dict[tuple[str, tuple[str, str]], str] = {}
    for p in predictions:
        inst = p.instance
        pair = (
            (inst.concept_a, inst.concept_b)
            if inst.concept_a <= inst.concept_b
            else (inst.concept_b, inst.concept_a)
        )
        key = (inst.doc_id, pair)
        grouped[key].append(p)
        pair_types.setdefault(key, pair_code(inst.type_a, inst.type_b))

    label_order = list(CoreRelationLabel)
    out: list[RelationKey] = []
    for (doc_id, pair), preds in sorted(grouped.items()):
        votes: dict[CoreRelationLabel, list[float]] = defaultdict(list)
        for p in preds:
            if p.label is not None:
                votes[p.label].append(p.confidence)
        if not votes:
            continue
        best = max(
            votes.items(),
            key=lambda kv: (
                len(kv[1]),
                sum(kv[1]) / len(kv[1]),
                -label_order.index(kv[0]),
            ),
        )
        out.append(
            RelationKey(
                doc_id=doc_id,
                concept_a=pair[0],
                concept_b=pair[1],
                label=best[0],
                pair_type=pair_types[(doc_id, pair)],
            )
        )
    return out


def score_re(
    gold: Corpus,
    pred_relations: list[RelationKey],
    label_sensitive: bool = True,
) -> MetricReport:
    """Set comparison of relation keys, micro P/R/F1 per entity-pair category.

    ``label_sensitive=False`` compares (document, pair) only. Matched pairs
    count toward the gold key's pair category; spurious predictions toward
    their own.
    """
    _check_doc_ids(gold, {k.doc_id for k in pred_relations})
    gold_keys = corpus_to_relation_keys(gold)

    def ident(k: RelationKey) -> tuple:
        return (k.doc_id, k.pair, k.label) if label_sensitive else (k.doc_id, k.pair)

    gold_by_id: dict[tuple, RelationKey] = {}
    for k in gold_keys:
        gold_by_id.setdefault(ident(k), k)
    pred_by_id: dict[tuple, RelationKey] = {}
    for k in pred_relations:
        pred_by_id.setdefault(ident(k), k)

    tp: Counter = Counter()
    fp: Counter = Counter()
    fn: Counter = Counter()
    for key_id, g in gold_by_id.items():
        (tp if key_id in pred_by_id else fn)[g.pair_type] += 1
    for key_id, p in pred_by_id.items():
        if key_id not in gold_by_id:
            fp[p.pair_type] += 1

    report = MetricReport()
    for code in PAIR_CODES + ("other",):
        report.categories[code] = CategoryScore(tp[code], fp[code], fn[code])
    report.categories["overall"] = CategoryScore(
        sum(tp.values()), sum(fp.values()), sum(fn.values())
    )
    return report
