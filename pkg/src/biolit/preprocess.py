"""Model-ready inputs: sentences, tokens, BIO sequences, RE instances, prompts.

Everything here is a pure function of an immutable document, so documents can
be processed in parallel. The only randomness is negative-instance
downsampling, which is seeded per document from (seed, doc_id).
"""

from __future__ import annotations

import enum
import json
import random
import re
import string
import warnings
from bisect import bisect_right
from dataclasses import dataclass

from .model import (
    CoreEntityType,
    Document,
    Mention,
    RAW_LABEL_FOR_TYPE,
    full_text,
)


class TaggingWarning(UserWarning):
    """Lossy but recoverable situations in BIO emission/decoding."""


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class SentenceSpan:
    index: int
    start: int
    end: int


_WS_RUN = re.compile(r"\S+")
_PUNCT = set(string.punctuation)

# Sentence boundary: terminal punctuation run followed by whitespace; the
# uppercase-or-digit requirement on the next character is checked in code.
_BOUNDARY = re.compile(r"[.?!]+(?=\s)")

DEFAULT_ABBREVIATIONS = (
    "e.g.",
    "i.e.",
    "et al.",
    "ca.",
    "cf.",
    "vs.",
    "etc.",
    "Fig.",
    "Figs.",
    "fig.",
    "Ref.",
    "No.",
    "approx.",
)


def tokenize(text: str, split_punct: bool = False) -> list[Token]:
    """Split text into tokens whose offsets index the original string.

    Default mode keeps maximal runs of non-whitespace together (whitespace
    tokenization). ``split_punct`` additionally peels leading and trailing
    punctuation characters off each run into single-character tokens.
    """
    tokens: list[Token] = []
    for match in _WS_RUN.finditer(text):
        start, end = match.span()
        if not split_punct:
            tokens.append(Token(text[start:end], start, end))
            continue
        lo, hi = start, end
        while lo < hi and text[lo] in _PUNCT:
            tokens.append(Token(text[lo], lo, lo + 1))
            lo += 1
        trailing: list[Token] = []
        while hi > lo and text[hi - 1] in _PUNCT:
            trailing.append(Token(text[hi - 1], hi - 1, hi))
            hi -= 1
        if lo < hi:
            tokens.append(Token(text[lo:hi], lo, hi))
        tokens.extend(reversed(trailing))
    return tokens


def _guarded(text: str, punct_end: int, abbreviations: tuple[str, ...]) -> bool:
    head = text[:punct_end]
    for abbr in abbreviations:
        if not head.endswith(abbr):
            continue
        before = len(head) - len(abbr)
        if before == 0 or head[before - 1].isspace() or head[before - 1] in "([":
            return True
    return False


def segment_sentences(
    text: str,
    title_end: int | None = None,
    abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS,
) -> list[SentenceSpan]:
    """Split text into sentence spans covering all non-whitespace characters.

    Boundaries are terminal punctuation ([.?!]) followed by whitespace and an
    uppercase letter or digit, unless the text ends in a guarded abbreviation.
    When ``title_end`` is given the region [0, title_end) is emitted as
    sentence 0 unsplit, matching the title/abstract layout of the full text.
    """
    spans: list[tuple[int, int]] = []
    offset = 0
    if title_end is not None and title_end > 0:
        spans.append((0, title_end))
        offset = title_end

    boundaries = [offset]
    for match in _BOUNDARY.finditer(text, offset):
        nxt = text[match.end() :].lstrip()
        if not nxt or not (nxt[0].isupper() or nxt[0].isdigit()):
            continue
        if _guarded(text, match.end(), abbreviations):
            continue
        boundaries.append(match.end())
    boundaries.append(len(text))

    for lo, hi in zip(boundaries, boundaries[1:]):
        chunk = text[lo:hi]
        lead = len(chunk) - len(chunk.lstrip())
        start = lo + lead
        end = lo + len(chunk.rstrip())
        if start < end:
            spans.append((start, end))

    return [SentenceSpan(i, s, e) for i, (s, e) in enumerate(spans)]


def segment_document(
    doc: Document, abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS
) -> list[SentenceSpan]:
    """Sentence spans over the document full text, title as sentence 0."""
    return segment_sentences(full_text(doc), title_end=len(doc.title), abbreviations=abbreviations)


# --- BIO tagging -------------------------------------------------------------


@dataclass(frozen=True)
class BioSequence:
    doc_id: str
    tokens: tuple[Token, ...]
    tags: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.tags):
            raise ValueError("tokens and tags must have equal length")


def emit_bio(doc: Document, split_punct: bool = False) -> BioSequence:
    """Tag document tokens with B-/I-/O labels from its core-type mentions.

    A token overlapping a mention takes that mention's type; the first
    overlapping token gets B-, later ones I-. When two mentions contest a
    token, the earliest-starting (then longest) mention wins and the loser is
    dropped entirely, with a warning: BIO cannot express nesting.
    """
    text = full_text(doc)
    tokens = tokenize(text, split_punct=split_punct)
    tags = ["O"] * len(tokens)
    claimed = [False] * len(tokens)

    candidates = sorted(
        (m for m in doc.mentions if m.core_type is not None),
        key=lambda m: (m.start, -(m.end - m.start)),
    )
    for m in candidates:
        idx = [
            i
            for i, t in enumerate(tokens)
            if t.start < m.end and m.start < t.end
        ]
        if not idx:
            warnings.warn(
                f"{doc.doc_id}: mention {m.start}..{m.end} covers no token; dropped",
                TaggingWarning,
            )
            continue
        if any(claimed[i] for i in idx):
            warnings.warn(
                f"{doc.doc_id}: mention {m.start}..{m.end} overlaps an already "
                f"tagged mention; dropped",
                TaggingWarning,
            )
            continue
        for n, i in enumerate(idx):
            claimed[i] = True
            prefix = "B" if n == 0 else "I"
            tags[i] = f"{prefix}-{m.core_type.value}"

    return BioSequence(doc_id=doc.doc_id, tokens=tuple(tokens), tags=tuple(tags))


_TYPE_BY_NAME = {t.value: t for t in CoreEntityType}


def decode_bio(seq: BioSequence, text: str | None = None) -> list[Mention]:
    """Reconstruct mentions from a tag sequence.

    An I- tag that does not continue a run of its own type is repaired to B-
    with a warning. Surfaces come from ``text`` when given, otherwise from the
    token surfaces joined with single spaces.
    """
    mentions: list[Mention] = []
    run_tokens: list[Token] = []
    run_type: CoreEntityType | None = None

    def close_run() -> None:
        nonlocal run_tokens, run_type
        if run_type is None:
            return
        start, end = run_tokens[0].start, run_tokens[-1].end
        surface = text[start:end] if text is not None else " ".join(t.surface for t in run_tokens)
        mentions.append(
            Mention(
                start=start,
                end=end,
                surface=surface,
                raw_type=RAW_LABEL_FOR_TYPE[run_type],
                core_type=run_type,
            )
        )
        run_tokens, run_type = [], None

    for pos, (token, tag) in enumerate(zip(seq.tokens, seq.tags)):
        if tag == "O":
            close_run()
            continue
        if len(tag) < 3 or tag[0] not in "BI" or tag[1] != "-":
            raise ValueError(f"malformed tag {tag!r} at position {pos}")
        tag_type = _TYPE_BY_NAME.get(tag[2:])
        if tag_type is None:
            raise ValueError(f"unknown entity type in tag {tag!r} at position {pos}")
        if tag[0] == "I" and tag_type is not run_type:
            warnings.warn(
                f"{seq.doc_id}: orphan {tag} at position {pos} repaired to B-{tag[2:]}",
                TaggingWarning,
            )
            close_run()
            run_type = tag_type
            run_tokens = [token]
            continue
        if tag[0] == "B":
            close_run()
            run_type = tag_type
            run_tokens = [token]
        else:
            run_tokens.append(token)
    close_run()
    return mentions


def bio_to_record(seq: BioSequence) -> dict:
    """JSON-serializable record for one document's BIO sequence."""
    return {
        "doc_id": seq.doc_id,
        "tokens": [{"text": t.surface, "start": t.start, "end": t.end} for t in seq.tokens],
        "tags": list(seq.tags),
    }


# --- relation labels ---------------------------------------------------------


class CoreRelationLabel(enum.Enum):
    ASSOCIATION = "Association"
    NEGATIVE_CORRELATION = "Negative_Correlation"
    POSITIVE_CORRELATION = "Positive_Correlation"

    def __str__(self) -> str:
        return self.value


_LABEL_KEY = re.compile(r"[\s_-]+")


def normalize_relation_label(raw_label: str) -> CoreRelationLabel:
    """Collapse any annotated relation label onto the three retained ones.

    Negative/positive correlation map to themselves (ignoring case, spaces,
    underscores, hyphens); every other label, including ones absent from the
    annotation guidelines, becomes Association.
    """
    key = _LABEL_KEY.sub("", raw_label).casefold()
    if key == "negativecorrelation":
        return CoreRelationLabel.NEGATIVE_CORRELATION
    if key == "positivecorrelation":
        return CoreRelationLabel.POSITIVE_CORRELATION
    return CoreRelationLabel.ASSOCIATION


# --- relation-extraction instances -------------------------------------------


@dataclass(frozen=True)
class ReInstance:
    """A marker-decorated text window for one candidate concept pair."""

    doc_id: str
    concept_a: str
    concept_b: str
    type_a: CoreEntityType
    type_b: CoreEntityType
    window_text: str
    label: CoreRelationLabel | None
    sent_lo: int
    sent_hi: int

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "e1_id": self.concept_a,
            "e2_id": self.concept_b,
            "e1_type": self.type_a.value,
            "e2_type": self.type_b.value,
            "text": self.window_text,
            "label": self.label.value if self.label else None,
            "sent_lo": self.sent_lo,
            "sent_hi": self.sent_hi,
        }


def _sentence_of(sentences: list[SentenceSpan], offset: int) -> int:
    starts = [s.start for s in sentences]
    i = bisect_right(starts, offset) - 1
    return max(i, 0)


def _mark_window(text: str, lo: int, m1: Mention, m2: Mention) -> str:
    """Insert <e1>/<e2> markers around two non-overlapping mentions."""
    s1, e1 = m1.start - lo, m1.end - lo
    s2, e2 = m2.start - lo, m2.end - lo
    return (
        text[:s1]
        + "<e1> "
        + text[s1:e1]
        + " </e1>"
        + text[e1:s2]
        + "<e2> "
        + text[s2:e2]
        + " </e2>"
        + text[e2:]
    )


def generate_re_instances(
    doc: Document,
    window: int = 1,
    context: int = 1,
    negative_ratio: float | None = None,
    seed: int = 42,
    sentences: list[SentenceSpan] | None = None,
) -> list[ReInstance]:
    """Candidate relation instances for mention pairs within a sentence window.

    For every unordered pair of core-type mentions with distinct concept ids
    at sentence distance <= ``window``, one instance is emitted per concept
    pair per mention pair, with sentences [min-context .. max+context] as the
    window text and <e1>/<e2> markers around the mentions in document order.
    The label is the normalized gold label when a document-level relation
    joins the two ids, else None. Overlapping mention pairs are skipped
    (markers cannot nest). ``negative_ratio`` keeps that fraction of the
    None-labelled instances, sampled with an RNG seeded from (seed, doc_id).
    """
    if sentences is None:
        sentences = segment_document(doc)
    text = full_text(doc)

    gold: dict[tuple[str, str], CoreRelationLabel] = {}
    for rel in doc.relations:
        gold.setdefault(rel.pair, normalize_relation_label(rel.raw_label))

    eligible = [m for m in doc.core_mentions() if m.concept_ids]
    sent_of = {id(m): _sentence_of(sentences, m.start) for m in eligible}

    out: list[ReInstance] = []
    seen: set[tuple[tuple[str, str], tuple[int, int], tuple[int, int]]] = set()
    for i, m1 in enumerate(eligible):
        for m2 in eligible[i + 1 :]:
            if m2.start < m1.end:
                continue
            s1, s2 = sent_of[id(m1)], sent_of[id(m2)]
            if abs(s1 - s2) > window:
                continue
            lo_sent = max(0, min(s1, s2) - context)
            hi_sent = min(len(sentences) - 1, max(s1, s2) + context)
            window_lo = sentences[lo_sent].start
            window_hi = sentences[hi_sent].end
            base = text[window_lo:window_hi]
            for ca in m1.concept_ids:
                for cb in m2.concept_ids:
                    if ca == cb:
                        continue
                    pair = (ca, cb) if ca <= cb else (cb, ca)
                    key = (pair, m1.span, m2.span)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(
                        ReInstance(
                            doc_id=doc.doc_id,
                            concept_a=ca,
                            concept_b=cb,
                            type_a=m1.core_type,
                            type_b=m2.core_type,
                            window_text=_mark_window(base, window_lo, m1, m2),
                            label=gold.get(pair),
                            sent_lo=lo_sent,
                            sent_hi=hi_sent,
                        )
                    )

    if negative_ratio is not None and negative_ratio < 1.0:
        negatives = [inst for inst in out if inst.label is None]
        keep = round(max(0.0, negative_ratio) * len(negatives))
        rng = random.Random(f"{seed}\x1f{doc.doc_id}")
        kept = set(rng.sample(range(len(negatives)), keep))
        neg_index = 0
        filtered = []
        for inst in out:
            if inst.label is None:
                if neg_index in kept:
                    filtered.append(inst)
                neg_index += 1
            else:
                filtered.append(inst)
        out = filtered
    return out


@dataclass
class ReachabilityReport:
    """How many gold relations have at least one in-window mention pair."""

    reachable: int
    total: int
    unreachable: list[tuple[str, tuple[str, str]]]

    @property
    def fraction(self) -> float:
        return self.reachable / self.total if self.total else 0.0


def window_reachability(docs, window: int = 1, context: int = 1) -> ReachabilityReport:
    """Fraction of gold relations that yield >= 1 positive instance at this window."""
    reachable = 0
    total = 0
    unreachable: list[tuple[str, tuple[str, str]]] = []
    for doc in docs:
        pairs = {rel.pair for rel in doc.relations}
        total += len(pairs)
        instances = generate_re_instances(doc, window=window, context=context)
        positive = {
            (inst.concept_a, inst.concept_b) if inst.concept_a <= inst.concept_b
            else (inst.concept_b, inst.concept_a)
            for inst in instances
            if inst.label is not None
        }
        for pair in sorted(pairs):
            if pair in positive:
                reachable += 1
            else:
                unreachable.append((doc.doc_id, pair))
    return ReachabilityReport(reachable=reachable, total=total, unreachable=unreachable)


def instances_to_jsonl(instances: list[ReInstance]) -> str:
    return "".join(json.dumps(inst.to_record()) + "\n" for inst in instances)


# --- few-shot prompts ---------------------------------------------------------

INSTRUCTION_HEADER = "Instruction"
INSTRUCTION_BODY = (
    "Each of the following examples include the title, abstract, and "
    "annotations for PubMed records."
)
QUESTION_HEADER = "Question"
QUESTION_BODY = (
    "Process the title and abstract of the new PubMed record and return the "
    "annotations in new lines."
)

EXAMPLE_COUNT = 5
MAX_QUERIES = 5


class PromptError(ValueError):
    """An example document does not satisfy the prompt preconditions."""


@dataclass(frozen=True)
class PromptBundle:
    instruction_examples: tuple[str, ...]
    question_docs: tuple[str, ...]
    rendered: str


def _example_block(doc: Document) -> str:
    lines = [f"{doc.doc_id}|t|{doc.title}", f"{doc.doc_id}|a|{doc.abstract}"]
    for m in doc.core_mentions():
        lines.append(
            "\t".join([doc.doc_id, str(m.start), str(m.end), m.surface, m.raw_type])
        )
    return "\n".join(lines)


def build_fewshot_prompt(
    examples: list[Document], queries: list[Document]
) -> PromptBundle:
    """Render an annotation prompt: 5 annotated examples plus 1-5 query records.

    Every example must contain at least one mention of each core entity type;
    annotation lines carry offsets and types but no concept ids, mirroring the
    shape the model is asked to produce.
    """
    if len(examples) != EXAMPLE_COUNT:
        raise PromptError(f"need exactly {EXAMPLE_COUNT} examples, got {len(examples)}")
    if not 1 <= len(queries) <= MAX_QUERIES:
        raise PromptError(f"need 1..{MAX_QUERIES} query documents, got {len(queries)}")
    for i, doc in enumerate(examples, start=1):
        present = {m.core_type for m in doc.core_mentions()}
        for t in CoreEntityType:
            if t not in present:
                raise PromptError(f"example {i} lacks {t.value}")

    example_blocks = tuple(_example_block(d) for d in examples)
    question_blocks = tuple(
        f"{d.doc_id}|t|{d.title}\n{d.doc_id}|a|{d.abstract}" for d in queries
    )
    parts = [INSTRUCTION_HEADER, INSTRUCTION_BODY, ""]
    for block in example_blocks:
        parts.extend([block, ""])
    parts.extend([QUESTION_HEADER, QUESTION_BODY])
    parts.extend(question_blocks)
    rendered = "\n".join(parts) + "\n"
    return PromptBundle(
        instruction_examples=example_blocks,
        question_docs=question_blocks,
        rendered=rendered,
    )
