"""Shared builders for test documents and corpora."""

from __future__ import annotations

import random

from biolit import Document, Mention, RelationAnnotation
from biolit.model import CoreEntityType, RAW_LABEL_FOR_TYPE
from biolit.preprocess import tokenize
from biolit.pubtator import Corpus


def locate(text: str, needle: str, occurrence: int = 1) -> tuple[int, int]:
    """Span of the nth occurrence of needle; raises if absent."""
    pos = -1
    for _ in range(occurrence):
        pos = text.index(needle, pos + 1)
    return pos, pos + len(needle)


def make_mention(
    text: str,
    needle: str,
    raw_type: str,
    concept: str | None = None,
    occurrence: int = 1,
    extras: tuple[str, ...] = (),
) -> Mention:
    start, end = locate(text, needle, occurrence)
    return Mention.of(start, end, needle, raw_type, concept, extras)


def make_doc(
    doc_id: str,
    title: str,
    abstract: str = "",
    mentions: list[tuple] = (),
    relations: list[RelationAnnotation] = (),
) -> Document:
    """Build a document; each mention spec is (needle, raw_type[, concept[, occurrence]])."""
    text = title + " " + abstract
    built = tuple(make_mention(text, *spec) for spec in mentions)
    return Document(doc_id, title, abstract, built, tuple(relations))


WORDS = "alpha beta gamma delta epsilon zeta eta theta iota kappa".split()


def random_scored_pair(rng: random.Random, max_mentions: int = 10, doc_id: str = "1"):
    """A random (gold doc, pred doc) pair over the same text, for scorer fuzzing."""
    n_words = rng.randint(8, 40)
    words = [rng.choice(WORDS) for _ in range(n_words)]
    split = max(3, n_words // 4)
    title = " ".join(words[:split])
    abstract = " ".join(words[split:])
    text = title + " " + abstract
    tokens = tokenize(text)

    def random_span():
        i = rng.randrange(len(tokens))
        j = min(len(tokens) - 1, i + rng.randint(0, 2))
        start, end = tokens[i].start, tokens[j].end
        if rng.random() < 0.3:
            start = max(0, start + rng.randint(-2, 2))
            end = min(len(text), max(start + 1, end + rng.randint(-2, 2)))
        return start, end

    def mentions(k):
        out = []
        for _ in range(k):
            s, e = random_span()
            t = rng.choice(list(CoreEntityType))
            out.append(Mention.of(s, e, text[s:e], RAW_LABEL_FOR_TYPE[t], "X1"))
        return out

    gold = Document(doc_id, title, abstract, tuple(mentions(rng.randint(0, max_mentions))))
    pred = Document(doc_id, title, abstract, tuple(mentions(rng.randint(0, max_mentions))))
    return gold, pred


def random_mini_corpus(rng: random.Random, max_docs: int = 5, max_mentions: int = 10):
    """A random (gold corpus, pred corpus) pair sharing doc ids and texts."""
    n_docs = rng.randint(1, max_docs)
    gold_docs, pred_docs = [], []
    for d in range(n_docs):
        gold, pred = random_scored_pair(rng, max_mentions, doc_id=str(1000 + d))
        gold_docs.append(gold)
        pred_docs.append(pred)
    return Corpus(tuple(gold_docs), "gold"), Corpus(tuple(pred_docs), "pred")


def optimal_match_count(gold, pred, text) -> int:
    """Maximum bipartite matching size on the same-type token-overlap graph.

    Independent oracle for the shipped greedy matcher: augmenting-path search
    over every gold mention, exact for these sizes.
    """
    tokens = tokenize(text)

    def tokset(m):
        return frozenset(
            i for i, t in enumerate(tokens) if t.start < m.end and m.start < t.end
        )

    gtok = [tokset(g) for g in gold]
    ptok = [tokset(p) for p in pred]
    adj = [
        [
            j
            for j, p in enumerate(pred)
            if p.core_type is g.core_type and gtok[i] & ptok[j]
        ]
        for i, g in enumerate(gold)
    ]
    match_of_pred: dict[int, int] = {}

    def augment(i, visited):
        for j in adj[i]:
            if j in visited:
                continue
            visited.add(j)
            if j not in match_of_pred or augment(match_of_pred[j], visited):
                match_of_pred[j] = i
                return True
        return False

    return sum(augment(i, set()) for i in range(len(gold)))
