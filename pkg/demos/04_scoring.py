"""Score perturbed predictions with strict and relaxed NER metrics, then RE.

Run from the repository root: python3 demos/04_scoring.py
"""

from pathlib import Path

from biolit import (
    Document,
    MatchMode,
    Mention,
    corpus_to_relation_keys,
    read_pubtator,
    score_ner,
    score_re,
)
from biolit.evaluate import report_to_csv
from biolit.pubtator import Corpus

FIXTURES = Path(__file__).parent.parent / "tests" / "data" / "canonical"

gold = read_pubtator(FIXTURES / "biored_mini.pubtator")

# Perturb the gold annotations: clip every second mention by one character
# (boundary error) and drop every fifth.
pred_docs = []
for doc in gold:
    kept = []
    for i, m in enumerate(doc.mentions):
        if i % 5 == 4:
            continue
        if i % 2 == 1 and m.end - m.start > 2:
            m = Mention(m.start, m.end - 1, m.surface[:-1], m.raw_type,
                        m.concept_field, m.extras, m.core_type)
        kept.append(m)
    pred_docs.append(Document(doc.doc_id, doc.title, doc.abstract, tuple(kept)))
pred = Corpus(tuple(pred_docs))

for mode in MatchMode:
    report = score_ner(gold, pred, mode)
    overall = report.categories["overall"]
    print(f"{mode.value:8s} P={overall.precision:.3f} R={overall.recall:.3f} "
          f"F1={overall.f1:.3f}")

# Relaxed scoring forgives the one-character boundary clips, so it can only
# improve on strict scoring for the same predictions.

print()
print("document-level relation scoring against itself:")
print(report_to_csv(score_re(gold, corpus_to_relation_keys(gold))))
