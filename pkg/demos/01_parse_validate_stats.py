"""Parse a PubTator file, validate every document, and print corpus statistics.

Run from the repository root: python3 demos/01_parse_validate_stats.py
"""

from pathlib import Path

from biolit import corpus_stats, read_pubtator, validate_document

FIXTURES = Path(__file__).parent.parent / "tests" / "data" / "canonical"

corpus = read_pubtator(FIXTURES / "biored_mini.pubtator")
print(f"parsed {len(corpus)} documents from biored_mini.pubtator")

for doc in corpus:
    report = validate_document(doc)
    status = "ok" if report.ok else "ERRORS"
    print(f"  {doc.doc_id}: {status}, {len(report.warnings)} warnings")

# The same checks on the prompt-figure transcription surface the offset
# inconsistencies that live in the published excerpt.
figure = read_pubtator(FIXTURES / "figure1.pubtator")
for doc in figure:
    report = validate_document(doc)
    for warning in report.warnings:
        print(f"  {doc.doc_id}: {warning}")

print()
print(corpus_stats([("mini", corpus)]).to_markdown())
