"""Emit token/tag sequences for sequence labeling and decode them back.

Run from the repository root: python3 demos/02_bio_sequences.py
"""

from pathlib import Path

from biolit import decode_bio, emit_bio, read_pubtator, tokenize

FIXTURES = Path(__file__).parent.parent / "tests" / "data" / "canonical"

doc = read_pubtator(FIXTURES / "itd.pubtator").documents[0]
text = doc.full_text

# Whitespace tokenization keeps "(ITD)" as one token; the abbreviation is a
# separate Disease mention, so it opens a fresh B- tag.
seq = emit_bio(doc)
for token, tag in list(zip(seq.tokens, seq.tags))[:8]:
    print(f"{token.surface:12s} {tag}")

print()
print("decoded mentions:")
for m in decode_bio(seq, text=text):
    print(f"  {m.start:3d}..{m.end:<3d} {m.core_type}: {m.surface!r}")

print()
print("punctuation-splitting mode peels brackets into their own tokens:")
print([t.surface for t in tokenize("(ITD)", split_punct=True)])
