"""Generate marker-decorated relation instances and check window reachability.

Run from the repository root: python3 demos/03_relation_instances.py
"""

from pathlib import Path

from biolit import generate_re_instances, read_pubtator, window_reachability

FIXTURES = Path(__file__).parent.parent / "tests" / "data" / "canonical"

doc = read_pubtator(FIXTURES / "crocin.pubtator").documents[0]
for inst in generate_re_instances(doc):
    pair = f"{inst.concept_a} - {inst.concept_b}"
    label = inst.label.value if inst.label else "None"
    print(f"{pair:22s} [{label}] sentences {inst.sent_lo}..{inst.sent_hi}")
    print(f"  {inst.window_text}")

# Candidate pairing is limited to nearby sentences; relations whose concepts
# never co-occur that closely are unreachable at the chosen window.
corpus = read_pubtator(FIXTURES / "biored_mini.pubtator")
for window in (0, 1, 2):
    report = window_reachability(corpus.documents, window=window)
    print(
        f"window={window}: {report.reachable}/{report.total} gold relations "
        f"reachable ({report.fraction:.2f})"
    )
