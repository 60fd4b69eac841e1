"""Check model findings against the curated PIK3CA E545K reference table.

Run from the repository root: python3 demos/05_findings_synthesis.py
"""

from pathlib import Path

from biolit import load_findings, load_reference_table, match_findings

DATA = Path(__file__).parent.parent / "src" / "biolit" / "data"

with open(DATA / "oncokb_pik3ca_e545k_reference.csv", encoding="utf-8") as fh:
    reference = load_reference_table(fh)

for name in ("bb_findings.csv", "pt_findings.csv"):
    with open(DATA / name, encoding="utf-8") as fh:
        findings = load_findings(fh)
    report = match_findings(reference, findings)
    print(f"{name}: {report.matched_count}/{report.total} rows matched "
          f"(coverage {report.coverage:.3f})")

with open(DATA / "bb_findings.csv", encoding="utf-8") as fh:
    print()
    print(match_findings(reference, load_findings(fh)).to_markdown())
