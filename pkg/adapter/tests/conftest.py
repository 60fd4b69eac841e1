import json
import subprocess
from pathlib import Path

import pytest

from biolit_adapter.pubtator_lite import read

DATA = Path(__file__).parent / "data"
FIVE_DOCS = DATA / "five_docs.pubtator"


@pytest.fixture
def five_docs_path() -> Path:
    return FIVE_DOCS


@pytest.fixture
def five_docs():
    return read(FIVE_DOCS)


def score_ner(gold_path, pred_path, mode="strict") -> dict:
    """Score predictions through the toolkit CLI and return the JSON report."""
    proc = subprocess.run(
        ["biolit", "score-ner", "--gold", str(gold_path), "--pred", str(pred_path),
         "--mode", mode, "--format", "json"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def validate(path) -> subprocess.CompletedProcess:
    return subprocess.run(
        ["biolit", "validate", "--in", str(path)], capture_output=True, text=True
    )
