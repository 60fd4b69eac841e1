import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"
PACKAGE_DATA = Path(__file__).parent.parent / "src" / "biolit" / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def canonical_dir() -> Path:
    return DATA / "canonical"


@pytest.fixture
def package_data_dir() -> Path:
    return PACKAGE_DATA


def biored_dir() -> Path | None:
    """Directory with the real corpus splits, when present.

    Looked up from $BIORED_DIR or tests/data/biored/; the three split files
    must be named train.pubtator, dev.pubtator, test.pubtator (the upstream
    Train.PubTator naming is accepted too).
    """
    candidates = []
    if os.environ.get("BIORED_DIR"):
        candidates.append(Path(os.environ["BIORED_DIR"]))
    candidates.append(DATA / "biored")
    for root in candidates:
        if not root.is_dir():
            continue
        if _split_path(root, "train") and _split_path(root, "dev") and _split_path(root, "test"):
            return root
    return None


def _split_path(root: Path, split: str) -> Path | None:
    names = {
        "train": ("train.pubtator", "Train.PubTator", "Train.pubtator"),
        "dev": ("dev.pubtator", "Dev.PubTator", "Dev.pubtator"),
        "test": ("test.pubtator", "Test.PubTator", "Test.pubtator"),
    }[split]
    for name in names:
        p = root / name
        if p.is_file():
            return p
    return None


def biored_split_path(split: str) -> Path | None:
    root = biored_dir()
    return _split_path(root, split) if root else None
