import shutil
from pathlib import Path

import pytest

from rar.arrayset import Arrayset

REPO = Path(__file__).resolve().parents[1]
CORPUS = REPO / "corpus"
GOLDEN = REPO / "golden"
SHIM = REPO / "rac_shim"


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def cxx() -> str:
    """Absolute path of a C++ compiler, or skip tests that need one."""
    for candidate in ("c++", "g++", "clang++"):
        found = shutil.which(candidate)
        if found:
            return found
    pytest.skip("no C++ compiler on PATH")


@pytest.fixture
def s0() -> Arrayset:
    """The worked-example state: capacity 5, contents {33, 22}, used chain
    1 -> 0 -> terminator, free chain 2 -> 3 -> 4 -> terminator."""
    return Arrayset(
        anext=(5, 0, 3, 4, 5),
        avals=(22, 33, 0, 0, 0),
        free_head=2,
        used_head=1,
    )
