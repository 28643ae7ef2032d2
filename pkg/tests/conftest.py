from pathlib import Path
import shutil

import pytest

from special_monoid import SpecialPresentation

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir(tmp_path):
    """A scratch copy of the fixture directory, so caches never land in the repo."""
    dst = tmp_path / "data"
    shutil.copytree(DATA, dst)
    return dst


BICYCLIC = SpecialPresentation.of("bc", "bc")
CYCLIC3 = SpecialPresentation.of("a", "aaa")
FREE1 = SpecialPresentation.of("ab", "ab", "ba")
EX1 = SpecialPresentation.of("abc", "aabbacc", "abacab")
EX2 = SpecialPresentation.of("abc", "aaabccc", "aabccabcaabcc")
ABC_B2 = SpecialPresentation.of("abc", "abc", "bb")


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
