"""Run the acceptance criteria and print one PASS/FAIL line per criterion."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    code = pytest.main(["-q", "--no-header", "-p", "no:cacheprovider", str(ROOT / "tests" / "test_acceptance.py")])
    sys.exit(int(code))
