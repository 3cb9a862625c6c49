"""The fourteen acceptance criteria, one test each.

Every criterion prints a single ``PASS``/``FAIL`` line (visible in ``pytest -v``
output and when the file is run as a script).
"""

import sys

import pytest

from fliess.acceptance import CRITERIA, run

SEED = 0


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda k: f"criterion_{k:02d}")
def test_criterion(number, capsys):
    ok, line = run(number, SEED)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run(k, SEED) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
