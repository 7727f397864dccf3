"""Acceptance gate: every numbered criterion at its stated tolerance.

Each test prints one pass/fail line (visible with -s or on failure) and
the suite as a whole mirrors the CLI's `selftest` command.
"""

import pytest

from gaussradon.selftest import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA,
                         ids=[f"{c.number}-{c.name.replace(' ', '-')}" for c in CRITERIA])
def test_acceptance(criterion):
    ok, detail = criterion.run()
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {criterion.number}: {criterion.name}: {detail}")
    assert ok, f"criterion {criterion.number} ({criterion.name}): {detail}"
