"""
The ten acceptance criteria at full scale, one test each.

Each test prints a PASS/FAIL line (shown even under output capture) and
fails with the criterion's measured details when it does not hold.
"""
from __future__ import annotations

import json

import pytest

from graphcode.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{c.number}" for c in CRITERIA])
def test_criterion(criterion, capsys):
    result = criterion("full", 0)
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, json.dumps(result.details, default=str)[:4000]
