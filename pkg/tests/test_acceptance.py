"""Acceptance suite: every contract criterion at its pinned tolerance.

Run with ``pytest tests/test_acceptance.py -v`` or through ``nibm verify``;
each criterion prints its own pass/fail line.
"""

import pytest

from nibm.acceptance import _REGISTRY


@pytest.mark.parametrize("name,fn", _REGISTRY, ids=[n for n, _ in _REGISTRY])
def test_criterion(name, fn):
    passed, detail = fn()
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"
