import functools

import pytest

from chainmorph.enumerate import build_monoid, enumerate_class

ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def members(tag, n):
    return tuple(enumerate_class(tag, n))


@functools.lru_cache(maxsize=None)
def table(tag, n):
    return build_monoid(tag, n)


@pytest.fixture
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
