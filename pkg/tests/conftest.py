import functools

import pytest

from k3lines.families import make_named


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", help="run the slow brute-force tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for it in items:
        if "slow" in it.keywords:
            it.add_marker(skip)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long brute-force runs, opt in with --slow")


@functools.lru_cache(maxsize=None)
def named(name, **params):
    return make_named(name, params)[0]
