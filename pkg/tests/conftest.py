import importlib
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_BACKENDS = ["countyscore._purepy", "countyscore._speedups"]


def _available():
    out = []
    for name in _BACKENDS:
        try:
            out.append(importlib.import_module(name))
        except ImportError:
            continue
    return out


KERNEL_MODULES = _available()


@pytest.fixture(params=KERNEL_MODULES, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernels(request):
    return request.param


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    results = item.config._criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if rep.when == "call" or rep.failed:
        results["ran"] = True
        if rep.failed:
            results["ok"] = False
        elif rep.skipped and rep.when == "call":
            results["skipped"] = True


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria):
        c = criteria[number]
        if not c["ran"]:
            status = "SKIP"
        elif not c["ok"]:
            status = "FAIL"
        elif c.get("skipped"):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"[{status}] criterion {number}: {c['title']}")
