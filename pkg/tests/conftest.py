import os
import sys
from collections import OrderedDict

import pytest

from magicpol import bundled_config, build_model, load_bundled

_criteria: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test checks")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            num, title = m.args
            entry = _criteria.setdefault(num, {"title": title, "outcomes": []})
            item.user_properties.append(("criterion", num))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, num in report.user_properties:
        if key == "criterion":
            _criteria[num]["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        entry = _criteria[num]
        outs = entry["outcomes"]
        if not outs:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}  {entry['title']}  ({len(outs)} checks)")


@pytest.fixture(scope="session")
def rb():
    return load_bundled()


@pytest.fixture(scope="session")
def rb_config():
    return bundled_config()


@pytest.fixture(scope="session")
def model_5s(rb, rb_config):
    return build_model(rb.level("5s1/2"), rb, rb_config)


@pytest.fixture(scope="session")
def model_15s(rb, rb_config):
    return build_model(rb.level("15s1/2"), rb, rb_config)
