import re

import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print the FAIL side of the acceptance PASS/FAIL lines."""
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or not report.failed:
        return
    match = re.match(r"test_criterion_(\d+)", item.name)
    if match and item.module.__name__ == "test_acceptance":
        number = int(match.group(1))
        print(f"\nACCEPTANCE FAIL {number}: see the assertion below")
