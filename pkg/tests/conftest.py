import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_runtest_logreport(report):
    # the acceptance gate reads as a checklist: one line per criterion
    if "test_acceptance" not in report.nodeid or report.when != "call":
        return
    name = report.nodeid.split("::", 1)[1]
    verdict = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {verdict}: {name}", flush=True)
