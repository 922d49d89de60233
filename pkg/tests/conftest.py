import os

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--extended",
        action="store_true",
        default=False,
        help="run the long n=7 checks (minutes of CPU)",
    )


@pytest.fixture
def extended_tier(request):
    if request.config.getoption("--extended") or os.environ.get("DELTA2N_EXTENDED"):
        return True
    pytest.skip("extended tier: enable with --extended or DELTA2N_EXTENDED=1")
