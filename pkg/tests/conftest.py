import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from symassur.io import fixture_names, load_fixture  # noqa: E402

ISOSTATIC = ["c3_desargues", "c4_chain", "c6_subgroups", "c3_axis_space", "cs_two_pins", "grab_bucket"]


@pytest.fixture
def c3():
    return load_fixture("c3_desargues")


@pytest.fixture(params=ISOSTATIC)
def isostatic_fixture(request):
    return load_fixture(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, seconds, limit, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  "
                                    f"({seconds:.2f} s, limit {limit:g} s)  {detail}")
