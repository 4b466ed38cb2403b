import sys

import pytest
from hypothesis import settings

from braidlie.grading import AbelianGroup, Bicharacter

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def _bank():
    out = []
    for m in range(2, 7):
        out.append((f"C{m}", Bicharacter(AbelianGroup((m,)), m, [[1]])))
    out.append(("C3xC3", Bicharacter(AbelianGroup((3, 3)), 3, [[1, 2], [0, 1]])))
    out.append(("C2xC4", Bicharacter(AbelianGroup((2, 4)), 4, [[2, 2], [0, 1]])))
    return out


GROUP_BANK = _bank()


@pytest.fixture(params=GROUP_BANK, ids=[name for name, _ in GROUP_BANK])
def banked_chi(request):
    return request.param[1]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
