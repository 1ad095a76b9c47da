import numpy as np
import pytest

from topodist import _backend

ACCEPTANCE = {}


@pytest.fixture(params=sorted(_backend.backends()))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    module = _backend.backends()[request.param]
    for name in ("kruskal_merges", "reduce_triangles", "reduce_coboundary"):
        monkeypatch.setattr(_backend, name, getattr(module, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
