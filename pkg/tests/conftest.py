import numpy as np
import pytest

from radf import _kernels_numba, _kernels_numpy
from radf.series import Month, Series

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("RADF_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "cvcache"))


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    return {"numba": _kernels_numba, "numpy": _kernels_numpy}[request.param]


@pytest.fixture
def rw60():
    rng = np.random.default_rng(2024)
    return Series(Month(2007, 12), np.cumsum(rng.standard_normal(60)), "rw")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
