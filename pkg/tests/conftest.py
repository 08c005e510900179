import pytest

from stringrank import gf
from stringrank.algebra import gelfand_ponomarev, kronecker


@pytest.fixture(scope="session")
def F2():
    return gf.field_make(2)


@pytest.fixture(scope="session")
def F3():
    return gf.field_make(3)


@pytest.fixture(scope="session")
def gp2(F2):
    return gelfand_ponomarev(F2)


@pytest.fixture(scope="session")
def gp3(F3):
    return gelfand_ponomarev(F3)


@pytest.fixture(scope="session")
def kr2(F2):
    return kronecker(F2)


@pytest.fixture(scope="session")
def kr3(F3):
    return kronecker(F3)


ALGEBRAS = [("gp", 2), ("gp", 3), ("kr", 2), ("kr", 3)]


@pytest.fixture(scope="session", params=ALGEBRAS, ids=lambda x: f"{x[0]}{x[1]}")
def alg(request):
    kind, p = request.param
    F = gf.field_make(p)
    return gelfand_ponomarev(F) if kind == "gp" else kronecker(F)


# one verdict line per acceptance criterion, printed in the terminal summary
_VERDICTS: dict = {}
_STARTED: set = set()


@pytest.fixture
def verdict(request):
    """Call ``verdict(n, ok, detail)`` once the criterion has been evaluated."""
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        _STARTED.add(marker.args[0])

    def record(n, ok, detail=""):
        _VERDICTS[n] = (bool(ok), detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")

    return record


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _STARTED and not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_STARTED | set(_VERDICTS)):
        if n in _VERDICTS:
            ok, detail = _VERDICTS[n]
            terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {n:2d}: FAIL  (error before a verdict)")
