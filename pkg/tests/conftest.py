import numpy as np
import pytest

from apnwb.gf2n import get_field


@pytest.fixture(scope="session")
def F4():
    return get_field(4)


@pytest.fixture(scope="session")
def F6():
    return get_field(6)


@pytest.fixture(scope="session")
def F10():
    return get_field(10)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def noncubes(F):
    return [F(int(x)) for x in F.nonzero_elements() if not F.is_cube(x)]


def cubes(F):
    return [F(int(x)) for x in F.nonzero_elements() if F.is_cube(x)]


def outside_half(F):
    return [F(int(x)) for x in F.elements() if not F.in_subfield(x, F.m)]


# -- acceptance summary ----------------------------------------------------------

@pytest.fixture
def record(request):
    """record(k, part, ok, detail) stores one result line for criterion k."""
    store = request.config.__dict__.setdefault("_acceptance", {})

    def rec(k, part, ok, detail=""):
        store.setdefault(k, []).append((part, bool(ok), detail))
        return bool(ok)
    return rec


def pytest_terminal_summary(terminalreporter, config):
    store = config.__dict__.get("_acceptance")
    if not store:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in range(1, 12):
        parts = store.get(k)
        if not parts:
            tr.write_line(f"criterion {k:2d}: NOT RUN")
            continue
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{p[0]}: {'pass' if p[1] else 'FAIL'}"
                           + (f" ({p[2]})" if p[2] else "") for p in parts)
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
