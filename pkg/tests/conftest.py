import numpy as np
import pytest

from quadnet import Window2D, render_equi_m, self_drive, simple_dual, feedback
from quadnet.render import EQUI_M_EXTENT


@pytest.fixture(scope="session")
def equi_m_600():
    """Cached 600x600 equi-M renders of the standard scenes (several tests
    and most acceptance criteria share these)."""
    cache = {}

    def get(kind: str, *params):
        key = (kind, params)
        if key not in cache:
            builders = {"simple-dual": simple_dual, "self-drive": self_drive,
                        "feedback": feedback}
            window = Window2D(*EQUI_M_EXTENT, nx=600, ny=600)
            cache[key] = render_equi_m(builders[kind](*params), window,
                                       budget=100, radius=10.0, threads=1)
        return cache[key]

    return get


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULT_LINES
    except ImportError:
        return
    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULT_LINES):
            terminalreporter.write_line(line)
