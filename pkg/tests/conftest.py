import numpy as np
import pytest

from oblde import use_backend
from oblde._backend import HAVE_NUMBA


class FixedRng:
    """RngStream stand-in that replays scripted values.

    ``uniform`` / ``integers`` / ``gaussian`` pop from their queues; when a
    queue holds a single value it is repeated forever.
    """

    def __init__(self, uniform=(), integers=(), gaussian=()):
        self._u = list(np.ravel(uniform))
        self._i = list(np.ravel(integers))
        self._g = list(np.ravel(gaussian))

    @staticmethod
    def _take(queue, size):
        count = int(np.prod(size)) if size is not None else 1
        if len(queue) == 1:
            vals = [queue[0]] * count
        else:
            vals = [queue.pop(0) for _ in range(count)]
        return np.array(vals).reshape(size) if size is not None else vals[0]

    def uniform(self, size=None):
        return self._take(self._u, size)

    def integers(self, low, high, size=None):
        if size is None and np.ndim(high):
            size = np.shape(high)
        return self._take(self._i, size)

    def gaussian(self, mean=0.0, variance=1.0, size=None):
        return self._take(self._g, size)


@pytest.fixture
def fixed_rng():
    return FixedRng


BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    with use_backend(request.param):
        yield request.param


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get(
        "tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
