import pytest

from halfline import _rk


@pytest.fixture(scope="session", autouse=True)
def jit_warmup():
    # compile the ODE core once so timed tests measure algorithm cost,
    # not JIT latency (the cache persists across sessions)
    _rk.warmup()
