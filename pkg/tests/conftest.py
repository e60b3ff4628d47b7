import io

import pytest

from bridgescript import Interpreter
from bridgescript.demo import build_demo_registry


@pytest.fixture
def out():
    return io.StringIO()


@pytest.fixture
def interp(out):
    """Fresh interpreter over the demo registry, printing into `out`."""
    return Interpreter(build_demo_registry(), out=out)


@pytest.fixture
def bare_interp(out):
    """Interpreter with no registry attached: core builtins only."""
    return Interpreter(out=out)
