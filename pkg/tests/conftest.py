import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cycinv import linalg


def _compiled_available():
    try:
        from cycinv import _kernels  # noqa: F401
        return True
    except ImportError:
        return False


KERNELS = ["python"] + (["compiled"] if _compiled_available() else [])


@pytest.fixture(params=KERNELS)
def kernel(request):
    """Run the test once per available elimination kernel."""
    old = linalg.KERNEL
    linalg.use_kernel(request.param)
    yield request.param
    linalg.use_kernel(old)
