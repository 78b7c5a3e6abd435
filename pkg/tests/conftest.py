import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from onebit_cdg import kernels  # noqa: E402


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    monkeypatch.setattr(kernels, "_impl", kernels.get_backend(request.param))
    return request.param
