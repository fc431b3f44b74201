import pytest

from app.schemas import ShapingParams
from app.shaping import build_context


@pytest.fixture
def make_ctx():
    def _make(h: int, N: int, K: int, class_budget=None):
        return build_context(ShapingParams(h=h, N=N, K=K), class_budget)
    return _make
