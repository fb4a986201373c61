import pytest

from toricdef.scalars import DvrSpec

SPECS = [
    DvrSpec("equal-char-0", 4),
    DvrSpec("equal-char-p", 4, 5),
    DvrSpec("mixed-char", 4, 5),
]


@pytest.fixture(params=SPECS, ids=lambda s: s.kind)
def spec(request):
    return request.param
