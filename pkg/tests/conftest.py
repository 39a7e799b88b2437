import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from robindrift import DomainSpec, triangulate  # noqa: E402

TEST_DOMAINS = ("disk(1)", "ellipse(2,0.5)", "stadium(2,0.5)")


@pytest.fixture(scope="session")
def mesh_cache():
    cache = {}

    def get(domain: str, h: float):
        key = (domain, h)
        if key not in cache:
            cache[key] = triangulate(DomainSpec.parse(domain), h)
        return cache[key]

    return get
