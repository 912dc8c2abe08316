import pytest
from hypothesis import settings

from clusterlens.evaluator import CacheStore

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def store(tmp_path_factory):
    """One on-disk invariant cache shared by the whole run."""
    return CacheStore(tmp_path_factory.mktemp("invariants"))
