import pytest

from parrondo_maps import default_profiles


@pytest.fixture(scope="session")
def profiles():
    """Default validated profile pair (a=5, w=1/8, d=1/4)."""
    return default_profiles()
