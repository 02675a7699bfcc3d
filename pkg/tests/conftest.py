import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    derandomize=True,
    database=None,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

from fastshock import flux, harness, profile as profile_mod  # noqa: E402


@pytest.fixture(scope="session")
def built():
    """Cached (model, classification, profile) triples for builtin examples."""
    cache = {}

    def get(example_id, m, **build_kwargs):
        key = (example_id, m, tuple(sorted(build_kwargs.items())))
        if key not in cache:
            model = harness.example_flux(example_id, m)
            cls = flux.classify(model)
            prof = profile_mod.build_profile(model, cls, **build_kwargs)
            cache[key] = (model, cls, prof)
        return cache[key]

    return get
