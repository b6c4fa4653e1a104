import pytest

from transurf import instances
from transurf.classify import classify


@pytest.fixture(scope="session")
def slide_reports():
    """Classified tangent-sliding instances, shared across test modules."""
    out = {}
    for kind in ("edge", "swallowtail", "nonfront"):
        s, p0 = instances.slide_pair(kind)
        out[kind] = (s, p0, classify(s, p0))
    return out


@pytest.fixture(scope="session")
def cylinder_reports():
    out = []
    for s, p0 in (instances.cylinder_pair(),
                  instances.cylinder_pair(t0=-0.8),
                  instances.cylinder_pair(
                      instances.helix(0.7, 1.1, "helix-b"), 0.3)):
        out.append((s, p0, classify(s, p0)))
    return out
