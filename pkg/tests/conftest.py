import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cainfty.graded import GradedMap
from cainfty.ring import GF

settings.register_profile("ci", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

F101 = GF(101)
FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def random_map(rng: random.Random, U, V, degree: int, ring=F101, density: float = 0.6) -> GradedMap:
    cols = {}
    for e in U.basis():
        targets = V.basis(U.key_degree(e) + degree)
        vec = {t: rng.randrange(1, ring.p) for t in targets if rng.random() < density}
        if vec:
            cols[e] = vec
    return GradedMap(U, V, degree, ring, cols)


@pytest.fixture
def rng():
    return random.Random(20240611)
