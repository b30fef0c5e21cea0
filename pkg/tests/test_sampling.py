import random

from liftcert.fuzzy import is_pseudometric
from liftcert.lifting import enumerate_vertices
from liftcert.sampling import random_coupling, random_distribution, random_pseudometric, random_relation, random_vertex


def test_generators_respect_bounds():
    rng = random.Random(9)
    for _ in range(50):
        d = random_relation(rng)
        assert 1 <= len(d) <= 6
        assert all(v.denominator <= 10 for v in d.values())
        mu = random_distribution(rng, d.carrier)
        assert 1 <= len(mu) <= 4 and sum(mu.values()) == 1


def test_pseudometrics_by_closure():
    rng = random.Random(10)
    assert all(is_pseudometric(random_pseudometric(rng)) for _ in range(30))


def test_random_vertex_is_a_vertex():
    rng = random.Random(12)
    d = random_relation(rng, n=4)
    for _ in range(10):
        mu, nu = random_distribution(rng, d.carrier), random_distribution(rng, d.carrier)
        assert random_vertex(rng, mu, nu) in enumerate_vertices(mu, nu)
        g = random_coupling(rng, mu, nu)
        assert g.mu == mu and g.nu == nu
