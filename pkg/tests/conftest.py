import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from pfzero.poly import MultiPoly

settings.register_profile(
    "ci",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("ci")


def random_poly(rng: random.Random, variables, max_deg, coeff_range=5, density=0.6):
    terms = {}
    nv = len(variables)
    for _ in range(max(1, int(density * (max_deg + 1) ** nv))):
        expo = []
        left = max_deg
        for _ in range(nv):
            e = rng.randint(0, left)
            expo.append(e)
            left -= e
        c = rng.randint(-coeff_range, coeff_range)
        if c:
            terms[tuple(expo)] = Fraction(c)
    return MultiPoly(tuple(variables), terms)


def random_regular_hamiltonian(rng: random.Random, d, coeff_range=5):
    """Rejection sample a degree-d Hamiltonian regular at infinity."""
    from pfzero.hamiltonian import Hamiltonian, is_regular_at_infinity

    while True:
        terms = {}
        for i in range(d + 1):
            for j in range(d + 1 - i):
                if rng.random() < 0.75:
                    c = rng.randint(-coeff_range, coeff_range)
                    if c:
                        terms[(i, j)] = Fraction(c)
        p = MultiPoly(("x", "y"), terms)
        if p.degree() != d:
            continue
        H = Hamiltonian.from_poly(p)
        if is_regular_at_infinity(H):
            return H


@pytest.fixture
def rng():
    return random.Random(20240817)
