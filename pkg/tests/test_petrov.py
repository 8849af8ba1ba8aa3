from fractions import Fraction

import pytest

from pfzero.errors import NotInIdeal
from pfzero.hamiltonian import Hamiltonian, monomial_basis
from pfzero.petrov import OneForm, ideal_representation, petrov_decompose
from pfzero.pfsystem import make_basis_forms
from pfzero.poly import MultiPoly, parse_polynomial
from tests.conftest import random_poly, random_regular_hamiltonian

P = parse_polynomial
ZERO = MultiPoly.zero()


@pytest.fixture(scope="module")
def circle():
    H = Hamiltonian.from_poly(P("x^2+y^2"))
    forms = make_basis_forms(monomial_basis(H))
    return H, forms


class TestIdealRepresentation:
    def test_quartic_example(self, circle):
        H, _ = circle
        g = P("20*x^4 + 24*x^2*y^2 + 4*y^4")
        a, b = ideal_representation(g, H, deg_cap=6)
        assert H.hx() * b - H.hy() * a == g
        assert a.degree() <= 6 and b.degree() <= 6
        # the deterministic eliminator lands on the hand-derived representative
        assert a == P("-2*y^3") and b == P("10*x^3 + 12*x*y^2")

    def test_constant_not_in_ideal(self, circle):
        H, _ = circle
        with pytest.raises(NotInIdeal):
            ideal_representation(MultiPoly.const(1), H, deg_cap=4)

    def test_generator_itself(self, circle):
        H, _ = circle
        a, b = ideal_representation(P("2*x"), H, deg_cap=4)
        assert a.is_zero and b == MultiPoly.const(1)

    def test_random_memberships(self, rng):
        for _ in range(15):
            d = rng.choice([2, 3])
            H = random_regular_hamiltonian(rng, d)
            u = random_poly(rng, ("x", "y"), 2)
            v = random_poly(rng, ("x", "y"), 2)
            g = H.hx() * v - H.hy() * u
            if g.is_zero:
                continue
            a, b = ideal_representation(g, H, deg_cap=g.degree() + 2 * d)
            assert H.hx() * b - H.hy() * a == g


class TestPetrovDecompose:
    def test_x2dy_example(self, circle):
        H, forms = circle
        dec = petrov_decompose(OneForm(ZERO, P("x^2")), H, forms)
        assert dec.coeffs[0].is_zero
        assert dec.A == P("x^2*y + 2/3*y^3") and dec.B == P("-y")

    def test_ydx_example(self, circle):
        H, forms = circle
        dec = petrov_decompose(OneForm(P("y"), ZERO), H, forms)
        assert dec.coeffs[0] == MultiPoly.const(-1)
        assert dec.A == P("x*y") and dec.B.is_zero

    def test_module_multiple_example(self, circle):
        H, forms = circle
        omega = forms[0].scale(4 * H.poly**2)
        dec = petrov_decompose(omega, H, forms)
        assert dec.coeffs[0] == P("4*t^2")
        assert dec.A.is_zero and dec.B.is_zero

    def test_reconstruction_and_degree_bound(self, rng):
        done = 0
        basis_cache = {}
        while done < 40:
            d = rng.choice([2, 3, 4])
            H = random_regular_hamiltonian(rng, d)
            key = H.poly.to_text()
            if key not in basis_cache:
                basis_cache[key] = make_basis_forms(monomial_basis(H))
            forms = basis_cache[key]
            degw = rng.randint(0, 2 * d)
            omega = OneForm(
                random_poly(rng, ("x", "y"), degw), random_poly(rng, ("x", "y"), degw)
            )
            dec = petrov_decompose(omega, H, forms)
            rec = dec.reconstruct(H, forms)
            assert rec.P == omega.P and rec.Q == omega.Q
            for c, w in zip(dec.coeffs, forms):
                if not c.is_zero:
                    assert Fraction(c.degree_in("t")) <= Fraction(
                        max(omega.degree, 0) - w.degree, d
                    )
            done += 1

    def test_exact_forms_have_zero_module_coeffs(self, rng):
        # omega = dA + B dH decomposes with every c identically zero
        for _ in range(10):
            d = rng.choice([2, 3])
            H = random_regular_hamiltonian(rng, d)
            forms = make_basis_forms(monomial_basis(H))
            A = random_poly(rng, ("x", "y"), d)
            B = random_poly(rng, ("x", "y"), d - 1)
            omega = OneForm(
                A.derive("x") + B * H.hx(), A.derive("y") + B * H.hy()
            )
            dec = petrov_decompose(omega, H, forms)
            assert all(c.is_zero for c in dec.coeffs)

    def test_linearity(self, circle):
        H, forms = circle
        w1 = OneForm(P("y"), P("x^2"))
        w2 = OneForm(P("x*y"), P("y^2 - x"))
        d1 = petrov_decompose(w1, H, forms)
        d2 = petrov_decompose(w2, H, forms)
        d12 = petrov_decompose(w1 + w2, H, forms)
        for c1, c2, c12 in zip(d1.coeffs, d2.coeffs, d12.coeffs):
            assert c12 == c1 + c2
