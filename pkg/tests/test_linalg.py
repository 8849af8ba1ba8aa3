from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pfzero.errors import DivisionByZeroPolynomial, Inconsistent
from pfzero.linalg import (
    RHS,
    PolyMatrix,
    RatFunc,
    bareiss_determinant,
    exact_linear_solve,
    poly_lcm,
    poly_matrix_rank,
    ratfunc_normalize,
    solve_poly_linear,
    solve_sparse_exact,
)
from pfzero.poly import MultiPoly, parse_polynomial

P = parse_polynomial
t = MultiPoly.var("t")
x, y = MultiPoly.var("x"), MultiPoly.var("y")


class TestExactSolve:
    def test_scalar(self):
        sol, rank = exact_linear_solve([[2]], [4])
        assert sol == [Fraction(2)] and rank == 1

    def test_2x2_determinant(self):
        assert bareiss_determinant([[1, 2], [3, 4]]) == Fraction(-2)

    def test_rank_deficient_inconsistent(self):
        with pytest.raises(Inconsistent):
            exact_linear_solve([[1, 1], [2, 2]], [1, 3])

    def test_underdetermined_minimal_support(self):
        sol, rank = exact_linear_solve([[1, 1]], [5])
        assert sol == [Fraction(5), Fraction(0)] and rank == 1

    @given(st.integers(1, 4), st.data())
    def test_residual_is_zero(self, n, data):
        M = [
            [Fraction(data.draw(st.integers(-5, 5))) for _ in range(n)]
            for _ in range(n + data.draw(st.integers(0, 2)))
        ]
        u = [Fraction(data.draw(st.integers(-3, 3))) for _ in range(n)]
        v = [sum(row[j] * u[j] for j in range(n)) for row in M]
        sol, _ = exact_linear_solve(M, v)
        for row, b in zip(M, v):
            assert sum(c * s for c, s in zip(row, sol)) == b


class TestSparseSolver:
    def test_matches_dense(self, rng):
        for _ in range(30):
            n = rng.randint(1, 6)
            m = rng.randint(n, n + 2)
            M = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(m)]
            u = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            v = [sum(r[j] * u[j] for j in range(n)) for r in M]
            rows = [
                {j: c for j, c in enumerate(r) if c} | {RHS: b}
                for r, b in zip(M, v)
                if any(r) or b
            ]
            sol, _ = solve_sparse_exact(rows, n)
            for r, b in zip(M, v):
                assert sum(c * s for c, s in zip(r, sol)) == b

    def test_inconsistent(self):
        rows = [{0: Fraction(1), RHS: Fraction(1)}, {0: Fraction(1), RHS: Fraction(2)}]
        with pytest.raises(Inconsistent):
            solve_sparse_exact(rows, 1)


class TestRatFunc:
    def test_cancel_common_factor(self):
        r = ratfunc_normalize(2 * t**2 + 2 * t, 2 * t)
        assert r.num == t + 1 and r.den == MultiPoly.const(1)

    def test_identity_cancellation(self):
        r = ratfunc_normalize(t, t)
        assert r.num == MultiPoly.const(1) and r.den == MultiPoly.const(1)

    def test_gcd_reduction_monic_denominator(self):
        # (t^2-1)/(2t-2) reduces by t-1; the denominator is normalized monic
        r = ratfunc_normalize(t**2 - 1, 2 * t - 2)
        assert r.den == MultiPoly.const(1)
        assert r.num == Fraction(1, 2) * t + Fraction(1, 2)
        assert r.eval_complex(3.0) == pytest.approx(2.0)

    def test_normalize_idempotent(self):
        r = ratfunc_normalize(t**2 - 1, 2 * t - 2)
        again = ratfunc_normalize(r.num, r.den)
        assert again == r

    def test_zero_denominator_rejected(self):
        with pytest.raises(DivisionByZeroPolynomial):
            ratfunc_normalize(t, MultiPoly.zero())

    def test_arithmetic(self):
        a = RatFunc(MultiPoly.const(1), t)
        b = RatFunc(t, MultiPoly.const(1))
        assert (a * b) == RatFunc.one()
        assert (a + a).num == MultiPoly.const(2)
        d = a.derivative()
        assert d.num == MultiPoly.const(-1) and d.den == t**2


class TestPolyMatrix:
    def test_adjugate_identity(self, rng):
        from tests.conftest import random_poly

        for _ in range(10):
            n = rng.randint(1, 3)
            M = PolyMatrix(
                [[random_poly(rng, ("t",), 2) for _ in range(n)] for _ in range(n)]
            )
            det = M.determinant()
            if det.is_zero:
                continue
            prod = M.adjugate() * M
            for i in range(n):
                for j in range(n):
                    assert prod[i, j] == (det if i == j else MultiPoly.zero())

    def test_rank(self):
        assert poly_matrix_rank([[x, y], [x, y]]) == 1
        assert poly_matrix_rank([[x, y], [y, x]]) == 2

    def test_solve_poly_linear(self):
        sol = solve_poly_linear([[t, MultiPoly.const(1)], [MultiPoly.zero(), t]], [t * t + 1, t])
        assert sol[0] == RatFunc.from_poly(t)
        assert sol[1] == RatFunc.one()

    def test_solve_poly_linear_inconsistent(self):
        with pytest.raises(Inconsistent):
            solve_poly_linear([[t], [t]], [t, t + 1])


def test_poly_lcm():
    assert poly_lcm(t**2 - 1, t - 1) == (t**2 - 1).monic()
