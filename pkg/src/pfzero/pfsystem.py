"""Assembly of the period system a(t) I' = A(t) I and its scalar reductions.

Row l of the system comes from decomposing (x Hx + y Hy)^2 omega_l (matrix K)
and the derivative-of-period form of the same integrand (matrix L); then
A / a = K^(-1) (L - K') over the rational functions, cleared to a polynomial
matrix over a single monic denominator a(t).

Scalar equations for single components use the iterated rows
a^j I^(j) = (row of A_j) I with A_0 = Id and
A_{j+1} = a A_j' + A_j (A - j a' Id); the first linear dependence over the
rational functions yields the monic equation. Appending the row
I0' = mu^T (A/a) I gives the equation satisfied by an arbitrary combination
of the basis periods, whose solutions always include the constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateK
from .hamiltonian import (
    CriticalValue,
    Hamiltonian,
    MonomialBasis,
    SingularSet,
    critical_values,
    isolate_roots,
    monomial_basis,
)
from .linalg import PolyMatrix, RatFunc, poly_lcm, poly_matrix_rank, solve_poly_linear
from .petrov import OneForm, ideal_representation, petrov_decompose
from .poly import MultiPoly, poly_gcd


@dataclass(frozen=True)
class PFSystem:
    dim: int
    A: PolyMatrix  # entries in t
    a: MultiPoly  # monic, in t
    K: PolyMatrix
    L: PolyMatrix
    basis: MonomialBasis
    forms: tuple[OneForm, ...]
    hamiltonian: Hamiltonian
    singular: SingularSet
    normalized: bool = True
    # cofactor degrees of the derivative forms per row; the classical d(d-1)
    # heuristic is only a starting point and overruns are flagged in reports
    gl_cofactor_degrees: tuple[int, ...] = ()

    def pole_candidates(self) -> list[CriticalValue]:
        return isolate_roots(self.a, "t")

    def gl_degree_overruns(self) -> list[int]:
        cap = self.hamiltonian.degree * (self.hamiltonian.degree - 1)
        return [i for i, g in enumerate(self.gl_cofactor_degrees) if g > cap]


@dataclass(frozen=True)
class ScalarODE:
    """Monic linear equation y^(n) + coeffs[0] y^(n-1) + ... + coeffs[n-1] y = 0."""

    order: int
    coeffs: tuple[RatFunc, ...]
    pole_set: tuple[CriticalValue, ...]
    true_singularities: SingularSet | None = None

    def __post_init__(self):
        if len(self.coeffs) != self.order:
            raise ValueError("coefficient count must equal the order")

    def to_text(self) -> str:
        def dname(k: int) -> str:
            if k == 0:
                return "y"
            if k <= 2:
                return "y" + "'" * k
            return f"y^({k})"

        out = dname(self.order)
        for i, c in enumerate(self.coeffs):
            k = self.order - 1 - i
            if c.is_zero:
                continue
            neg = (-c).to_text()
            pos = c.to_text()
            if pos.startswith("-") or pos.startswith("(-"):
                out += f" - ({neg}) {dname(k)}"
            else:
                out += f" + ({pos}) {dname(k)}"
        return out + " = 0"

    def coefficient_values(self, tval: complex) -> list[complex]:
        return [c.eval_complex(tval) for c in self.coeffs]

    def residual_of(self, derivs: list[complex], tval: complex) -> complex:
        """y^(n) + sum coeffs * lower derivatives at tval; derivs = [y, y', ...]."""
        if len(derivs) != self.order + 1:
            raise ValueError("need derivatives up to the order")
        acc = derivs[self.order]
        for i, c in enumerate(self.coeffs):
            acc += c.eval_complex(tval) * derivs[self.order - 1 - i]
        return acc


def make_basis_forms(basis: MonomialBasis) -> list[OneForm]:
    """For the monomial x^a y^b return (x^(a+1) y^b / (a+1)) dy, so the
    exterior derivative is exactly the monomial times dx ^ dy."""
    forms = []
    for a, b in basis.monomials:
        coef = Fraction(1, a + 1)
        forms.append(OneForm(MultiPoly.zero(), MultiPoly.monomial(coef, x=a + 1, y=b)))
    return forms


def euler_multiplier(H: Hamiltonian) -> MultiPoly:
    """x Hx + y Hy; equals d * H plus lower order terms, and d * H exactly
    for homogeneous H."""
    return MultiPoly.var("x") * H.hx() + MultiPoly.var("y") * H.hy()


def gelfand_leray_rhs(H: Hamiltonian, omega: OneForm) -> OneForm:
    """alpha with dH ^ alpha = d((x Hx + y Hy)^2 omega), exactly.

    The right side's dx^dy coefficient lies in the gradient ideal by
    construction, so the representation always exists; failure indicates an
    internal error and surfaces as NotInIdeal.
    """
    f2 = euler_multiplier(H) ** 2
    g = omega.scale(f2).exterior_coeff()
    a, b = ideal_representation(g, H, deg_cap=g.degree() + 2 * H.degree)
    return OneForm(a, b)


def assemble_pf_system(
    H: Hamiltonian, forms_override: list[OneForm] | None = None
) -> PFSystem:
    """Build the polynomial system a(t) I' = A(t) I for the basis periods.

    K^(-1) goes through the exact adjugate over Q[t]; the common polynomial
    content of det K and the numerator matrix is cancelled and a(t) is made
    monic. forms_override exists for diagnostics (a rank-deficient K from
    duplicated forms must surface as DegenerateK).
    """
    basis = monomial_basis(H)
    forms = list(forms_override) if forms_override is not None else make_basis_forms(basis)
    n = len(forms)
    d = H.degree
    f2 = euler_multiplier(H) ** 2

    k_rows = []
    l_rows = []
    gl_degrees = []
    for ell in range(n):
        dec_k = petrov_decompose(forms[ell].scale(f2), H, forms)
        for c in dec_k.coeffs:
            if c.degree_in("t") > d:
                raise AssertionError("module coefficient exceeds the degree bound")
        k_rows.append([_as_tpoly(c) for c in dec_k.coeffs])
        alpha = gelfand_leray_rhs(H, forms[ell])
        gl_degrees.append(alpha.degree)
        dec_l = petrov_decompose(alpha, H, forms)
        l_rows.append([_as_tpoly(c) for c in dec_l.coeffs])
    K = PolyMatrix(k_rows)
    L = PolyMatrix(l_rows)
    detK = K.determinant()
    if detK.is_zero:
        raise DegenerateK("period coefficient matrix is singular")
    M = K.adjugate() * (L - K.derive("t"))
    # cancel the common polynomial content, then normalize a to monic
    g = detK
    for i in range(n):
        for j in range(n):
            e = M[i, j]
            if e.is_zero:
                continue
            g = poly_gcd(g, e)
            if g.is_constant():
                break
        if g.is_constant():
            break
    if not g.is_constant():
        detK = detK.exact_div(g)
        M = PolyMatrix([[M[i, j].exact_div(g) if not M[i, j].is_zero else M[i, j] for j in range(n)] for i in range(n)])
    lc = detK.leading_coeff()
    a = detK.monic()
    A = PolyMatrix([[M[i, j] * MultiPoly.const(Fraction(1) / lc) for j in range(n)] for i in range(n)])
    singular = critical_values(H)
    return PFSystem(
        dim=n,
        A=A,
        a=a,
        K=K,
        L=L,
        basis=basis,
        forms=tuple(forms),
        hamiltonian=H,
        singular=singular,
        gl_cofactor_degrees=tuple(gl_degrees),
    )


def _as_tpoly(p: MultiPoly) -> MultiPoly:
    if any(v not in ("t",) for v in p.vars):
        raise AssertionError("module coefficient involves x or y")
    return p


def _iterated_rows(A: PolyMatrix, a: MultiPoly, m_index: int, jmax: int) -> list[list[MultiPoly]]:
    """Rows alpha_{j,m} of A_j for j = 0..jmax, where a^j I_m^(j) = alpha_{j,m} I."""
    n = A.rows
    rows = []
    Aj = PolyMatrix.identity(n)
    ap = a.derive("t")
    for j in range(jmax + 1):
        rows.append(Aj.row(m_index))
        if j == jmax:
            break
        shift = PolyMatrix(
            [
                [
                    A[i, k] - (ap * MultiPoly.const(j) if i == k else MultiPoly.zero())
                    for k in range(n)
                ]
                for i in range(n)
            ]
        )
        Aj = Aj.derive("t").scale(a) + Aj * shift
    return rows


def _scalar_from_matrix(
    A: PolyMatrix,
    a: MultiPoly,
    m_index: int,
    singular: SingularSet | None,
) -> ScalarODE:
    n = A.rows
    rows = _iterated_rows(A, a, m_index, n)
    k = None
    for j in range(1, n + 1):
        if poly_matrix_rank(rows[: j + 1]) <= j:
            k = j
            break
    if k is None:
        raise AssertionError("no dependence found up to the dimension")
    # solve alpha_k = sum_{l<k} w_l alpha_l over the rational functions
    sys_rows = [[rows[l][i] for l in range(k)] for i in range(n)]
    rhs = [rows[k][i] for i in range(n)]
    w = solve_poly_linear(sys_rows, rhs)
    coeffs = []
    a_rf = RatFunc.from_poly(a)
    for i in range(k):
        l = k - 1 - i
        denom_power = k - l
        c = -w[l]
        for _ in range(denom_power):
            c = c / a_rf
        coeffs.append(c)
    pole_poly = a
    for c in coeffs:
        pole_poly = poly_lcm(pole_poly, c.den) if not c.is_zero else pole_poly
    poles = tuple(isolate_roots(pole_poly, "t"))
    return ScalarODE(order=k, coeffs=tuple(coeffs), pole_set=poles, true_singularities=singular)


def derive_scalar_ode(sys: PFSystem, m: int) -> ScalarODE:
    """Monic scalar equation for the m-th basis period (m is 1-based)."""
    if not 1 <= m <= sys.dim:
        raise ValueError(f"component {m} out of range 1..{sys.dim}")
    return _scalar_from_matrix(sys.A, sys.a, m - 1, sys.singular)


def augment_and_reduce(sys: PFSystem, mu: list[Fraction]) -> ScalarODE:
    """Scalar equation for I0 = sum mu_l I_l via the augmented system.

    The augmented matrix carries I0 in component 0; its equation has order at
    most dim + 1 and constants are always solutions (the coefficient of y in
    the result vanishes identically).
    """
    n = sys.dim
    if len(mu) != n:
        raise ValueError(f"mu must have {n} entries")
    mu = [Fraction(v) for v in mu]
    zero = MultiPoly.zero()
    top = [zero] + [
        sum(
            (MultiPoly.const(mu[l]) * sys.A[l, j] for l in range(n)),
            start=zero,
        )
        for j in range(n)
    ]
    rows = [top]
    for i in range(n):
        rows.append([zero] + sys.A.row(i))
    Ahat = PolyMatrix(rows)
    ode = _scalar_from_matrix(Ahat, sys.a, 0, sys.singular)
    const_coeff = ode.coeffs[-1]
    if not const_coeff.is_zero:
        raise AssertionError("constants are not annihilated by the augmented equation")
    return ode
