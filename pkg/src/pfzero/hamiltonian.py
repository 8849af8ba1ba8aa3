"""Hamiltonian analysis: highest homogeneous part, regularity at infinity,
critical values, and the monomial basis of C[x,y] / <Hx~, Hy~>.

Regularity at infinity is decided exactly: the top form factors into pairwise
distinct linear factors iff its dehomogenization in one chart is squarefree
and the remaining chart contributes a factor of multiplicity at most one.
Critical values go through resultant elimination to a univariate polynomial
in t whose roots are then isolated numerically and verified against the
critical points of H.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    NonIsolatedCritical,
    NotRegularAtInfinity,
    UnsupportedDegree,
)
from .poly import MultiPoly, grevlex_key, poly_gcd, resultant

DEFAULT_ISOLATION_RADIUS = 1e-10


# -- basic objects ---------------------------------------------------------


@dataclass(frozen=True)
class Hamiltonian:
    poly: MultiPoly
    degree: int
    highest_part: MultiPoly

    @staticmethod
    def from_poly(p: MultiPoly) -> "Hamiltonian":
        d = p.degree()
        if d < 2:
            raise UnsupportedDegree(f"degree {d} < 2")
        return Hamiltonian(poly=p, degree=d, highest_part=p.homogeneous_part(d))

    def hx(self) -> MultiPoly:
        return self.poly.derive("x")

    def hy(self) -> MultiPoly:
        return self.poly.derive("y")

    def eval(self, x: complex, y: complex) -> complex:
        return self.poly.eval_complex({"x": x, "y": y})


@dataclass(frozen=True)
class CriticalValue:
    value: complex
    radius: float
    multiplicity: int = 1


@dataclass(frozen=True)
class SingularSet:
    """Isolated singular values with certified-style radii.

    `count_with_multiplicity` counts the distinct critical points found in the
    plane; `may_miss_atypical` is raised for Hamiltonians that are not regular
    at infinity, where atypical values can exceed the critical ones.
    """

    values: tuple[CriticalValue, ...]
    count_with_multiplicity: int
    may_miss_atypical: bool = False

    def points(self) -> list[complex]:
        return [v.value for v in self.values]

    def min_distance(self, z: complex) -> float:
        if not self.values:
            return float("inf")
        return min(abs(z - v.value) for v in self.values)

    def nearest_radius(self, z: complex) -> float:
        if not self.values:
            return 0.0
        return min(self.values, key=lambda v: abs(z - v.value)).radius

    def is_near(self, z: complex) -> bool:
        return any(abs(z - v.value) <= v.radius for v in self.values)


@dataclass(frozen=True)
class MonomialBasis:
    """Standard monomials under the staircase of <Hx~, Hy~>, grevlex x > y."""

    monomials: tuple[tuple[int, int], ...]
    leading_term_diagram: tuple[tuple[int, int], ...]
    degree: int  # degree of the Hamiltonian this basis belongs to

    def size(self) -> int:
        return len(self.monomials)


# -- highest part and regularity --------------------------------------------


def highest_part(p: MultiPoly) -> MultiPoly:
    """Homogeneous component of maximal total degree; requires degree >= 2."""
    d = p.degree()
    if d < 2:
        raise UnsupportedDegree(f"degree {d} < 2")
    return p.homogeneous_part(d)


def is_regular_at_infinity(H: Hamiltonian) -> bool:
    """True iff the top form is a product of pairwise distinct linear factors.

    Exact test: dehomogenize on the chart x = 1. The multiplicity of the line
    x = 0 equals d minus the degree of the dehomogenization, and the remaining
    factors are distinct iff that univariate polynomial is squarefree.
    """
    hp = H.highest_part
    d = H.degree
    p = hp.substitute("x", MultiPoly.const(1))  # polynomial in y
    degp = p.degree_in("y") if not p.is_zero else -1
    if p.is_zero:
        return False
    mult_x_line = d - max(degp, 0)
    if mult_x_line > 1:
        return False
    if degp <= 0:
        return True  # top form is c * x^d with d... only reachable when d - 0 <= 1
    dp = p.derive("y")
    g = poly_gcd(p, dp)
    return g.is_constant()


# -- Buchberger ----------------------------------------------------------------


def _lt(p: MultiPoly):
    return p.leading()


def _mono_divides(a, b) -> bool:
    return all(i <= j for i, j in zip(a, b))


def _reduce_full(p: MultiPoly, basis: list[MultiPoly]) -> MultiPoly:
    """Full normal form: reduce every reducible term."""
    if p.is_zero:
        return p
    ctx = ("x", "y")
    rem = MultiPoly.zero()
    work = p
    lts = [(b.leading()[0], b.leading()[1], b) for b in basis]
    while not work.is_zero:
        e, c = work.leading()
        we = work.extended(ctx)
        e2 = max(we, key=grevlex_key)
        c2 = we[e2]
        hit = None
        for le, lc, b in lts:
            ble = b.extended(ctx)
            ble_lead = max(ble, key=grevlex_key)
            if _mono_divides(ble_lead, e2):
                hit = (ble_lead, ble[ble_lead], b)
                break
        if hit is None:
            mono = MultiPoly(ctx, {e2: c2})
            rem = rem + mono
            work = work - mono
        else:
            ble_lead, blc, b = hit
            shift = tuple(i - j for i, j in zip(e2, ble_lead))
            factor = MultiPoly(ctx, {shift: c2 / blc})
            work = work - factor * b
    return rem


def _spoly(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    ctx = ("x", "y")
    fe = f.extended(ctx)
    ge = g.extended(ctx)
    lf = max(fe, key=grevlex_key)
    lg = max(ge, key=grevlex_key)
    lcm = tuple(max(i, j) for i, j in zip(lf, lg))
    mf = MultiPoly(ctx, {tuple(l - i for l, i in zip(lcm, lf)): Fraction(1) / fe[lf]})
    mg = MultiPoly(ctx, {tuple(l - i for l, i in zip(lcm, lg)): Fraction(1) / ge[lg]})
    return mf * f - mg * g


def buchberger(gens: list[MultiPoly]) -> list[MultiPoly]:
    """Reduced Groebner basis for an ideal in Q[x,y], grevlex x > y."""
    ctx = ("x", "y")
    basis = [g.monic() for g in gens if not g.is_zero]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        i, j = pairs.pop(0)
        fe = basis[i].extended(ctx)
        ge = basis[j].extended(ctx)
        lf = max(fe, key=grevlex_key)
        lg = max(ge, key=grevlex_key)
        if all(a == 0 or b == 0 for a, b in zip(lf, lg)):
            continue  # coprime leading monomials
        s = _reduce_full(_spoly(basis[i], basis[j]), basis)
        if not s.is_zero:
            basis.append(s.monic())
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    # interreduce
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            r = _reduce_full(basis[i], others)
            if r != basis[i]:
                changed = True
                if r.is_zero:
                    basis.pop(i)
                else:
                    basis[i] = r.monic()
                break
    return sorted(basis, key=lambda b: grevlex_key(max(b.extended(ctx), key=grevlex_key)))


def _staircase(leads: list[tuple[int, int]]) -> list[tuple[int, int]]:
    minimal = []
    for e in leads:
        if any(_mono_divides(o, e) and o != e for o in leads):
            continue
        if e not in minimal:
            minimal.append(e)
    return sorted(minimal)


def monomial_basis(H: Hamiltonian) -> MonomialBasis:
    """Standard monomials below the staircase of <Hx~, Hy~>.

    The count equals (d-1)^2 exactly when the Hamiltonian is regular at
    infinity; otherwise the quotient is infinite dimensional and
    NotRegularAtInfinity is raised.
    """
    if not is_regular_at_infinity(H):
        raise NotRegularAtInfinity("top form has a repeated linear factor")
    ctx = ("x", "y")
    hp = H.highest_part
    gx, gy = hp.derive("x"), hp.derive("y")
    gb = buchberger([g for g in (gx, gy) if not g.is_zero])
    leads = []
    for b in gb:
        be = b.extended(ctx)
        leads.append(max(be, key=grevlex_key))
    amax = min((e[0] for e in leads if e[1] == 0), default=None)
    bmax = min((e[1] for e in leads if e[0] == 0), default=None)
    if amax is None or bmax is None:
        raise NotRegularAtInfinity("quotient is infinite dimensional")
    monos = []
    for a in range(amax):
        for b in range(bmax):
            if not any(_mono_divides(e, (a, b)) for e in leads):
                monos.append((a, b))
    d = H.degree
    if len(monos) != (d - 1) ** 2:
        raise NotRegularAtInfinity(
            f"quotient dimension {len(monos)} != {(d - 1) ** 2}"
        )
    monos.sort(key=lambda ab: (ab[0] + ab[1], ab[1]))
    return MonomialBasis(
        monomials=tuple(monos),
        leading_term_diagram=tuple(_staircase(leads)),
        degree=d,
    )


# -- univariate root isolation -------------------------------------------------


def yun_squarefree_decomposition(p: MultiPoly, var: str) -> list[tuple[MultiPoly, int]]:
    """[(factor_i, i)] with p = lc * prod factor_i^i, factors squarefree."""
    out = []
    dp = p.derive(var)
    g = poly_gcd(p, dp)
    if g.is_constant():
        return [(p.monic(), 1)]
    w = p.exact_div(g)
    y = dp.exact_div(g)
    z = y - w.derive(var)
    i = 1
    while not w.is_constant():
        if z.is_zero:
            out.append((w.monic(), i))
            break
        h = poly_gcd(w, z)
        if not h.is_constant():
            out.append((h.monic(), i))
            w = w.exact_div(h)
            y2 = z.exact_div(h)
        else:
            y2 = z
        z = y2 - w.derive(var)
        i += 1
    return out


def _poly_complex_coeffs(p: MultiPoly, var: str) -> np.ndarray:
    coeffs = p.univariate_coeffs(var)
    return np.array([complex(c) for c in coeffs], dtype=complex)


def _newton_polish(coeffs: np.ndarray, z: complex, steps: int = 40) -> complex:
    dcoeffs = np.array([k * coeffs[k] for k in range(1, len(coeffs))], dtype=complex)
    for _ in range(steps):
        pv = np.polyval(coeffs[::-1], z)
        dv = np.polyval(dcoeffs[::-1], z)
        if dv == 0:
            break
        step = pv / dv
        z = z - step
        if abs(step) < 1e-16 * max(1.0, abs(z)):
            break
    return z


def isolate_roots(
    p: MultiPoly, var: str = "t", default_radius: float = DEFAULT_ISOLATION_RADIUS
) -> list[CriticalValue]:
    """Numeric root isolation with per-root radii; overlapping discs merge.

    Roots of each squarefree factor come from the companion matrix, get a
    Newton polish, and receive the radius deg * |p(z)/p'(z)| (a disc of that
    radius around z always contains a root), floored at `default_radius`.
    """
    if p.is_zero or p.is_constant():
        return []
    found: list[CriticalValue] = []
    for factor, mult in yun_squarefree_decomposition(p, var):
        deg = factor.degree_in(var)
        if deg <= 0:
            continue
        coeffs = _poly_complex_coeffs(factor, var)
        roots = np.roots(coeffs[::-1])
        dcoeffs = np.array([k * coeffs[k] for k in range(1, len(coeffs))], dtype=complex)
        for z in roots:
            z = _newton_polish(coeffs, complex(z))
            pv = np.polyval(coeffs[::-1], z)
            dv = np.polyval(dcoeffs[::-1], z)
            rad = default_radius
            if dv != 0:
                rad = max(default_radius, deg * abs(pv / dv))
            found.append(CriticalValue(value=z, radius=rad, multiplicity=mult))
    return merge_close_values(found)


def merge_close_values(values: list[CriticalValue]) -> list[CriticalValue]:
    vals = sorted(values, key=lambda v: (v.value.real, v.value.imag))
    merged: list[CriticalValue] = []
    for v in vals:
        for i, u in enumerate(merged):
            if abs(u.value - v.value) <= u.radius + v.radius:
                w = u.multiplicity + v.multiplicity
                center = (u.value * u.multiplicity + v.value * v.multiplicity) / w
                radius = max(
                    abs(center - u.value) + u.radius, abs(center - v.value) + v.radius
                )
                merged[i] = CriticalValue(center, radius, w)
                break
        else:
            merged.append(v)
    return merged


# -- critical values ------------------------------------------------------------


def _resultant_or_power(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """resultant() with the degenerate degree-zero conventions inlined."""
    return resultant(f, g, var)


def _numeric_critical_points(H: Hamiltonian, tol: float = 1e-8) -> list[tuple[complex, complex]]:
    hx, hy = H.hx(), H.hy()
    g1 = _resultant_or_power(hx, hy, "y")
    if g1.is_zero:
        g1 = _resultant_or_power(hx, hy, "x")
        if g1.is_zero:
            raise NonIsolatedCritical("partials share a common curve")
        swapped = True
    else:
        swapped = False
    main, other = ("y", "x") if swapped else ("x", "y")
    xs = [cv.value for cv in isolate_roots(g1, main)]
    pts: list[tuple[complex, complex]] = []
    for xv in xs:
        cands: set[complex] = set()
        for q in (hy, hx):
            # roots of q(x*, .) in the other variable
            qc = [
                q.coeff_in_var(other, k).eval_complex({main: xv})
                for k in range(q.degree_in(other) + 1)
            ]
            arr = np.array(qc, dtype=complex)
            if np.allclose(arr, 0):
                continue
            while len(arr) > 1 and arr[-1] == 0:
                arr = arr[:-1]
            if len(arr) <= 1:
                continue
            for yv in np.roots(arr[::-1]):
                cands.add(complex(yv))
        for yv in cands:
            pt = {main: xv, other: yv}
            xr, yr = _newton_2d(H, pt)
            scale = 1.0 + abs(xr) ** max(H.degree - 1, 1) + abs(yr) ** max(H.degree - 1, 1)
            if (
                abs(hx.eval_complex({"x": xr, "y": yr})) <= tol * scale
                and abs(hy.eval_complex({"x": xr, "y": yr})) <= tol * scale
            ):
                if not any(abs(xr - a) + abs(yr - b) < 1e-7 * (1 + abs(xr) + abs(yr)) for a, b in pts):
                    pts.append((xr, yr))
    return pts


def _newton_2d(H: Hamiltonian, pt: dict, steps: int = 60):
    """Newton iteration on (Hx, Hy) = 0 from the given starting point."""
    hx, hy = H.hx(), H.hy()
    hxx, hxy = hx.derive("x"), hx.derive("y")
    hyx, hyy = hy.derive("x"), hy.derive("y")
    x = complex(pt["x"])
    y = complex(pt["y"])
    for _ in range(steps):
        f1 = hx.eval_complex({"x": x, "y": y})
        f2 = hy.eval_complex({"x": x, "y": y})
        a = hxx.eval_complex({"x": x, "y": y})
        b = hxy.eval_complex({"x": x, "y": y})
        c = hyx.eval_complex({"x": x, "y": y})
        dd = hyy.eval_complex({"x": x, "y": y})
        det = a * dd - b * c
        if det == 0:
            return (x, y)
        dx = (f1 * dd - b * f2) / det
        dy = (a * f2 - f1 * c) / det
        x, y = x - dx, y - dy
        if abs(dx) + abs(dy) < 1e-15 * (1 + abs(x) + abs(y)):
            break
    return (x, y)


def critical_values(
    H: Hamiltonian, default_radius: float = DEFAULT_ISOLATION_RADIUS
) -> SingularSet:
    """All complex critical values of H, by elimination plus verification.

    Route: Res_y(H - t, Hy) and the critical-x polynomial Res_y(Hx, Hy) are
    crossed through Res_x into a univariate polynomial in t; its isolated
    roots are kept when they match the value of H at a numerically polished
    critical point, which prunes the spurious combinations resultants allow.
    """
    hx, hy = H.hx(), H.hy()
    if hx.is_zero or hy.is_zero:
        raise NonIsolatedCritical("a partial derivative vanishes identically")
    g = poly_gcd(hx, hy)
    if not g.is_constant():
        raise NonIsolatedCritical("partials share a nonconstant factor")
    warn = not is_regular_at_infinity(H)

    Ht = H.poly - MultiPoly.var("t")
    candidates: list[CriticalValue] = []
    for main, other in (("x", "y"), ("y", "x")):
        g1 = _resultant_or_power(hx, hy, other)
        if g1.is_zero or g1.is_constant():
            continue
        A = _resultant_or_power(Ht, hy if other == "y" else hx, other)
        if A.is_zero:
            continue
        T = _resultant_or_power(A, g1, main)
        if T.is_zero or T.degree_in("t") <= 0:
            continue
        candidates = isolate_roots(T, "t", default_radius)
        break
    pts = _numeric_critical_points(H)
    values = [H.eval(x, y) for (x, y) in pts]
    kept: list[CriticalValue] = []
    for cv in candidates:
        match_tol = max(cv.radius * 4, 1e-7 * (1 + abs(cv.value)))
        if any(abs(cv.value - v) <= match_tol for v in values):
            kept.append(cv)
    # values found numerically but missing from the eliminant (should not
    # happen; kept as a safety net)
    for v in values:
        if not any(abs(v - cv.value) <= max(cv.radius * 4, 1e-7 * (1 + abs(v))) for cv in kept):
            kept.append(CriticalValue(v, default_radius, 1))
    merged = merge_close_values(kept)
    return SingularSet(
        values=tuple(merged),
        count_with_multiplicity=len(pts),
        may_miss_atypical=warn,
    )
