import cmath
import math
from fractions import Fraction

import mpmath
import pytest

from pfzero.errors import (
    Inconclusive,
    InvalidRays,
    InvalidRho,
    PoleOnSegment,
    UsageError,
    ZeroOnContour,
)
from pfzero.hamiltonian import CriticalValue, SingularSet
from pfzero.linalg import RatFunc
from pfzero.pfsystem import ScalarODE
from pfzero.poly import MultiPoly, parse_polynomial
from pfzero.zerocount import (
    Disc,
    Polygon,
    SegmentSet,
    asymptotic_bound_calculators,
    coefficient_sup,
    decompose_simple_domain,
    simple_domain,
    winding_count,
    yakovenko_varbound,
    zero_count_bound,
)

P = parse_polynomial
t = MultiPoly.var("t")
EMPTY = SingularSet(values=(), count_with_multiplicity=0)
ORIGIN = SingularSet(values=(CriticalValue(0j, 1e-10, 1),), count_with_multiplicity=1)


def ode_from_poly(p: MultiPoly) -> ScalarODE:
    """Order-1 equation y' - (p'/p) y = 0 solved by y = p; the poles of the
    coefficient are the zeros of p, all apparent."""
    from pfzero.hamiltonian import isolate_roots

    coeff = RatFunc(-p.derive("t"), p)
    return ScalarODE(
        order=1,
        coeffs=(coeff,),
        pole_set=tuple(isolate_roots(p)),
        true_singularities=EMPTY,
    )


D2_ODE = ScalarODE(
    order=1,
    coeffs=(RatFunc(MultiPoly.const(-1), t),),
    pole_set=(CriticalValue(0j, 1e-10, 1),),
    true_singularities=ORIGIN,
)


class TestDomains:
    def test_empty_sigma_square(self):
        dom = simple_domain(EMPTY, [], Disc(0j, 0.5), 0.1)
        segs = decompose_simple_domain(dom, [])
        assert len(segs.segments) == 4

    def test_cut_domain_clearances(self):
        dom = simple_domain(ORIGIN, [-1.0], Disc(1 + 0j, 0.4), 0.5, relaxed_bounds=True)
        segs = decompose_simple_domain(dom, [0j])
        assert len(segs.segments) <= 64
        assert segs.clearance_to_poles >= 0.5 / 4

    def test_crossing_rays_rejected(self):
        sig = SingularSet(
            values=(CriticalValue(-1 + 0j, 1e-10, 1), CriticalValue(1 + 0j, 1e-10, 1)),
            count_with_multiplicity=2,
        )
        with pytest.raises(InvalidRays):
            simple_domain(sig, [1.0, -1.0], Disc(0j, 0.1), 0.05, relaxed_bounds=True)

    def test_ray_through_region_rejected(self):
        with pytest.raises(InvalidRays):
            simple_domain(ORIGIN, [1.0], Disc(1 + 0j, 0.4), 0.5, relaxed_bounds=True)

    def test_unit_disc_guard(self):
        with pytest.raises(UsageError):
            simple_domain(EMPTY, [], Disc(1 + 0j, 0.4), 0.1)

    def test_polygon_region(self):
        tri = Polygon((0.1 + 0.1j, 0.5 + 0.1j, 0.3 + 0.45j))
        dom = simple_domain(EMPTY, [], tri, 0.05)
        segs = decompose_simple_domain(dom, [2 + 2j])
        assert len(segs.segments) == 4  # bounding rectangle of the triangle

    def test_randomized_invariants(self, rng):
        done = 0
        while done < 100:
            k = rng.randint(0, 3)
            pts = []
            while len(pts) < k:
                z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                if all(abs(z - w) > 0.5 for w in pts):
                    pts.append(z)
            sig = SingularSet(
                values=tuple(CriticalValue(z, 1e-10, 1) for z in pts),
                count_with_multiplicity=len(pts),
            )
            center = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            radius = rng.uniform(0.1, 0.5)
            rho = rng.uniform(0.05, 0.3)
            dirs = []
            ok = True
            for z in pts:
                v = z - center
                if abs(v) < 1e-9:
                    ok = False
                    break
                dirs.append(v / abs(v))
            if not ok:
                continue
            try:
                dom = simple_domain(sig, dirs, Disc(center, radius), rho, relaxed_bounds=True)
                poles = pts + [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(rng.randint(0, 2))]
                segs = decompose_simple_domain(dom, poles)
            except (InvalidRays, UsageError) as e:
                continue
            except Exception as e:
                if type(e).__name__ in ("InfeasibleClearance",):
                    continue
                raise
            # the construction self-checks with assertions; spot check here too
            delta = rho / (4 * max(1, len(poles)))
            for a, b in segs.segments:
                for p in poles:
                    assert _dist(p, a, b) >= delta * (1 - 1e-9)
            assert len(segs.segments) <= 64 * max(1, len(pts) ** 2)
            done += 1


def _dist(z, a, b):
    if a == b:
        return abs(z - a)
    u = (z - a) / (b - a)
    s = min(1.0, max(0.0, u.real))
    return abs(z - (a + s * (b - a)))


class TestCoefficientSup:
    def test_real_segment(self):
        segs = SegmentSet(((1 + 0j, 2 + 0j),), 1.0, {})
        C = coefficient_sup(D2_ODE, segs, 1e-6)
        assert 1.0 <= C <= 1.0 + 1e-5

    def test_diagonal_segment(self):
        segs = SegmentSet(((1 + 0j, 1 + 1j),), 1.0, {})
        C = coefficient_sup(D2_ODE, segs, 1e-6)
        assert 1.0 <= C <= 1.0 + 1e-5

    def test_dense_sampling_oracle(self, rng):
        from tests.conftest import random_poly

        done = 0
        while done < 20:
            num = random_poly(rng, ("t",), 3)
            den = random_poly(rng, ("t",), 3)
            if num.is_zero or den.is_zero:
                continue
            a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if abs(a - b) < 0.1:
                continue
            try:
                coeff = RatFunc(num, den)
            except Exception:
                continue
            ode = ScalarODE(order=1, coeffs=(coeff,), pole_set=(), true_singularities=EMPTY)
            # reject segments passing near a zero of the denominator
            from pfzero.hamiltonian import isolate_roots

            if any(_dist(r.value, a, b) < 0.15 for r in isolate_roots(coeff.den)):
                continue
            segs = SegmentSet(((a, b),), 1.0, {})
            C = coefficient_sup(ode, segs, 1e-6)
            import numpy as np

            ncoef = np.array([complex(v) for v in coeff.num.univariate_coeffs("t")][::-1])
            dcoef = np.array([complex(v) for v in coeff.den.univariate_coeffs("t")][::-1])
            ts = a + np.linspace(0.0, 1.0, 4097) * (b - a)
            sampled = float(np.max(np.abs(np.polyval(ncoef, ts) / np.polyval(dcoef, ts))))
            assert C >= sampled * (1 - 1e-9)
            assert C <= sampled * (1 + 1e-3) + 1e-9
            done += 1

    def test_monotonicity(self):
        tol = 1e-6
        small = SegmentSet(((1 + 0j, 2 + 0j),), 1.0, {})
        big = SegmentSet(((0.5 + 0j, 2 + 0j),), 1.0, {})
        c_small = coefficient_sup(D2_ODE, small, tol)
        c_big = coefficient_sup(D2_ODE, big, tol)
        assert c_big >= c_small / (1 + tol)
        c_loose = coefficient_sup(D2_ODE, small, 1e-2)
        c_tight = coefficient_sup(D2_ODE, small, 1e-8)
        assert c_tight <= c_loose * (1 + 1e-2)

    def test_pole_on_segment(self):
        segs = SegmentSet(((-1 + 0j, 1 + 0j),), 0.0, {})
        with pytest.raises(PoleOnSegment):
            coefficient_sup(D2_ODE, segs, 1e-6)


class TestVarBound:
    def test_unit_values(self):
        assert yakovenko_varbound(1, 1, 1) == pytest.approx(21.7792, abs=1e-3)
        assert yakovenko_varbound(1, 0, 1) == pytest.approx(2 * math.pi, abs=1e-12)

    def test_formula(self):
        # pi (n+1) (1 + l C / log(3/2)) at (2, 2, 5)
        assert yakovenko_varbound(2, 2, 5) == pytest.approx(
            3 * math.pi * (1 + 10 / math.log(1.5)), rel=1e-12
        )

    def test_clamp_below_one(self):
        assert yakovenko_varbound(1, 1, 0.2) == yakovenko_varbound(1, 1, 1.0)


class TestWinding:
    def test_double_zero(self):
        f = lambda s: (0.5 * cmath.exp(2j * math.pi * s)) ** 2
        assert winding_count([f(k / 64) for k in range(64)], refine=f) == 2

    def test_zero_outside(self):
        f = lambda s: math.pi * (1 + 0.4 * cmath.exp(2j * math.pi * s))
        assert winding_count([f(k / 64) for k in range(64)], refine=f) == 0

    def test_simple_zero(self):
        f = lambda s: cmath.exp(2j * math.pi * s)
        assert winding_count([f(k / 64) for k in range(64)], refine=f) == 1

    def test_zero_on_contour(self):
        with pytest.raises(ZeroOnContour):
            winding_count([1 + 0j, 0j, -1 + 0j, -1j])

    def test_inconclusive_without_refine(self):
        f = lambda s: cmath.exp(2j * math.pi * 5 * s)
        with pytest.raises(Inconclusive):
            winding_count([f(k / 8) for k in range(8)], refine=None)

    def test_stability_under_halving(self, rng):
        done = 0
        while done < 50:
            deg = rng.randint(1, 5)
            roots = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(deg)]
            if any(abs(abs(r) - 1.0) < 0.05 for r in roots):
                continue

            def f(s, roots=roots):
                z = cmath.exp(2j * math.pi * s)
                out = 1 + 0j
                for r in roots:
                    out *= z - r
                return out

            inside = sum(1 for r in roots if abs(r) < 1)
            coarse = winding_count([f(k / 128) for k in range(128)], refine=f)
            fine = winding_count([f(k / 256) for k in range(256)], refine=f)
            assert coarse == fine == inside
            done += 1


class TestCalculators:
    def test_exact_256(self):
        calc = asymptotic_bound_calculators(2, Fraction(1, 2), constants={"c": 1})
        assert calc["degree_double_exponential"]["exact"] == "256"

    def test_log_matches_reference(self):
        calc = asymptotic_bound_calculators(3, Fraction(1, 10), constants={"c": 2})
        entry = calc["degree_double_exponential"]
        with mpmath.workprec(200):
            ref = float(512 * mpmath.log10(20))
        assert abs(entry["log10"] - ref) <= 1e-9 * abs(ref)
        # exact big-integer path agrees with the log-space path
        assert entry["exact"] == str(20**512)
        assert math.log10(float(len(entry["exact"]) - 1)) == pytest.approx(
            entry["log10_log10"], abs=0.01
        )

    def test_invalid_rho(self):
        with pytest.raises(InvalidRho):
            asymptotic_bound_calculators(2, Fraction(3, 2))

    def test_parametric_shape(self):
        calc = asymptotic_bound_calculators(
            2, Fraction(1, 2), n=1, M=2, p=1, constants={"c": 1, "c_p": 1}
        )
        assert calc["parametric_height"]["exact"] == "16"  # 1 * 4^(2^1)


class TestBoundPipeline:
    def test_d2_disc(self):
        dom = simple_domain(ORIGIN, [-1.0], Disc(1 + 0j, 0.4), 0.5, relaxed_bounds=True)
        report = zero_count_bound(D2_ODE, dom, calculator_inputs={"d": 2})
        assert report.total_bound >= 0
        assert report.total_bound == int(
            math.floor(math.fsum(report.per_segment_varbound) / (2 * math.pi))
        )

    def test_numeric_never_exceeds_bound(self, rng):
        done = 0
        while done < 12:
            deg = rng.randint(1, 5)
            roots = []
            while len(roots) < deg:
                z = complex(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5))
                if abs(abs(z - 1) - 0.4) > 0.08 and all(abs(z - w) > 0.1 for w in roots):
                    roots.append(z)
            p = MultiPoly.const(1)
            for r in roots:
                rr = Fraction(round(r.real * 16), 16)
                ri = Fraction(round(r.imag * 16), 16)
                # rational real/imag parts keep the ODE exactly representable:
                # multiply conjugate factors for a real polynomial when im != 0
                if ri == 0:
                    p = p * (t - MultiPoly.const(rr))
                else:
                    p = p * (t * t - MultiPoly.const(2 * rr) * t + MultiPoly.const(rr * rr + ri * ri))
            p_roots_inside = None
            ode = ode_from_poly(p)
            center, radius = 1 + 0j, 0.4
            if any(_dist(cv.value, center - radius, center + radius) < 0.05 for cv in ode.pole_set):
                pass
            if any(abs(abs(cv.value - center) - radius) < 0.05 for cv in ode.pole_set):
                continue
            dom = simple_domain(EMPTY, [], Disc(center, radius), 0.1, relaxed_bounds=True)

            def f(s):
                return p.eval_complex({"t": center + radius * cmath.exp(2j * math.pi * s)})

            try:
                # loose sup tolerance: the bound stays rigorous for any tol
                report = zero_count_bound(ode, dom, tol=1e-2, numeric_fn=f, calculator_inputs={"d": 2})
            except PoleOnSegment:
                continue
            truth = sum(
                cv.multiplicity for cv in ode.pole_set if abs(cv.value - center) < radius
            )
            assert report.numeric_count == truth
            assert report.numeric_count <= report.total_bound
            done += 1
