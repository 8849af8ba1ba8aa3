"""Zero counting and bounding for solutions of the scalar equations.

The pipeline: cut the plane along the domain's rays, cover the region by
polygons whose boundary segments stay clear of every coefficient pole, bound
the modulus of the coefficients on each segment by rigorous interval
subdivision, convert to a variation-of-argument bound per segment
(pi (n+1) (1 + l C / log(3/2))), and sum over 2 pi. The argument principle
on sampled contours supplies the numeric count, which the bound must
dominate. The closed-form asymptotic calculators are reporting-only.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import (
    Inconclusive,
    InfeasibleClearance,
    InvalidRays,
    InvalidRho,
    NumericFailure,
    PoleOnSegment,
    UsageError,
    ZeroOnContour,
)
from .hamiltonian import SingularSet
from .pfsystem import ScalarODE

LOG32 = math.log(1.5)
SEGMENT_COUNT_CONSTANT = 64  # explicit stand-in for the O(|sigma|^2) cap
CLEARANCE_CONSTANT = 4  # pole clearance rho / (4 |Z|)


# -- regions and domains -----------------------------------------------------


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def bbox(self):
        c, r = self.center, self.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)

    def dist_to_point(self, z: complex) -> float:
        return max(0.0, abs(z - self.center) - self.radius)

    def boundary_points(self, n: int):
        return [
            self.center + self.radius * cmath.exp(2j * math.pi * k / n) for k in range(n)
        ]

    def max_abs(self) -> float:
        return abs(self.center) + self.radius


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[complex, ...]

    def bbox(self):
        xs = [v.real for v in self.vertices]
        ys = [v.imag for v in self.vertices]
        return (min(xs), max(xs), min(ys), max(ys))

    def dist_to_point(self, z: complex) -> float:
        if self._contains(z):
            return 0.0
        n = len(self.vertices)
        return min(
            _dist_point_segment(z, self.vertices[i], self.vertices[(i + 1) % n])
            for i in range(n)
        )

    def _contains(self, z: complex) -> bool:
        cnt = 0
        n = len(self.vertices)
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            if (a.imag > z.imag) != (b.imag > z.imag):
                xc = a.real + (z.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
                if xc > z.real:
                    cnt ^= 1
        return bool(cnt)

    def boundary_points(self, n: int):
        verts = list(self.vertices)
        m = len(verts)
        per = max(2, n // m)
        out = []
        for i in range(m):
            a, b = verts[i], verts[(i + 1) % m]
            for k in range(per):
                out.append(a + (b - a) * k / per)
        return out

    def max_abs(self) -> float:
        return max(abs(v) for v in self.vertices)


def _dist_point_segment(z: complex, a: complex, b: complex) -> float:
    if a == b:
        return abs(z - a)
    u = (z - a) / (b - a)
    s = min(1.0, max(0.0, u.real))
    return abs(z - (a + s * (b - a)))


def _segments_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        v = (b - a).real * (c - a).imag - (b - a).imag * (c - a).real
        if abs(v) < 1e-14:
            return 0
        return 1 if v > 0 else -1

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    def on(a, b, c):
        return (
            orient(a, b, c) == 0
            and min(a.real, b.real) - 1e-14 <= c.real <= max(a.real, b.real) + 1e-14
            and min(a.imag, b.imag) - 1e-14 <= c.imag <= max(a.imag, b.imag) + 1e-14
        )
    return on(p1, p2, p3) or on(p1, p2, p4) or on(p3, p4, p1) or on(p3, p4, p2)


@dataclass(frozen=True)
class SimpleDomain:
    """Region kept away from the singular set, inside the plane cut along one
    ray per singular point."""

    sigma: SingularSet
    ray_directions: tuple[complex, ...]
    region: Disc | Polygon
    rho: float
    relaxed_bounds: bool = False


def simple_domain(
    sigma: SingularSet,
    ray_directions,
    region,
    rho: float,
    relaxed_bounds: bool = False,
) -> SimpleDomain:
    """Validated constructor; see the class invariants."""
    if rho <= 0:
        raise UsageError("rho must be positive")
    pts = sigma.points()
    if len(ray_directions) != len(pts):
        raise InvalidRays("one ray direction per singular point is required")
    dirs = []
    for u in ray_directions:
        u = complex(u)
        if u == 0:
            raise InvalidRays("zero ray direction")
        dirs.append(u / abs(u))
    xmin, xmax, ymin, ymax = region.bbox()
    extent = max(abs(xmin), abs(xmax), abs(ymin), abs(ymax)) + max(
        (abs(p) for p in pts), default=0.0
    )
    span = 1000.0 * (extent + 1.0)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if _segments_intersect(
                pts[i], pts[i] + dirs[i] * span, pts[j], pts[j] + dirs[j] * span
            ):
                raise InvalidRays(f"rays {i} and {j} intersect")
    for i, p in enumerate(pts):
        a, b = p, p + dirs[i] * span
        if isinstance(region, Disc):
            if _dist_point_segment(region.center, a, b) <= region.radius:
                raise InvalidRays(f"ray {i} meets the region")
        else:
            n = len(region.vertices)
            for k in range(n):
                if _segments_intersect(a, b, region.vertices[k], region.vertices[(k + 1) % n]):
                    raise InvalidRays(f"ray {i} meets the region")
            if region._contains(a):
                raise InvalidRays(f"ray {i} starts inside the region")
    for p in pts:
        if region.dist_to_point(p) < rho:
            raise InfeasibleClearance(
                f"region is closer than rho = {rho} to the singular point {p}"
            )
    if not relaxed_bounds and region.max_abs() > 1.0 + 1e-12:
        raise UsageError(
            "region exceeds the closed unit disc; pass relaxed_bounds to allow this"
        )
    return SimpleDomain(
        sigma=sigma,
        ray_directions=tuple(dirs),
        region=region,
        rho=rho,
        relaxed_bounds=relaxed_bounds,
    )


@dataclass(frozen=True)
class SegmentSet:
    segments: tuple[tuple[complex, complex], ...]
    clearance_to_poles: float
    provenance: dict

    def total_length(self) -> float:
        return sum(abs(b - a) for a, b in self.segments)


def _free_value(span_lo, span_hi, blocked, prefer_lo=True):
    """Smallest value in [span_lo, span_hi] outside all blocked open intervals."""
    events = sorted((max(lo, span_lo), min(hi, span_hi)) for lo, hi in blocked if hi > span_lo and lo < span_hi)
    cur = span_lo
    for lo, hi in events:
        if cur < lo:
            return cur
        cur = max(cur, hi)
    if cur <= span_hi:
        return cur
    return None


def decompose_simple_domain(dom: SimpleDomain, poles: list[complex]) -> SegmentSet:
    """Boundary segments of a polygonal cover of the region inside the cut
    plane. Every segment keeps distance rho/(4 |Z|) from the poles and rho/2
    from the outer frame; blind-alley corridors around each ray let the cover
    hug the cuts from both sides.

    The corridors have half-width rho/(4 |Z|) (widened only to clear poles),
    so when the region itself approaches a cut closer than that, the strip
    along the cut is excluded from the covered area: the resulting bound
    counts zeros in the region minus those strips.
    """
    rho = dom.rho
    poles = list(poles)
    for p in dom.sigma.points():
        if not any(abs(p - q) <= 1e-9 * (1 + abs(p)) for q in poles):
            poles.append(p)
    nz = max(1, len(poles))
    delta = rho / (CLEARANCE_CONSTANT * nz)
    xmin, xmax, ymin, ymax = dom.region.bbox()

    # rectangle sides, one offset each, clearing all poles
    def side_offset(axis: str, direction: int):
        span_lo, span_hi = rho / 4.0, 7.0 * rho / 8.0
        blocked = []
        for p in poles:
            coord = p.real if axis == "x" else p.imag
            base = {
                ("x", +1): xmax,
                ("x", -1): xmin,
                ("y", +1): ymax,
                ("y", -1): ymin,
            }[(axis, direction)]
            c = (coord - base) * direction
            blocked.append((c - delta, c + delta))
        v = _free_value(span_lo, span_hi, blocked)
        if v is None:
            raise InfeasibleClearance(
                "cannot place the covering rectangle clear of the poles"
            )
        return v

    e_r = side_offset("x", +1)
    e_l = side_offset("x", -1)
    e_t = side_offset("y", +1)
    e_b = side_offset("y", -1)
    X0, X1 = xmin - e_l, xmax + e_r
    Y0, Y1 = ymin - e_b, ymax + e_t
    frame = (X0 - rho / 2, X1 + rho / 2, Y0 - rho / 2, Y1 + rho / 2)

    corners = [complex(X0, Y0), complex(X1, Y0), complex(X1, Y1), complex(X0, Y1)]
    sides = [(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    side_cuts: list[list[tuple[float, float]]] = [[], [], [], []]
    segments: list[tuple[complex, complex]] = []

    pts = dom.sigma.points()
    for i, s in enumerate(pts):
        u = dom.ray_directions[i]
        hit = _clip_ray_to_rect(s, u, X0, X1, Y0, Y1)
        if hit is None:
            continue
        tau0, tau1 = hit
        # wall half-width: the nearest pole is the ray's own endpoint at
        # exactly the offset, so anything from delta up is admissible
        span_lo = delta * (1.0 + 1e-6)
        span_hi = max(rho / 4.0, span_lo * 1.25)
        blocked = []
        for p in poles:
            if abs(p - s) < 1e-12:
                continue
            w = (p - s) / u
            if -rho <= w.real <= tau1 + rho:
                dline = abs(w.imag)
                blocked.append((dline - delta, dline + delta))
        w = _free_value(span_lo, span_hi, blocked)
        if w is None:
            raise InfeasibleClearance("cannot route a corridor clear of the poles")
        nvec = u * 1j
        start_tau = tau0 if tau0 > 0 else -w  # cap behind the singular point
        for sgn in (+1, -1):
            a = s + u * start_tau + sgn * w * nvec
            b = s + u * tau1 + sgn * w * nvec
            seg = _clip_segment_to_rect(a, b, X0, X1, Y0, Y1)
            if seg is not None:
                segments.append(seg)
        if tau0 <= 0:
            cap_a = s + u * start_tau + w * nvec
            cap_b = s + u * start_tau - w * nvec
            segments.append((cap_a, cap_b))
        # record the crossing on the rectangle side where the corridor exits
        exit_pt = s + u * tau1
        for k, (a, b) in enumerate(sides):
            proj = _project_on_segment(exit_pt, a, b)
            if proj is not None and abs(exit_pt - (a + proj * (b - a))) < 1e-9 * (1 + abs(exit_pt)):
                half = w / abs(b - a)
                side_cuts[k].append((proj - half, proj + half))
        if tau0 > 0:
            entry_pt = s + u * tau0
            for k, (a, b) in enumerate(sides):
                proj = _project_on_segment(entry_pt, a, b)
                if proj is not None and abs(entry_pt - (a + proj * (b - a))) < 1e-9 * (1 + abs(entry_pt)):
                    half = w / abs(b - a)
                    side_cuts[k].append((proj - half, proj + half))

    for k, (a, b) in enumerate(sides):
        cuts = sorted(side_cuts[k])
        cur = 0.0
        for lo, hi in cuts:
            if lo > cur:
                segments.append((a + cur * (b - a), a + lo * (b - a)))
            cur = max(cur, hi)
        if cur < 1.0:
            segments.append((a + cur * (b - a), a + 1.0 * (b - a)))

    cap = SEGMENT_COUNT_CONSTANT * max(1, len(pts) ** 2)
    if len(segments) > cap:
        raise AssertionError(f"segment count {len(segments)} exceeds the cap {cap}")
    min_clear = float("inf")
    for a, b in segments:
        for p in poles:
            min_clear = min(min_clear, _dist_point_segment(p, a, b))
    if poles and min_clear < delta * (1 - 1e-9):
        raise AssertionError(
            f"segment clearance {min_clear:.3e} below rho/(4|Z|) = {delta:.3e}"
        )
    fx0, fx1, fy0, fy1 = frame
    for a, b in segments:
        for z in (a, b):
            dframe = min(z.real - fx0, fx1 - z.real, z.imag - fy0, fy1 - z.imag)
            if dframe < rho / 2 - 1e-12:
                raise AssertionError("segment too close to the outer frame")
    return SegmentSet(
        segments=tuple(segments),
        clearance_to_poles=min_clear if poles else float("inf"),
        provenance={
            "rectangle": (X0, X1, Y0, Y1),
            "frame": frame,
            "count_cap_constant": SEGMENT_COUNT_CONSTANT,
            "clearance_constant": CLEARANCE_CONSTANT,
            "pole_count": len(poles),
            "clearance_required": delta,
        },
    )


def _clip_ray_to_rect(s: complex, u: complex, X0, X1, Y0, Y1):
    """Parameter range [tau0, tau1] of {s + tau u : tau >= 0} inside the box."""
    t0, t1 = 0.0, float("inf")
    for comp, lo, hi in (("re", X0, X1), ("im", Y0, Y1)):
        sc = s.real if comp == "re" else s.imag
        uc = u.real if comp == "re" else u.imag
        if abs(uc) < 1e-15:
            if sc < lo or sc > hi:
                return None
            continue
        ta, tb = (lo - sc) / uc, (hi - sc) / uc
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
    if not (t0 < t1) or t1 <= 0 or math.isinf(t1):
        return None
    return (t0 if t0 > 0 else 0.0, t1)


def _clip_segment_to_rect(a: complex, b: complex, X0, X1, Y0, Y1):
    t0, t1 = 0.0, 1.0
    d = b - a
    for comp, lo, hi in (("re", X0, X1), ("im", Y0, Y1)):
        sc = a.real if comp == "re" else a.imag
        uc = d.real if comp == "re" else d.imag
        if abs(uc) < 1e-15:
            if sc < lo - 1e-12 or sc > hi + 1e-12:
                return None
            continue
        ta, tb = (lo - sc) / uc, (hi - sc) / uc
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
    if t0 >= t1:
        return None
    return (a + t0 * d, a + t1 * d)


def _project_on_segment(z: complex, a: complex, b: complex):
    u = (z - a) / (b - a)
    if -1e-9 <= u.real <= 1 + 1e-9 and abs(u.imag) * abs(b - a) < 1e-7 * (1 + abs(z)):
        return min(1.0, max(0.0, u.real))
    return None


# -- rigorous coefficient suprema ------------------------------------------------


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


# A complex box is a 4-tuple (re_lo, re_hi, im_lo, im_hi) of floats; every
# arithmetic step rounds outward by one ulp per operation, which dominates the
# true rounding error and keeps the bounds rigorous.


def _coeff_boxes(p) -> list[tuple]:
    out = []
    for c in p.univariate_coeffs("t"):
        if c == 0:
            out.append((0.0, 0.0, 0.0, 0.0))
        else:
            f = float(c)
            out.append((_down(f), _up(f), 0.0, 0.0))
    return out


def _box_mul(a: tuple, b: tuple) -> tuple:
    arl, arh, ail, aih = a
    brl, brh, bil, bih = b
    p1 = (arl * brl, arl * brh, arh * brl, arh * brh)
    p2 = (ail * bil, ail * bih, aih * bil, aih * bih)
    q1 = (arl * bil, arl * bih, arh * bil, arh * bih)
    q2 = (ail * brl, ail * brh, aih * brl, aih * brh)
    re_lo = _down(_down(min(p1)) - _up(max(p2)))
    re_hi = _up(_up(max(p1)) - _down(min(p2)))
    im_lo = _down(_down(min(q1)) + _down(min(q2)))
    im_hi = _up(_up(max(q1)) + _up(max(q2)))
    return (re_lo, re_hi, im_lo, im_hi)


def _eval_box(coeffs: list[tuple], box: tuple) -> tuple:
    rl, rh, il, ih = 0.0, 0.0, 0.0, 0.0
    for crl, crh, cil, cih in reversed(coeffs):
        rl, rh, il, ih = _box_mul((rl, rh, il, ih), box)
        rl = _down(rl + crl)
        rh = _up(rh + crh)
        il = _down(il + cil)
        ih = _up(ih + cih)
    return (rl, rh, il, ih)


def _box_abs_bounds(box: tuple) -> tuple:
    rl, rh, il, ih = box
    alo_r = 0.0 if rl <= 0.0 <= rh else min(abs(rl), abs(rh))
    alo_i = 0.0 if il <= 0.0 <= ih else min(abs(il), abs(ih))
    ahi_r = max(abs(rl), abs(rh))
    ahi_i = max(abs(il), abs(ih))
    return max(0.0, _down(math.hypot(alo_r, alo_i))), _up(math.hypot(ahi_r, ahi_i))


def _t_box(A: complex, B: complex, s0: float, s1: float) -> tuple:
    za = A + s0 * (B - A)
    zb = A + s1 * (B - A)
    return (
        _down(min(za.real, zb.real)),
        _up(max(za.real, zb.real)),
        _down(min(za.imag, zb.imag)),
        _up(max(za.imag, zb.imag)),
    )


def coefficient_sup(ode: ScalarODE, segs: SegmentSet, tol: float = 1e-6) -> float:
    """Rigorous upper bound for max over segments and coefficients of
    |coefficient(t)|, by interval subdivision until the enclosure is within
    the relative tolerance. The returned value always dominates the true
    supremum."""
    for a, b in segs.segments:
        for cv in ode.pole_set:
            if _dist_point_segment(cv.value, a, b) <= max(cv.radius, 1e-12):
                raise PoleOnSegment(
                    f"segment ({a}, {b}) touches the pole enclosure at {cv.value}"
                )
    items = []
    best_lower = 0.0
    counter = 0
    for c in ode.coeffs:
        if c.is_zero:
            continue
        nboxes = _coeff_boxes(c.num)
        dboxes = _coeff_boxes(c.den)
        for a, b in segs.segments:
            for s0, s1 in ((0.0, 0.5), (0.5, 1.0)):
                up, low = _ratio_bounds(nboxes, dboxes, a, b, s0, s1)
                best_lower = max(best_lower, low)
                heapq.heappush(items, (-up, counter, s0, s1, a, b, nboxes, dboxes))
                counter += 1
    if not items:
        return 0.0
    budget = 500_000
    while budget:
        budget -= 1
        neg_up, _cnt, s0, s1, a, b, nboxes, dboxes = items[0]
        up = -neg_up
        if up <= best_lower * (1 + tol) or up <= 1e-300:
            return up
        heapq.heappop(items)
        mid = (s0 + s1) / 2
        if s1 - s0 < 1e-14:
            raise PoleOnSegment("subdivision collapsed onto a pole of a coefficient")
        for lo, hi in ((s0, mid), (mid, s1)):
            u, low = _ratio_bounds(nboxes, dboxes, a, b, lo, hi)
            best_lower = max(best_lower, low)
            heapq.heappush(items, (-u, counter, lo, hi, a, b, nboxes, dboxes))
            counter += 1
    raise NumericFailure("coefficient supremum subdivision budget exhausted")


def _ratio_bounds(nboxes, dboxes, a, b, s0, s1):
    box = _t_box(a, b, s0, s1)
    nlo, nhi = _box_abs_bounds(_eval_box(nboxes, box))
    dlo, dhi = _box_abs_bounds(_eval_box(dboxes, box))
    upper = float("inf") if dlo <= 0.0 else _up(nhi / dlo)
    smid = (s0 + s1) / 2
    t = a + smid * (b - a)
    nv = _eval_point(nboxes, t)
    dv = _eval_point(dboxes, t)
    lower = abs(nv) / abs(dv) if dv != 0 else 0.0
    return upper, lower


def _eval_point(boxes: list[tuple], t: complex) -> complex:
    acc = 0j
    for rl, rh, il, ih in reversed(boxes):
        acc = acc * t + complex((rl + rh) / 2, (il + ih) / 2)
    return acc


# -- variation-of-argument bound ---------------------------------------------------


def yakovenko_varbound(n: int, l: float, C: float) -> float:
    """pi (n+1) (1 + l C / log(3/2)) with C clamped up to 1."""
    if n < 1:
        raise UsageError("order must be at least 1")
    if l < 0:
        raise UsageError("segment length cannot be negative")
    C = max(C, 1.0)
    return math.pi * (n + 1) * (1.0 + l * C / LOG32)


# -- argument principle --------------------------------------------------------------


def winding_count(
    values,
    refine=None,
    params=None,
    max_refine: int = 28,
    zero_floor: float = 1e-280,
) -> int:
    """Winding number of a sampled nonvanishing closed path around 0.

    Phase increments are summed and the sampling is densified through the
    callback until every consecutive increment is below pi/2; the total over
    2 pi must land within 0.25 of an integer. refine(s) evaluates the path at
    an arbitrary parameter in [0, 1)."""
    vals = [complex(v) for v in values]
    if params is None:
        params = [k / len(vals) for k in range(len(vals))]
    params = list(params)
    if len(params) != len(vals):
        raise UsageError("params and values must align")
    for _round in range(max_refine + 1):
        for v in vals:
            if abs(v) < zero_floor:
                raise ZeroOnContour("sample magnitude below the zero floor")
        deltas = []
        bad = []
        n = len(vals)
        for k in range(n):
            z0, z1 = vals[k], vals[(k + 1) % n]
            d = cmath.phase(z1 / z0)
            deltas.append(d)
            if abs(d) >= math.pi / 2:
                bad.append(k)
        if not bad:
            total = math.fsum(deltas)
            w = total / (2 * math.pi)
            k = round(w)
            if abs(w - k) >= 0.25:
                raise Inconclusive(f"winding total {w} not close to an integer")
            return int(k)
        if refine is None or _round == max_refine:
            raise Inconclusive("phase increments stay above pi/2 after refinement")
        news = []
        for k in bad:
            s0 = params[k]
            s1 = params[(k + 1) % n]
            if (k + 1) % n == 0:
                s1 += 1.0
            news.append(((s0 + s1) / 2) % 1.0)
        merged = sorted(set(params) | set(news))
        vals = [complex(refine(s)) if s not in set(params) else vals[params.index(s)] for s in merged]
        params = merged
    raise Inconclusive("refinement cap reached")


# -- asymptotic calculators -----------------------------------------------------------


_EXACT_DIGIT_CAP = 20_000


def _log_entry(base_num: int, base_den: int, exponent, lead: int = 1) -> dict:
    """log10 and exact value (when printable) of lead * (num/den)^exponent."""
    with mpmath.workprec(250):
        lb = mpmath.log10(mpmath.mpf(base_num) / mpmath.mpf(base_den))
        e = mpmath.mpf(exponent)
        log10 = e * lb + (mpmath.log10(lead) if lead != 1 else 0)
        loglog = mpmath.log10(log10) if log10 > 0 else None
        exact = None
        if (
            base_den == 1
            and isinstance(exponent, int)
            and float(log10) <= _EXACT_DIGIT_CAP
        ):
            exact = str(lead * base_num**exponent)
        return {
            "exact": exact,
            "log10": float(log10),
            "log10_log10": float(loglog) if loglog is not None else None,
        }


def asymptotic_bound_calculators(
    d: int,
    rho,
    n: int | None = None,
    M=None,
    p: int | None = None,
    constants: dict | None = None,
) -> dict:
    """Closed-form theoretical bounds; reporting only, never a computed count.

    Two shapes are evaluated: the degree-only double exponential
    (2/rho)^(2^(d^c)) and the parametric n (M/rho)^(d^(c_p p^3)) for integer
    coefficient data of degree d and height M with p parameters. The
    user-supplied constants c and c_p stand in for the universal constants.
    Values are exact big integers when printable, else base-10 logarithms
    (and their logarithms) at better than 1e-9 relative accuracy.
    """
    constants = dict(constants or {})
    c = constants.get("c", 1)
    c_p = constants.get("c_p", 1)
    if isinstance(c, float) and c.is_integer():
        c = int(c)
    if isinstance(c_p, float) and c_p.is_integer():
        c_p = int(c_p)
    rho = Fraction(rho) if not isinstance(rho, Fraction) else rho
    if not (0 < rho < 1):
        raise InvalidRho(f"rho must lie in (0, 1), got {rho}")
    if d < 2:
        raise UsageError("degree must be at least 2")
    base = Fraction(2) / rho
    out = {}
    e_inner = d**c
    if isinstance(e_inner, int) and e_inner <= 10**6:
        exp1 = 2**e_inner
    else:
        with mpmath.workprec(250):
            exp1 = mpmath.power(2, e_inner)
    out["degree_double_exponential"] = {
        "formula": "(2/rho)^(2^(d^c))",
        "inputs": {"d": d, "rho": str(rho), "c": c},
        "note": "theoretical upper bound, not a computed count",
        **_log_entry(base.numerator, base.denominator, exp1),
    }
    if n is not None and M is not None and p is not None:
        Mq = Fraction(M)
        ratio = Mq / rho
        e2_inner = c_p * p**3
        if isinstance(e2_inner, int) and e2_inner * math.log10(d) <= 10**6:
            exp2 = d**e2_inner
        else:
            with mpmath.workprec(250):
                exp2 = mpmath.power(d, e2_inner)
        entry = _log_entry(ratio.numerator, ratio.denominator, exp2, lead=int(n))
        out["parametric_height"] = {
            "formula": "n*(M/rho)^(d^(c_p*p^3))",
            "inputs": {"d": d, "rho": str(rho), "n": n, "M": str(Mq), "p": p, "c_p": c_p},
            "note": "theoretical upper bound, not a computed count",
            **entry,
        }
    return out


# -- the bound pipeline ----------------------------------------------------------------


@dataclass(frozen=True)
class ZeroBoundReport:
    per_segment_varbound: tuple[float, ...]
    total_bound: int
    numeric_count: int | None
    calculators: dict
    segment_count: int
    clearance_to_poles: float


def zero_count_bound(
    ode: ScalarODE,
    dom: SimpleDomain,
    tol: float = 1e-6,
    numeric_fn=None,
    numeric_samples: int = 64,
    calculator_inputs: dict | None = None,
) -> ZeroBoundReport:
    """Upper bound for the number of zeros of solutions in the domain.

    Decomposes the domain, takes a rigorous coefficient bound per segment and
    sums the variation-of-argument bounds over 2 pi. When `numeric_fn`
    (a callable on the region boundary, s in [0,1)) is given, the argument
    principle supplies numeric_count as well.
    """
    poles = [cv.value for cv in ode.pole_set]
    segs = decompose_simple_domain(dom, poles)
    varbounds = []
    for seg in segs.segments:
        single = SegmentSet(
            segments=(seg,), clearance_to_poles=segs.clearance_to_poles, provenance=segs.provenance
        )
        C = coefficient_sup(ode, single, tol)
        varbounds.append(yakovenko_varbound(ode.order, abs(seg[1] - seg[0]), C))
    total = int(math.floor(math.fsum(varbounds) / (2 * math.pi)))
    numeric = None
    if numeric_fn is not None:
        ss = [k / numeric_samples for k in range(numeric_samples)]
        numeric = winding_count([numeric_fn(s) for s in ss], refine=numeric_fn, params=ss)
    ci = dict(calculator_inputs or {})
    d_guess = ci.get("d", 1 + max(1, round(math.sqrt(ode.order))))
    M = ci.get("M")
    if M is None:
        M = _coefficient_height(ode)
    p_guess = ci.get("p", (d_guess + 1) * (d_guess + 2) // 2)
    calculators = asymptotic_bound_calculators(
        d=d_guess,
        rho=Fraction(dom.rho).limit_denominator(10**9),
        n=ode.order,
        M=M,
        p=p_guess,
        constants=ci.get("constants", {"c": 1, "c_p": 1}),
    )
    return ZeroBoundReport(
        per_segment_varbound=tuple(varbounds),
        total_bound=total,
        numeric_count=numeric,
        calculators=calculators,
        segment_count=len(segs.segments),
        clearance_to_poles=segs.clearance_to_poles,
    )


def _coefficient_height(ode: ScalarODE) -> int:
    h = 2
    for c in ode.coeffs:
        for poly in (c.num, c.den):
            den = 1
            for v in poly.terms.values():
                den = den * v.denominator // math.gcd(den, v.denominator)
            for v in poly.terms.values():
                h = max(h, abs(int(v * den)))
    return h
