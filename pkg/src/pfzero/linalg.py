"""Exact linear algebra: fraction-free elimination, polynomial matrices,
rational functions in t.

Two solver engines live here. `exact_linear_solve` is the dense Bareiss
elimination over rationals used for small systems. `solve_sparse_exact` is an
integer cross-multiplication eliminator with row-content stripping for the
large, very sparse coefficient-matching systems that the decomposition
routines produce; it is exact and deterministic but chooses pivots by fill,
not by a fixed column sweep.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZeroPolynomial, Inconsistent
from .poly import MultiPoly, poly_gcd, _bareiss_det_poly


# -- dense Bareiss over Q ------------------------------------------------------


def _to_fraction_rows(M):
    rows = []
    for row in M:
        out = []
        for v in row:
            if isinstance(v, MultiPoly):
                out.append(v.constant_value())
            else:
                out.append(Fraction(v))
        rows.append(out)
    return rows


def exact_linear_solve(M, v: Sequence) -> tuple[list[Fraction], int]:
    """Solve M u = v exactly. Returns (solution, rank).

    Fraction-free Bareiss elimination after clearing denominators, so all
    intermediate entries are integers. Free variables are set to zero, which
    yields the minimal-support solution for the canonical column order.
    Raises Inconsistent when no solution exists.
    """
    rows = _to_fraction_rows(M)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rhs = [Fraction(x) for x in v]
    if len(rhs) != nrows:
        raise ValueError("rhs length mismatch")
    # clear denominators row by row; the system is unchanged
    im = []
    for row, b in zip(rows, rhs):
        den = 1
        for c in list(row) + [b]:
            den = den * c.denominator // math.gcd(den, c.denominator)
        im.append([int(c * den) for c in row] + [int(b * den)])
    # Bareiss forward elimination with partial pivoting by canonical column order
    piv_rows: list[int] = []
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, nrows):
            if im[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            im[r], im[sel] = im[sel], im[r]
        for i in range(r + 1, nrows):
            if all(im[i][j] == 0 for j in range(col, ncols + 1)):
                continue
            for j in range(ncols + 1):
                if j <= col:
                    continue
                im[i][j] = (im[r][col] * im[i][j] - im[i][col] * im[r][j]) // prev
            im[i][col] = 0
        prev = im[r][col]
        piv_rows.append(r)
        piv_cols.append(col)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if any(im[i][j] != 0 for j in range(ncols)):
            raise AssertionError("elimination left unreduced row")
        if im[i][ncols] != 0:
            raise Inconsistent("no solution")
    sol = [Fraction(0)] * ncols
    for k in range(len(piv_cols) - 1, -1, -1):
        i, col = piv_rows[k], piv_cols[k]
        acc = Fraction(im[i][ncols])
        for j in range(col + 1, ncols):
            if im[i][j]:
                acc -= Fraction(im[i][j]) * sol[j]
        sol[col] = acc / im[i][col]
    return sol, len(piv_cols)


def bareiss_determinant(M) -> Fraction:
    """Exact determinant of a rational matrix (fraction-free internally)."""
    rows = _to_fraction_rows(M)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = Fraction(1)
    im = []
    for row in rows:
        d = 1
        for c in row:
            d = d * c.denominator // math.gcd(d, c.denominator)
        den *= d
        im.append([int(c * d) for c in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if im[k][k] == 0:
            for i in range(k + 1, n):
                if im[i][k] != 0:
                    im[k], im[i] = im[i], im[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                im[i][j] = (im[k][k] * im[i][j] - im[i][k] * im[k][j]) // prev
            im[i][k] = 0
        prev = im[k][k]
    return Fraction(sign * im[n - 1][n - 1]) / den


# -- sparse exact solver --------------------------------------------------------

RHS = -1  # column key of the right-hand side inside a sparse row


def _strip_row(row: dict) -> dict:
    g = 0
    for c in row.values():
        g = math.gcd(g, c)
        if g == 1:
            return row
    if g > 1:
        return {j: c // g for j, c in row.items()}
    return row


def solve_sparse_exact(rows: list[dict], ncols: int, col_order=None):
    """Solve a sparse rational system given as rows {col: Fraction, RHS: Fraction}.

    Pivoting prefers sparse rows and sweeps columns in `col_order` (default
    0..ncols-1); unpivoted columns are free and set to zero. Row updates are
    integer cross-multiplications with content stripping, so everything stays
    exact. Returns (solution list, rank). Raises Inconsistent.
    """
    work = []
    for row in rows:
        den = 1
        for c in row.values():
            c = Fraction(c)
            den = den * c.denominator // math.gcd(den, c.denominator)
        introw = {j: int(Fraction(c) * den) for j, c in row.items() if Fraction(c) != 0}
        if introw:
            work.append(_strip_row(introw))
    if col_order is None:
        col_order = range(ncols)
    col_index: dict[int, set[int]] = {}
    for i, row in enumerate(work):
        for j in row:
            if j != RHS:
                col_index.setdefault(j, set()).add(i)
    active = set(range(len(work)))
    pivots: list[tuple[int, int]] = []  # (row id, col)
    for col in col_order:
        cand = [i for i in col_index.get(col, ()) if i in active]
        if not cand:
            continue
        piv = min(cand, key=lambda i: (len(work[i]), i))
        active.discard(piv)
        pr = work[piv]
        pc = pr[col]
        for i in list(col_index.get(col, ())):
            if i == piv or i not in active:
                continue
            ri = work[i]
            f = ri[col]
            new = {}
            for j, c in ri.items():
                new[j] = pc * c
            for j, c in pr.items():
                s = new.get(j, 0) - f * c
                if s:
                    new[j] = s
                elif j in new:
                    del new[j]
            new.pop(col, None)
            new = _strip_row(new)
            # update the column index
            for j in ri:
                if j != RHS and j != col and j not in new:
                    col_index[j].discard(i)
            for j in new:
                if j != RHS:
                    col_index.setdefault(j, set()).add(i)
            col_index[col].discard(i)
            work[i] = new
            if set(new) <= {RHS}:
                if new.get(RHS, 0) != 0:
                    raise Inconsistent("no solution")
                active.discard(i)
        pivots.append((piv, col))
    for i in active:
        row = work[i]
        if set(row) <= {RHS} and row.get(RHS, 0) != 0:
            raise Inconsistent("no solution")
        if any(j != RHS for j in row):
            raise AssertionError("unswept column left nonzero")
    sol = [Fraction(0)] * ncols
    for piv, col in reversed(pivots):
        row = work[piv]
        acc = Fraction(row.get(RHS, 0))
        for j, c in row.items():
            if j in (RHS, col):
                continue
            if sol[j]:
                acc -= c * sol[j]
        sol[col] = acc / row[col]
    return sol, len(pivots)


# -- polynomial matrices ---------------------------------------------------------


class PolyMatrix:
    """Rectangular matrix of MultiPoly entries over a shared variable context."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[MultiPoly]]):
        entries = [list(r) for r in entries]
        if entries:
            w = len(entries[0])
            if any(len(r) != w for r in entries):
                raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", len(entries[0]) if entries else 0)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("PolyMatrix is immutable")

    @staticmethod
    def identity(n: int) -> "PolyMatrix":
        one, zero = MultiPoly.const(1), MultiPoly.zero()
        return PolyMatrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r: int, c: int) -> "PolyMatrix":
        z = MultiPoly.zero()
        return PolyMatrix([[z for _ in range(c)] for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> list[MultiPoly]:
        return list(self.entries[i])

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __add__(self, other):
        return PolyMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other):
        return PolyMatrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = MultiPoly.zero()
                    for k in range(self.cols):
                        a = self.entries[i][k]
                        b = other.entries[k][j]
                        if a.is_zero or b.is_zero:
                            continue
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return PolyMatrix(out)
        return PolyMatrix([[e * other for e in row] for row in self.entries])

    __rmul__ = __mul__

    def scale(self, p: MultiPoly) -> "PolyMatrix":
        return PolyMatrix([[e * p for e in row] for row in self.entries])

    def derive(self, var: str) -> "PolyMatrix":
        return PolyMatrix([[e.derive(var) for e in row] for row in self.entries])

    def max_degree(self) -> int:
        degs = [e.degree() for row in self.entries for e in row]
        return max(degs) if degs else -1

    def determinant(self) -> MultiPoly:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if self.rows == 0:
            return MultiPoly.const(1)
        return _bareiss_det_poly(self.entries)

    def minor(self, drop_row: int, drop_col: int) -> "PolyMatrix":
        return PolyMatrix(
            [
                [e for j, e in enumerate(row) if j != drop_col]
                for i, row in enumerate(self.entries)
                if i != drop_row
            ]
        )

    def adjugate(self) -> "PolyMatrix":
        """Transposed cofactor matrix: adj(M) * M = det(M) * Id, exactly."""
        n = self.rows
        if n != self.cols:
            raise ValueError("adjugate of a non-square matrix")
        if n == 1:
            return PolyMatrix([[MultiPoly.const(1)]])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                c = self.minor(i, j).determinant()
                if (i + j) % 2:
                    c = -c
                out[j][i] = c
        return PolyMatrix(out)


def poly_matrix_rank(rows: list[list[MultiPoly]]) -> int:
    """Exact rank over the fraction field, fraction-free elimination."""
    m = [row[:] for row in rows]
    nr = len(m)
    if nr == 0:
        return 0
    nc = len(m[0])
    prev = MultiPoly.const(1)
    r = 0
    for col in range(nc):
        sel = None
        for i in range(r, nr):
            if not m[i][col].is_zero:
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            m[r], m[sel] = m[sel], m[r]
        for i in range(r + 1, nr):
            for j in range(col + 1, nc):
                num = m[r][col] * m[i][j] - m[i][col] * m[r][j]
                m[i][j] = num.exact_div(prev)
            m[i][col] = MultiPoly.zero()
        prev = m[r][col]
        r += 1
        if r == nr:
            break
    return r


def solve_poly_linear(rows: list[list[MultiPoly]], rhs: list[MultiPoly]) -> list["RatFunc"]:
    """Solve a full-column-rank polynomial system over the rational functions.

    Fraction-free forward elimination, then back substitution in RatFunc
    arithmetic. Raises Inconsistent when the system has no solution.
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    m = [rows[i][:] + [rhs[i]] for i in range(nr)]
    prev = MultiPoly.const(1)
    piv: list[tuple[int, int]] = []
    r = 0
    for col in range(nc):
        sel = None
        for i in range(r, nr):
            if not m[i][col].is_zero:
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            m[r], m[sel] = m[sel], m[r]
        for i in range(r + 1, nr):
            for j in range(col + 1, nc + 1):
                num = m[r][col] * m[i][j] - m[i][col] * m[r][j]
                m[i][j] = num.exact_div(prev)
            m[i][col] = MultiPoly.zero()
        prev = m[r][col]
        piv.append((r, col))
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if all(m[i][j].is_zero for j in range(nc)) and not m[i][nc].is_zero:
            raise Inconsistent("no solution over the rational functions")
    sol: list[RatFunc] = [RatFunc.zero()] * nc
    for k in range(len(piv) - 1, -1, -1):
        i, col = piv[k]
        acc = RatFunc.from_poly(m[i][nc])
        for j in range(col + 1, nc):
            if not m[i][j].is_zero and not sol[j].is_zero:
                acc = acc - RatFunc.from_poly(m[i][j]) * sol[j]
        sol[col] = acc / RatFunc.from_poly(m[i][col])
    return sol


# -- rational functions in t -----------------------------------------------------


class RatFunc:
    """Reduced rational function in t: gcd(num, den) = 1, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly):
        if den.is_zero:
            raise DivisionByZeroPolynomial("denominator is the zero polynomial")
        for p in (num, den):
            if any(v != "t" for v in p.vars):
                raise ValueError("RatFunc components must be polynomials in t only")
        if num.is_zero:
            den = MultiPoly.const(1)
        else:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.leading_coeff()
            if lc != 1:
                num = num * MultiPoly.const(Fraction(1) / lc)
                den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def zero() -> "RatFunc":
        return RatFunc(MultiPoly.zero(), MultiPoly.const(1))

    @staticmethod
    def one() -> "RatFunc":
        return RatFunc(MultiPoly.const(1), MultiPoly.const(1))

    @staticmethod
    def from_poly(p: MultiPoly) -> "RatFunc":
        return RatFunc(p, MultiPoly.const(1))

    @staticmethod
    def from_const(c) -> "RatFunc":
        return RatFunc(MultiPoly.const(c), MultiPoly.const(1))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.from_const(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.from_const(other)
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.from_const(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.from_const(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.from_const(other)
        if other.is_zero:
            raise DivisionByZeroPolynomial("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derive("t") * self.den - self.num * self.den.derive("t"),
            self.den * self.den,
        )

    def eval_complex(self, tval: complex) -> complex:
        den = self.den.eval_complex({"t": tval})
        num = self.num.eval_complex({"t": tval})
        return num / den

    def to_text(self) -> str:
        if self.den == MultiPoly.const(1):
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self):
        return f"RatFunc({self.to_text()!r})"


def ratfunc_normalize(num: MultiPoly, den: MultiPoly) -> RatFunc:
    """Public constructor enforcing the reduced, monic-denominator form."""
    return RatFunc(num, den)


def poly_lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if a.is_zero or b.is_zero:
        return MultiPoly.zero()
    g = poly_gcd(a, b)
    return (a * b).exact_div(g).monic()
