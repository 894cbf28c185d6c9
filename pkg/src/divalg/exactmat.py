"""Dense exact rational matrices and integer lattice normal forms.

Everything in this module is exact.  Entries are kept as
`fractions.Fraction` (Python ints are accepted everywhere and promoted),
determinants of integral matrices use fraction-free Bareiss elimination,
and the Hermite / Smith reductions track unimodular transforms so that a
caller can replay the reduction and recover the input matrix exactly.

Conventions
-----------
Lattices are column spans: a basis matrix has one lattice generator per
column.  The Hermite normal form is therefore the column-operation form,
``M @ U = H`` with ``U`` unimodular and ``H`` lower triangular with
positive pivots (entries in a pivot row left of the pivot are reduced
into ``[0, pivot)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Scalar = int | Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Mat:
    """Immutable dense matrix with exact rational entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        data = tuple(tuple(_frac(e) for e in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", width)

    def __setattr__(self, *args):
        raise AttributeError("Mat is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, entries: Sequence[Scalar]) -> "Mat":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Scalar]]) -> "Mat":
        nrows = len(cols[0])
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(nrows)])

    # -- accessors -----------------------------------------------------

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for r in self.rows for e in r)

    def is_zero(self) -> bool:
        return all(e == 0 for r in self.rows for e in r)

    # -- algebra -------------------------------------------------------

    def transpose(self) -> "Mat":
        return Mat([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return Mat([[-a for a in r] for r in self.rows])

    def scale(self, s: Scalar) -> "Mat":
        s = _frac(s)
        return Mat([[s * a for a in r] for r in self.rows])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ocols = other.ncols
        out = []
        for r in self.rows:
            out.append(
                [sum(r[k] * other.rows[k][j] for k in range(self.ncols)) for j in range(ocols)]
            )
        return Mat(out)

    def matvec(self, v: Sequence[Scalar]) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        vv = [_frac(x) for x in v]
        return tuple(sum(r[k] * vv[k] for k in range(self.ncols)) for r in self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in r) for r in self.rows)
        return f"Mat[{body}]"

    # -- exact linear algebra -------------------------------------------

    def det(self) -> Fraction:
        """Exact determinant (Bareiss on a denominator-cleared copy)."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        scale = Fraction(1)
        rows = []
        for r in self.rows:
            d = lcm(*(e.denominator for e in r)) if self.ncols > 1 else r[0].denominator
            scale *= d
            rows.append([int(e * d) for e in r])
        return Fraction(_int_det_bareiss(rows), 1) / scale

    def inverse(self) -> "Mat":
        """Exact inverse via Gauss-Jordan; raises on singular input."""
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                raise ValueError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            inv = Fraction(1) / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return Mat([row[n:] for row in a])

    def solve(self, rhs: Sequence[Scalar]) -> tuple[Fraction, ...]:
        """Solve ``self @ x = rhs`` exactly (square nonsingular systems)."""
        return self.inverse().matvec(rhs)

    def rank(self) -> int:
        a = [list(r) for r in self.rows]
        rank = 0
        for col in range(self.ncols):
            piv = next((r for r in range(rank, self.nrows) if a[r][col] != 0), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = Fraction(1) / a[rank][col]
            a[rank] = [x * inv for x in a[rank]]
            for r in range(self.nrows):
                if r != rank and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
            rank += 1
        return rank


def _int_det_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (destructive)."""
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if rows[r][k] != 0), None)
            if piv is None:
                return 0
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        pkk = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            for j in range(k + 1, n):
                rows[i][j] = (pkk * rows[i][j] - rik * rows[k][j]) // prev
            rows[i][k] = 0
        prev = pkk
    return sign * rows[n - 1][n - 1]


@dataclass(frozen=True)
class NormalFormResult:
    """A normal form together with the witnessing unimodular transform(s).

    For the Hermite form ``transforms`` is ``(U,)`` with ``M @ U = matrix``;
    for the Smith form it is ``(U, V)`` with ``U @ M @ V = matrix``.  All
    transforms have determinant +-1, so the reduction can be replayed and
    inverted exactly.
    """

    matrix: Mat
    transforms: tuple[Mat, ...]
    rank: int


def _require_integral(m: Mat, what: str) -> list[list[int]]:
    if not m.is_integral():
        raise ValueError(f"{what} requires an integer matrix")
    return [[int(e) for e in r] for r in m.rows]


def hnf(m: Mat) -> NormalFormResult:
    """Column-style Hermite normal form.

    Returns ``H`` lower triangular (staircase for deficient rank) with
    positive pivots and reduced pivot rows, plus unimodular ``U`` with
    ``m @ U = H``.

    Raises:
        ValueError: on the zero matrix ("degenerate lattice") or
            non-integral input.
    """
    work = _require_integral(m, "hnf")
    if all(e == 0 for r in work for e in r):
        raise ValueError("degenerate lattice: zero matrix has no Hermite form")
    nrows, ncols = m.nrows, m.ncols
    cols = [[work[i][j] for i in range(nrows)] for j in range(ncols)]
    ucols = [[int(i == j) for i in range(ncols)] for j in range(ncols)]

    def combine(dst: int, src: int, q: int) -> None:
        # column_dst -= q * column_src
        cd, cs = cols[dst], cols[src]
        for i in range(nrows):
            cd[i] -= q * cs[i]
        ud, us = ucols[dst], ucols[src]
        for i in range(ncols):
            ud[i] -= q * us[i]

    pivot_col = 0
    for r in range(nrows):
        if pivot_col >= ncols:
            break
        while True:
            nz = [j for j in range(pivot_col, ncols) if cols[j][r] != 0]
            if len(nz) <= 1:
                break
            jmin = min(nz, key=lambda j: abs(cols[j][r]))
            for j in nz:
                if j != jmin:
                    combine(j, jmin, cols[j][r] // cols[jmin][r])
        nz = [j for j in range(pivot_col, ncols) if cols[j][r] != 0]
        if not nz:
            continue
        j = nz[0]
        if j != pivot_col:
            cols[j], cols[pivot_col] = cols[pivot_col], cols[j]
            ucols[j], ucols[pivot_col] = ucols[pivot_col], ucols[j]
        if cols[pivot_col][r] < 0:
            cols[pivot_col] = [-x for x in cols[pivot_col]]
            ucols[pivot_col] = [-x for x in ucols[pivot_col]]
        piv = cols[pivot_col][r]
        for j2 in range(pivot_col):
            q = cols[j2][r] // piv
            if q:
                combine(j2, pivot_col, q)
        pivot_col += 1

    h = Mat.from_columns(cols)
    u = Mat.from_columns(ucols)
    return NormalFormResult(matrix=h, transforms=(u,), rank=pivot_col)


def snf(m: Mat) -> NormalFormResult:
    """Smith normal form of a square nonsingular integer matrix.

    Returns diagonal ``S`` with positive entries ``d_1 | d_2 | ... | d_n``
    and unimodular ``(U, V)`` with ``U @ m @ V = S``.
    """
    work = _require_integral(m, "snf")
    if m.nrows != m.ncols:
        raise ValueError("snf requires a square matrix")
    n = m.nrows
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(dst, src, q):
        for j in range(n):
            work[dst][j] -= q * work[src][j]
            u[dst][j] -= q * u[src][j]

    def col_op(dst, src, q):
        for i in range(n):
            work[i][dst] -= q * work[i][src]
            v[i][dst] -= q * v[i][src]

    def swap_rows(i1, i2):
        work[i1], work[i2] = work[i2], work[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        for i in range(n):
            work[i][j1], work[i][j2] = work[i][j2], work[i][j1]
            v[i][j1], v[i][j2] = v[i][j2], v[i][j1]

    for t in range(n):
        while True:
            entries = [
                (abs(work[i][j]), i, j)
                for i in range(t, n)
                for j in range(t, n)
                if work[i][j] != 0
            ]
            if not entries:
                raise ValueError("singular matrix has no Smith form here")
            _, pi, pj = min(entries)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            piv = work[t][t]
            done = True
            for i in range(t + 1, n):
                if work[i][t] != 0:
                    row_op(i, t, work[i][t] // piv)
                    done = done and work[i][t] == 0
            for j in range(t + 1, n):
                if work[t][j] != 0:
                    col_op(j, t, work[t][j] // piv)
                    done = done and work[t][j] == 0
            if not done:
                continue
            piv = work[t][t]
            bad = next(
                (
                    (i, j)
                    for i in range(t + 1, n)
                    for j in range(t + 1, n)
                    if work[i][j] % piv != 0
                ),
                None,
            )
            if bad is None:
                break
            # fold the offending row into row t to shrink the pivot
            bi = bad[0]
            for j in range(n):
                work[t][j] += work[bi][j]
                u[t][j] += u[bi][j]
        if work[t][t] < 0:
            for j in range(n):
                work[t][j] = -work[t][j]
                u[t][j] = -u[t][j]

    s = Mat(work)
    return NormalFormResult(matrix=s, transforms=(Mat(u), Mat(v)), rank=n)


def lattice_index(sup_basis: Mat, sub_basis: Mat) -> int:
    """Index of the column span of ``sub_basis`` inside that of ``sup_basis``.

    Containment is checked by exact solve: the change of basis
    ``sup_basis^-1 @ sub_basis`` must be integral.  The index is the
    absolute determinant of that change of basis.
    """
    if sup_basis.shape != sub_basis.shape or not sup_basis.is_square():
        raise ValueError("bases must be square matrices of equal size")
    if sup_basis.det() == 0 or sub_basis.det() == 0:
        raise ValueError("rank-deficient basis")
    change = sup_basis.inverse() @ sub_basis
    if not change.is_integral():
        raise ValueError("not a sublattice: change of basis is not integral")
    d = change.det()
    return abs(int(d))


def kernel_columns(m: Mat) -> list[tuple[int, ...]]:
    """Integer basis of the kernel lattice ``{x : m @ x = 0}``.

    Read off from the Hermite reduction: zero columns of ``H`` correspond
    to kernel columns of the transform.
    """
    res = hnf(m)
    h, u = res.matrix, res.transforms[0]
    out = []
    for j in range(h.ncols):
        if all(h.entry(i, j) == 0 for i in range(h.nrows)):
            out.append(tuple(int(x) for x in u.column(j)))
    return out
