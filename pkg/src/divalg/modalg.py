"""Finite quotient algebras O / p^k O: radicals, unit counts, index reports.

The Jacobson radical over F_p is computed by the standard finite-field
chain of lifted-power trace forms: stage 0 is the radical of the ordinary
trace pairing (which is exact for p larger than the dimension but
degenerates in small characteristic), and each further stage i imposes
tr(lift^(p^i)) / p^i = 0 (mod p).  The result is cross-checked by the
ideal property and by nilpotency of a power, and (on small algebras) by
exhaustive search in the tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmat import Mat
from .orders import Order

UNIT_ENUM_BUDGET = 1 << 24


class BudgetError(RuntimeError):
    """An enumeration exceeded its configured budget."""


@dataclass(frozen=True)
class FiniteAlgebra:
    """Structure constants of a free (Z/p^k)-algebra of finite rank."""

    p: int
    k: int
    rank: int
    table: tuple[tuple[tuple[int, ...], ...], ...]
    one: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @classmethod
    def from_order(cls, order: Order, p: int, k: int) -> "FiniteAlgebra":
        if k < 1:
            raise ValueError("k must be positive")
        m = p**k
        sc = order.structure_constants
        d = order.spec.dim
        table = tuple(
            tuple(tuple(c % m for c in sc[i][j]) for j in range(d)) for i in range(d)
        )
        one = tuple(c % m for c in order.one_coords)
        return cls(p=p, k=k, rank=d, table=table, one=one)

    def mul(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        m = self.modulus
        out = [0] * self.rank
        for i in range(self.rank):
            xi = x[i] % m
            if xi:
                row = self.table[i]
                for j in range(self.rank):
                    yj = y[j] % m
                    if yj:
                        s = xi * yj
                        bm = row[j]
                        for r in range(self.rank):
                            if bm[r]:
                                out[r] = (out[r] + s * bm[r]) % m
        return tuple(out)

    def left_mul_matrix(self, x: Sequence[int]) -> list[list[int]]:
        cols = []
        for j in range(self.rank):
            basis = [0] * self.rank
            basis[j] = 1
            cols.append(self.mul(x, basis))
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def elements(self):
        return itertools.product(range(self.modulus), repeat=self.rank)


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    a = [[e % p for e in r] for r in rows]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] % p), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        inv = pow(a[col][col], -1, p)
        det = (det * a[col][col]) % p
        for r in range(col + 1, n):
            f = (a[r][col] * inv) % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return det % p


def _nullspace_mod_p(rows: list[list[int]], p: int) -> list[tuple[int, ...]]:
    """Basis of the right kernel of a matrix over F_p."""
    if not rows:
        return []
    ncols = len(rows[0])
    a = [[e % p for e in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][col] % p:
                f = a[r][col]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-a[r][fc]) % p
        basis.append(tuple(v))
    return basis


def _lift_pow_trace(mat: list[list[int]], p: int, i: int) -> int:
    """tr(lift(mat)^(p^i)) over Z, entries lifted to {0..p-1}."""
    n = len(mat)
    lifted = [[e % p for e in row] for row in mat]
    power = p**i
    # integer matrix power by squaring
    result = [[int(r == c) for c in range(n)] for r in range(n)]
    base = lifted
    e = power
    while e:
        if e & 1:
            result = [
                [sum(result[r][k] * base[k][c] for k in range(n)) for c in range(n)]
                for r in range(n)
            ]
        e >>= 1
        if e:
            base = [
                [sum(base[r][k] * base[k][c] for k in range(n)) for c in range(n)]
                for r in range(n)
            ]
    return sum(result[r][r] for r in range(n))


@dataclass(frozen=True)
class RadicalReport:
    basis: tuple[tuple[int, ...], ...]
    dimension: int
    nilpotency_power: int
    stages: tuple[int, ...]  # subspace dimension after each stage


def jacobson_radical(alg: FiniteAlgebra) -> RadicalReport:
    """Radical of an F_p-algebra (k must be 1), with consistency checks."""
    if alg.k != 1:
        raise ValueError("radical computation expects a prime modulus")
    p, rank = alg.p, alg.rank
    # current subspace, as F_p coordinate row vectors
    current: list[tuple[int, ...]] = [
        tuple(int(r == j) for r in range(rank)) for j in range(rank)
    ]
    stages = []
    level = 0
    while p**level <= rank:
        if not current:
            stages.append(0)
            level += 1
            continue
        rows = []
        for y in current:
            row = []
            for x in current:
                z = alg.mul(x, y)
                t = _lift_pow_trace(alg.left_mul_matrix(z), p, level)
                q, rem = divmod(t, p**level)
                if rem:
                    raise ArithmeticError("trace-lift divisibility failed; chain misused")
                row.append(q % p)
            rows.append(row)
        combo = _nullspace_mod_p(rows, p)
        current = [
            tuple(sum(c[s] * current[s][r] for s in range(len(current))) % p for r in range(rank))
            for c in combo
        ]
        stages.append(len(current))
        level += 1

    # cross-checks: two-sided ideal and nilpotency of the span
    basis_vectors = [tuple(int(r == j) for r in range(rank)) for j in range(rank)]
    span_rows = list(current)
    for x in current:
        for b in basis_vectors:
            for prod in (alg.mul(x, b), alg.mul(b, x)):
                if _nullspace_membership(span_rows, prod, p) is None:
                    raise ArithmeticError("radical candidate is not an ideal")
    power_span = list(current)
    nilpow = 1
    while power_span:
        nxt = []
        for x in power_span:
            for y in current:
                nxt.append(alg.mul(x, y))
        power_span = _row_space(nxt, p)
        if power_span:
            nilpow += 1
        if nilpow > rank + 1:
            raise ArithmeticError("radical candidate is not nilpotent")
    return RadicalReport(
        basis=tuple(current),
        dimension=len(current),
        nilpotency_power=nilpow,
        stages=tuple(stages),
    )


def _row_space(rows: list, p: int) -> list[tuple[int, ...]]:
    if not rows:
        return []
    ncols = len(rows[0])
    a = [[e % p for e in r] for r in rows]
    out = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][col] % p:
                f = a[r][col]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return [tuple(a[r]) for r in range(rank)]


def _nullspace_membership(span: list, vec, p: int):
    """Return coefficients expressing vec in the row span, or None."""
    if all(v % p == 0 for v in vec):
        return ()
    if not span:
        return None
    rows = [list(r) for r in span]
    aug = [row + [v] for row, v in zip([list(c) for c in zip(*rows)], vec)]
    # solve span^T * c = vec over F_p
    coeffs = _solve_mod_p(aug, p)
    return coeffs


def _solve_mod_p(aug: list[list[int]], p: int):
    rows = [[e % p for e in r] for r in aug]
    ncols = len(rows[0]) - 1
    rank = 0
    pivots = []
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][-1] % p:
            return None
    sol = [0] * ncols
    for r, col in enumerate(pivots):
        sol[col] = rows[r][-1] % p
    return tuple(sol)


def radical_bruteforce(alg: FiniteAlgebra, budget: int = 4096) -> list[tuple[int, ...]]:
    """Reference radical: x such that x*y is nilpotent for every y.

    Exhaustive; only usable on small algebras.  Returns a row-space basis.
    """
    if alg.k != 1:
        raise ValueError("expects a prime modulus")
    size = alg.p**alg.rank
    if size > budget:
        raise BudgetError(f"brute-force radical needs {size} elements > budget {budget}")
    all_elems = list(alg.elements())

    def nilpotent(x) -> bool:
        acc = tuple(x)
        for _ in range(alg.rank + 1):
            if all(v == 0 for v in acc):
                return True
            acc = alg.mul(acc, x)
        return all(v == 0 for v in acc)

    members = [x for x in all_elems if all(nilpotent(alg.mul(x, y)) for y in all_elems)]
    return _row_space([list(m) for m in members], alg.p)


# ---------------------------------------------------------------------------
# unit counts


def is_unit(alg: FiniteAlgebra, x: Sequence[int]) -> bool:
    """Invertibility in O/p^k O: det of left multiplication is a unit mod p."""
    return _det_mod_p(alg.left_mul_matrix(x), alg.p) != 0


def _two_sided_inverse(alg: FiniteAlgebra, x: Sequence[int]):
    """Solve x*y = 1 over Z/p^k (or return None), then confirm y*x = 1."""
    m = alg.modulus
    lm = alg.left_mul_matrix(x)
    y = _solve_mod_pk(lm, list(alg.one), alg.p, alg.k)
    if y is None:
        return None
    if alg.mul(y, x) != alg.one:
        return None
    return tuple(v % m for v in y)


def _solve_mod_pk(a: list[list[int]], b: list[int], p: int, k: int):
    """Solve a @ x = b over Z/p^k by p-adic lifting of an F_p solve."""
    n = len(a)
    x = [0] * n
    residual = list(b)
    mod = p**k
    for level in range(k):
        rows = [[(a[r][c] // 1) % p for c in range(n)] + [(residual[r] // p**level) % p] for r in range(n)]
        sol = _solve_mod_p(rows, p)
        if sol is None:
            return None
        for c in range(n):
            x[c] = (x[c] + sol[c] * p**level) % mod
        residual = [
            (b[r] - sum(a[r][c] * x[c] for c in range(n))) % mod for r in range(n)
        ]
        if any(res % (p ** (level + 1)) for res in residual):
            return None
    return x


def unit_count_bruteforce(alg: FiniteAlgebra, cross_check: int = 2048) -> int:
    """Exact number of invertible elements of O/p^k O.

    The primary test is the unit-constant-term criterion (det of the left
    regular representation); the first ``cross_check`` elements are also
    verified by an explicit two-sided inverse solve.

    Raises:
        BudgetError: if the algebra has more than 2**24 elements.
    """
    size = alg.modulus**alg.rank
    if size > UNIT_ENUM_BUDGET:
        raise BudgetError(f"unit enumeration needs {size} elements > budget {UNIT_ENUM_BUDGET}")
    count = 0
    seen = 0
    for x in alg.elements():
        u = is_unit(alg, x)
        if seen < cross_check:
            inv = _two_sided_inverse(alg, x)
            if (inv is not None) != u:
                raise ArithmeticError(f"unit criteria disagree at {x}")
            seen += 1
        if u:
            count += 1
    return count


def quotient_by_radical(alg: FiniteAlgebra, radical_basis: Sequence[tuple[int, ...]]) -> FiniteAlgebra:
    """Structure constants of A / J on a complement basis (k = 1 only)."""
    if alg.k != 1:
        raise ValueError("expects a prime modulus")
    p, rank = alg.p, alg.rank
    jspan = _row_space([list(v) for v in radical_basis], p)
    # greedy complement: unit vectors independent of J and previous picks
    chosen: list[tuple[int, ...]] = []
    for j in range(rank):
        cand = tuple(int(r == j) for r in range(rank))
        if _nullspace_membership(jspan + chosen, cand, p) is None:
            chosen.append(cand)
    total = jspan + chosen
    basis_mat = [list(v) for v in total]
    qdim = len(chosen)

    def project(vec) -> tuple[int, ...]:
        aug = [list(col) + [v] for col, v in zip(zip(*basis_mat), vec)]
        sol = _solve_mod_p(aug, p)
        if sol is None:
            raise ArithmeticError("projection failed")
        return tuple(sol[len(jspan):])

    table = []
    for i in range(qdim):
        row = []
        for j in range(qdim):
            row.append(project(alg.mul(chosen[i], chosen[j])))
        table.append(tuple(row))
    one = project(alg.one)
    return FiniteAlgebra(p=p, k=1, rank=qdim, table=tuple(table), one=one)


@dataclass(frozen=True)
class UnitIndexReport:
    p: int
    k: int
    level_p_part: int
    count_sub: int
    count_sup: int
    unit_index: Fraction
    filtration_ok: bool
    radical_dim_sub: int
    detail: str


def unit_index_report(sub: Order, sup: Order, p: int, k: int) -> UnitIndexReport:
    """Local unit-group index of sub in sup at p, with the filtration identity.

    The stabilised index is count_sup * (lattice index p-part) / count_sub,
    valid once p^k * sup is contained in p * sub (checked).  The filtration
    identity is verified in counting form twice:
    count(p^k) = count(p) * p^(rank*(k-1)), and
    count(p) = p^(dim J) * #units(A/J) with J the radical mod p.
    """
    from .exactmat import lattice_index

    if k < 2:
        raise ValueError("k must be at least 2 to see the unit filtration")
    idx = lattice_index(sup.basis, sub.basis)
    p_part = 1
    while idx % p == 0:
        idx //= p
        p_part *= p
    # stabilisation condition: p^k sup subset p sub
    scaled = sup.basis.scale(Fraction(p**k, p))
    change = sub.basis.inverse() @ scaled
    if not change.is_integral():
        raise ValueError("k too small: p^k * sup is not inside p * sub")

    alg_sub_k = FiniteAlgebra.from_order(sub, p, k)
    alg_sup_k = FiniteAlgebra.from_order(sup, p, k)
    c_sub_k = unit_count_bruteforce(alg_sub_k)
    c_sup_k = unit_count_bruteforce(alg_sup_k)
    unit_index = Fraction(c_sup_k * p_part, c_sub_k)

    alg_sub_1 = FiniteAlgebra.from_order(sub, p, 1)
    c_sub_1 = unit_count_bruteforce(alg_sub_1)
    rad = jacobson_radical(alg_sub_1)
    quot = quotient_by_radical(alg_sub_1, rad.basis)
    c_quot = unit_count_bruteforce(quot)
    rank = sub.spec.dim
    ok_levels = c_sub_k == c_sub_1 * p ** (rank * (k - 1))
    ok_radical = c_sub_1 == c_quot * p**rad.dimension
    detail = (
        f"count_sub(p)={c_sub_1}, count_sub(p^{k})={c_sub_k}, "
        f"dim J={rad.dimension}, units(A/J)={c_quot}"
    )
    return UnitIndexReport(
        p=p,
        k=k,
        level_p_part=p_part,
        count_sub=c_sub_k,
        count_sup=c_sup_k,
        unit_index=unit_index,
        filtration_ok=ok_levels and ok_radical,
        radical_dim_sub=rad.dimension,
        detail=detail,
    )


def gamma0_unit_index(level: int, cross_check: bool = True) -> int:
    """Index of the level-N congruence unit group: N * prod_{p | N} (1 + 1/p).

    Cross-checked against the size of the projective line over Z/N by
    explicit enumeration of coprime pairs modulo unit scaling.
    """
    from .arith import factorize

    if level < 1:
        raise ValueError("level must be positive")
    value = Fraction(level)
    for q in factorize(level):
        value *= Fraction(q + 1, q)
    out = int(value)
    if cross_check and level > 1:
        from math import gcd as _gcd

        pairs = sum(
            1
            for a in range(level)
            for b in range(level)
            if _gcd(_gcd(a, b), level) == 1
        )
        phi = sum(1 for a in range(1, level + 1) if _gcd(a, level) == 1)
        if pairs % phi or pairs // phi != out:
            raise ArithmeticError(f"projective-line count disagrees at level {level}")
    return out
