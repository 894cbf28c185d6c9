"""Orders: multiplicatively closed full lattices in a rational algebra.

An order is given by a square basis matrix whose columns are the lattice
generators in the standard coordinates of the ambient algebra.  Closure,
unity and integrality are verified by exact linear solves; the
discriminant is the absolute Gram determinant of the reduced trace form
on the basis, and index relations between nested orders are checked
against the square-ratio identity disc(sub) = index^2 * disc(sup).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .algebra import AlgebraSpec, Element
from .exactmat import Mat, kernel_columns, lattice_index


class OrderError(ValueError):
    """Raised when a candidate lattice fails the order axioms."""


class Order:
    """A verified order.  Instances are immutable once constructed."""

    def __init__(self, spec: AlgebraSpec, basis: Mat, name: str = "", verify: bool = True):
        if basis.shape != (spec.dim, spec.dim):
            raise OrderError(f"basis must be {spec.dim}x{spec.dim}")
        self.spec = spec
        self.basis = basis
        self.name = name
        if basis.det() == 0:
            raise OrderError("rank-deficient basis")
        self._binv = basis.inverse()
        if verify:
            self.verify()

    # -- coordinates -----------------------------------------------------

    def element_from_order_coords(self, coords: Sequence) -> Element:
        return self.spec.element(self.basis.matvec(coords))

    def order_coords(self, x: Element | Sequence) -> tuple[Fraction, ...]:
        coords = x.coords if isinstance(x, Element) else x
        return self._binv.matvec(coords)

    def contains(self, x: Element | Sequence) -> bool:
        return all(c.denominator == 1 for c in self.order_coords(x))

    def basis_elements(self) -> list[Element]:
        return [self.spec.element(self.basis.column(j)) for j in range(self.spec.dim)]

    # -- axioms ------------------------------------------------------------

    @cached_property
    def structure_constants(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Coordinates of basis products in the basis itself (integers).

        Computing this is the closure proof: a non-integral coefficient
        raises with the offending product as witness.
        """
        d = self.spec.dim
        cols = [self.basis.column(j) for j in range(d)]
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                prod = self.spec.mul_coords(cols[i], cols[j])
                coeffs = self._binv.matvec(prod)
                if any(c.denominator != 1 for c in coeffs):
                    raise OrderError(
                        f"lattice not closed under multiplication: basis product "
                        f"({i}, {j}) has coordinates {[str(c) for c in coeffs]}"
                    )
                row.append(tuple(int(c) for c in coeffs))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def one_coords(self) -> tuple[int, ...]:
        coeffs = self._binv.matvec(self.spec.one_coords)
        if any(c.denominator != 1 for c in coeffs):
            raise OrderError("lattice does not contain 1")
        return tuple(int(c) for c in coeffs)

    def verify(self) -> None:
        """Order axioms: full rank, contains 1, closed under multiplication,
        all basis elements integral (integer reduced charpoly)."""
        _ = self.one_coords
        _ = self.structure_constants
        for j in range(self.spec.dim):
            cp = self.spec.reduced_charpoly(self.basis.column(j))
            if any(c.denominator != 1 for c in cp):
                raise OrderError(f"basis element {j} is not integral: charpoly {cp}")

    # -- invariants ----------------------------------------------------------

    @cached_property
    def trace_form(self) -> Mat:
        """Integer Gram matrix tr(b_i * b_j) of the basis."""
        d = self.spec.dim
        cols = [self.basis.column(j) for j in range(d)]
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                t = self.spec.reduced_trace(self.spec.mul_coords(cols[i], cols[j]))
                row.append(t)
            rows.append(row)
        g = Mat(rows)
        if not g.is_integral():
            raise OrderError("trace form is not integral; order axioms violated")
        return g

    @cached_property
    def discriminant(self) -> int:
        return abs(int(self.trace_form.det()))

    def pair_trace(self, x: Sequence, y: Sequence) -> Fraction:
        """tr(x*y) for order-basis coordinate vectors, via the trace form."""
        g = self.trace_form
        d = self.spec.dim
        return sum(x[i] * sum(int(g.entry(i, j)) * y[j] for j in range(d)) for i in range(d))

    def __repr__(self) -> str:
        label = self.name or "order"
        return f"Order({label}, disc={self.discriminant})"


@dataclass(frozen=True)
class OrderRelation:
    """Containment data for sub inside sup with the exact index identity."""

    sub_name: str
    sup_name: str
    index: int
    disc_sub: int
    disc_sup: int

    @property
    def disc_ratio(self) -> int:
        return self.disc_sub // self.disc_sup

    @property
    def consistent(self) -> bool:
        return self.index * self.index * self.disc_sup == self.disc_sub


def order_index(sub: Order, sup: Order) -> OrderRelation:
    """Lattice index of sub in sup, checked against the discriminant identity."""
    if sub.spec != sup.spec:
        raise OrderError("orders live in different algebras")
    idx = lattice_index(sup.basis, sub.basis)
    rel = OrderRelation(
        sub_name=sub.name,
        sup_name=sup.name,
        index=idx,
        disc_sub=sub.discriminant,
        disc_sup=sup.discriminant,
    )
    if not rel.consistent:
        raise OrderError(
            f"index/discriminant inconsistency: index {idx}, "
            f"disc {rel.disc_sub} vs {rel.disc_sup}"
        )
    return rel


# ---------------------------------------------------------------------------
# mod-N splittings and the last-row congruence order


@dataclass(frozen=True)
class ModNSplitting:
    """A (Z/N)-algebra isomorphism from an order mod N onto M_n(Z/N).

    ``images[j]`` is the n x n integer matrix (mod N) of the j-th basis
    element of the base order.
    """

    modulus: int
    images: tuple[tuple[tuple[int, ...], ...], ...]


def _mat_mod_mul(a, b, n_dim: int, modulus: int):
    return tuple(
        tuple(
            sum(a[r][k] * b[k][c] for k in range(n_dim)) % modulus for c in range(n_dim)
        )
        for r in range(n_dim)
    )


def identity_splitting(order: Order, modulus: int) -> ModNSplitting:
    """Splitting for matrix-presentation orders: coordinates are the entries."""
    n = order.spec.n
    images = []
    for j in range(order.spec.dim):
        col = order.basis.column(j)
        if any(c.denominator != 1 for c in col):
            raise OrderError("identity splitting requires an integral basis")
        images.append(
            tuple(tuple(int(col[r * n + c]) % modulus for c in range(n)) for r in range(n))
        )
    return ModNSplitting(modulus=modulus, images=tuple(images))


def quaternion_splitting(order: Order, modulus: int) -> ModNSplitting:
    """Standard splitting mod N for a quaternion order when a is a square mod N.

    Sends i to diag(alpha, -alpha) with alpha^2 = a (mod N) and j to
    [[0, b], [1, 0]]; basis images follow by linear extension, which needs
    the basis coordinates' denominators invertible mod N.
    """
    spec = order.spec
    a_num = spec.a  # type: ignore[attr-defined]
    b_num = spec.b  # type: ignore[attr-defined]

    def to_mod(x: Fraction) -> int:
        if gcd(x.denominator, modulus) != 1:
            raise OrderError("denominator shares a factor with the level")
        return (x.numerator * pow(x.denominator, -1, modulus)) % modulus

    a_mod, b_mod = to_mod(a_num), to_mod(b_num)
    alpha = next((t for t in range(modulus) if (t * t - a_mod) % modulus == 0), None)
    if alpha is None:
        raise OrderError(f"no square root of a mod {modulus}; supply an explicit splitting")
    gens = [
        ((1, 0), (0, 1)),
        ((alpha % modulus, 0), (0, (-alpha) % modulus)),
        ((0, b_mod), (1, 0)),
        ((0, (alpha * b_mod) % modulus), ((-alpha) % modulus, 0)),
    ]
    images = []
    for j in range(4):
        col = order.basis.column(j)
        entries = [[0, 0], [0, 0]]
        for k in range(4):
            c = to_mod(col[k])
            for r in range(2):
                for cc in range(2):
                    entries[r][cc] = (entries[r][cc] + c * gens[k][r][cc]) % modulus
        images.append(tuple(tuple(row) for row in entries))
    return ModNSplitting(modulus=modulus, images=tuple(images))


def default_splitting(order: Order, modulus: int) -> ModNSplitting:
    from .algebra import MatrixAlgebra, QuaternionAlgebra

    if isinstance(order.spec, MatrixAlgebra):
        return identity_splitting(order, modulus)
    if isinstance(order.spec, QuaternionAlgebra):
        return quaternion_splitting(order, modulus)
    raise OrderError("no built-in splitting for this presentation; supply one")


def verify_splitting(order: Order, splitting: ModNSplitting) -> None:
    """Check the splitting is a (Z/N)-algebra isomorphism on basis products."""
    n = order.spec.n
    modulus = splitting.modulus
    d = order.spec.dim
    imgs = splitting.images
    sc = order.structure_constants
    for i in range(d):
        for j in range(d):
            lhs = _mat_mod_mul(imgs[i], imgs[j], n, modulus)
            acc = [[0] * n for _ in range(n)]
            for k in range(d):
                c = sc[i][j][k] % modulus
                if c:
                    for r in range(n):
                        for cc in range(n):
                            acc[r][cc] = (acc[r][cc] + c * imgs[k][r][cc]) % modulus
            if lhs != tuple(tuple(row) for row in acc):
                raise OrderError(f"splitting is not multiplicative on basis pair ({i}, {j})")
    # bijectivity: the coordinate-to-entry map must be invertible mod N
    flat = Mat([[imgs[j][r][c] for j in range(d)] for r in range(n) for c in range(n)])
    det = int(flat.det())
    if gcd(det, modulus) != 1:
        raise OrderError("splitting is not bijective mod N")


def congruence_order(
    base: Order, level: int, splitting: ModNSplitting | None = None, name: str = ""
) -> Order:
    """The suborder of ``base`` whose mod-N image has last row (0, ..., 0, *).

    The level N must be coprime to disc(base); the resulting order has
    lattice index N^(n-1) in the base (checked).
    """
    if level < 1:
        raise OrderError("level must be a positive integer")
    if level == 1:
        return Order(base.spec, base.basis, name=name or base.name)
    if gcd(level, base.discriminant) != 1:
        raise OrderError("ramified level: shares a factor with the base discriminant")
    splitting = splitting or default_splitting(base, level)
    verify_splitting(base, splitting)
    n = base.spec.n
    d = base.spec.dim
    # congruence conditions: last-row entries except the corner vanish mod N
    cond_rows = []
    for c in range(n - 1):
        cond_rows.append([splitting.images[j][n - 1][c] for j in range(d)])
    ncond = len(cond_rows)
    stacked = Mat(
        [cond_rows[r] + [level if rr == r else 0 for rr in range(ncond)] for r in range(ncond)]
    )
    kernel = kernel_columns(stacked)
    lattice_cols = [vec[:d] for vec in kernel]
    if len(lattice_cols) != d:
        raise OrderError("congruence lattice has unexpected rank")
    sub_in_base = Mat.from_columns(lattice_cols)
    new_basis = base.basis @ sub_in_base
    out = Order(base.spec, new_basis, name=name or f"{base.name}_0({level})")
    idx = lattice_index(base.basis, new_basis)
    if idx != level ** (n - 1):
        raise OrderError(f"congruence order has index {idx}, expected {level ** (n - 1)}")
    return out


def standard_matrix_order(spec: AlgebraSpec, name: str = "") -> Order:
    """M_n(Z) in a matrix presentation."""
    return Order(spec, Mat.identity(spec.dim), name=name or f"m{spec.n}z")
