"""Exact certificates for the counting mechanisms.

Every check here ends in an integer identity: Gram determinants of trace
matrices divisible by the discriminant, commutator norms divisible by the
level or certified to vanish, and singleton norm-one sets in odd degree.
Floats appear only to locate candidates; the asserted facts are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Element, power_traces_to_charpoly
from .counting import CountQuery, enumerate_elements
from .exactmat import Mat, _int_det_bareiss
from .geometry import BasePoint, near_so
from .orders import Order


@dataclass(frozen=True)
class GramCertificate:
    """Exact Gram determinant of a trace matrix and its divisibility by disc."""

    size: int
    gram_det: int
    modulus: int
    divisible: bool
    rank: int


def gram_divisibility(order: Order, elements: Sequence[Element], modulus: int | None = None) -> GramCertificate:
    """det(tr(g_i g_j)) for a tuple of order elements, checked against disc.

    The tuple must have length dim = n^2 and consist of order elements;
    the determinant is then an integer divisible by the discriminant.
    """
    d = order.spec.dim
    if len(elements) != d:
        raise ValueError(f"need a tuple of exactly {d} elements")
    coords = []
    for g in elements:
        oc = order.order_coords(g)
        if any(c.denominator != 1 for c in oc):
            raise ValueError("element outside the order")
        coords.append([int(c) for c in oc])
    tf = [[int(order.trace_form.entry(i, j)) for j in range(d)] for i in range(d)]
    # Gram = X^T T X with X the integer coordinate matrix (columns = elements)
    tx = [[sum(tf[r][c] * coords[j][c] for c in range(d)) for j in range(d)] for r in range(d)]
    gram = [[sum(coords[i][r] * tx[r][j] for r in range(d)) for j in range(d)] for i in range(d)]
    det = _int_det_bareiss([row[:] for row in gram])
    rank = Mat(gram).rank()
    mod = order.discriminant if modulus is None else modulus
    return GramCertificate(
        size=d, gram_det=det, modulus=mod, divisible=det % mod == 0, rank=rank
    )


@dataclass(frozen=True)
class SpanProperness:
    collected: int
    rank: int
    full_dim: int
    proper: bool
    threshold: float
    within_threshold: bool
    delta_used: float
    norm_ceiling: int


def span_properness_check(
    order: Order, L: int, delta: float, z: BasePoint, jobs: int = 1, assert_proper: bool = True
) -> SpanProperness:
    """Rank of the trace Gram over the product-closure ball of the counting set.

    Elements of norm up to L within delta generate, as a vector space,
    span of the sets with norms up to L^(2n-2) and aperture (2n-2)*delta;
    below the discriminant threshold that span must be a proper subspace,
    i.e. the trace Gram over all collected elements has rank < n^2.
    """
    n = order.spec.n
    d = order.spec.dim
    norm_ceiling = L ** (2 * n - 2)
    wide_delta = (2 * n - 2) * delta
    collected: list[Element] = []
    for m in range(1, norm_ceiling + 1):
        res = enumerate_elements(
            CountQuery(order=order, m=m, z=z, delta=min(wide_delta, 2.0)), jobs=jobs
        )
        collected.extend(res.elements)
    if not collected:
        rank = 0
    else:
        tf = order.trace_form
        coords = [[int(c) for c in order.order_coords(g)] for g in collected]
        rows = []
        for ci in coords:
            tx = [
                sum(int(tf.entry(r, c)) * ci[c] for c in range(d)) for r in range(d)
            ]
            rows.append([sum(tx[r] * cj[r] for r in range(d)) for cj in coords])
        rank = Mat(rows).rank() if rows else 0
    disc = order.discriminant
    threshold = float(disc) ** (1.0 / (4 * n * (n - 1)))
    within = L <= threshold
    proper = rank < d
    if assert_proper and within and not proper:
        raise AssertionError(
            f"span is full ({rank} = {d}) although L = {L} <= threshold {threshold:.4g}"
        )
    return SpanProperness(
        collected=len(collected),
        rank=rank,
        full_dim=d,
        proper=proper,
        threshold=threshold,
        within_threshold=within,
        delta_used=wide_delta,
        norm_ceiling=norm_ceiling,
    )


# ---------------------------------------------------------------------------
# commutators


def _commutator(g1: Element, g2: Element) -> Element:
    return g1 * g2 - g2 * g1


def _det_perturbation_bound(n: int, eps: float) -> float:
    """|det(k - I + E)| <= (2 + eps)^n - 2^n for k in SO(n), ||E||_F <= eps."""
    return (2.0 + eps) ** n - 2.0**n


def commutator_distance_enclosure(delta: float) -> float:
    """Frobenius enclosure for the conjugated commutator's distance to SO(n).

    If both factors are within delta of rotations, the normalised
    commutator is within 4*delta*(1+delta)^3/(1-delta)^2 of a rotation.
    """
    if delta >= 1:
        return math.inf
    return 4 * delta * (1 + delta) ** 3 / (1 - delta) ** 2


@dataclass(frozen=True)
class CommutatorReport:
    norm: Fraction
    norm_product_ratio: float
    certified_bound: float
    certified_zero: bool
    commutes: bool


def commutator_norm_check(
    g1: Element, g2: Element, z: BasePoint, delta: float
) -> CommutatorReport:
    """Exact reduced norm of [g1, g2] with the odd-degree vanishing gate.

    Both elements must pass the proximity predicate at (z, delta) and the
    degree must be odd.  When the explicit enclosure forces the integer
    |nr([g1, g2])| below 1 the report asserts exact vanishing, and (for a
    division-attested ambient algebra) commutation of the pair.
    """
    spec = g1.spec
    if spec.n % 2 == 0:
        raise ValueError("odd-degree mechanism only")
    for g in (g1, g2):
        ok, prox = near_so(z, g, delta)
        if not ok:
            raise ValueError(
                f"element fails the proximity predicate: distance {prox.distance:.6g} >= {delta}"
            )
    comm = _commutator(g1, g2)
    nr = comm.reduced_norm()
    nr1, nr2 = g1.reduced_norm(), g2.reduced_norm()
    eps = commutator_distance_enclosure(delta)
    certified_bound = float(nr1 * nr2) * _det_perturbation_bound(spec.n, eps)
    denom = delta * float(nr1) * float(nr2)
    ratio = abs(float(nr)) / denom if denom > 0 else math.inf
    certified_zero = certified_bound < 1.0
    if certified_zero and nr != 0:
        raise AssertionError(
            f"certified bound {certified_bound:.4g} < 1 but nr of commutator is {nr}"
        )
    commutes = comm.is_zero()
    if certified_zero and spec.division_attested and not commutes:
        raise AssertionError("division algebra: vanishing commutator norm must mean commuting pair")
    return CommutatorReport(
        norm=nr,
        norm_product_ratio=ratio,
        certified_bound=certified_bound,
        certified_zero=certified_zero,
        commutes=commutes,
    )


@dataclass(frozen=True)
class LevelDivisibility:
    norm: Fraction
    level: int
    divisible: bool


def commutator_level_divisibility(order: Order, level: int, g1: Element, g2: Element) -> LevelDivisibility:
    """nr([g1, g2]) for a pair in a last-row congruence order is divisible by N."""
    for g in (g1, g2):
        if not order.contains(g):
            raise ValueError("element outside the order")
    nr = _commutator(g1, g2).reduced_norm()
    if nr.denominator != 1:
        raise ArithmeticError("commutator norm is not an integer; order data corrupt")
    divisible = int(nr) % level == 0
    if not divisible:
        raise AssertionError(f"level {level} does not divide commutator norm {nr}")
    return LevelDivisibility(norm=nr, level=level, divisible=divisible)


# ---------------------------------------------------------------------------
# norm-one isolation (the odd-degree convexity mechanism)


@dataclass(frozen=True)
class ConvexityReport:
    applicable: bool
    isolated: bool
    elements: tuple[Element, ...]
    rho: float
    rho_threshold: float


def convexity_threshold(n: int) -> float:
    """Largest rho with (2 + rho)^n - 2^n < 1 (forces |nr(g - 1)| < 1)."""
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if _det_perturbation_bound(n, mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return lo


def convexity_check(order: Order, z: BasePoint, rho: float, jobs: int = 1) -> ConvexityReport:
    """Enumerate the norm-one counting set and test whether it is exactly {1}.

    For an odd-degree division algebra with rho below the explicit
    threshold the set must be the singleton; even-degree or split inputs
    are reported as not applicable (the enumeration is still returned).
    """
    n = order.spec.n
    applicable = n % 2 == 1 and order.spec.division_attested
    threshold = convexity_threshold(n)
    if applicable and rho >= threshold:
        raise ValueError(
            f"rho {rho} is not below the certified threshold {threshold:.6g}"
        )
    res = enumerate_elements(CountQuery(order=order, m=1, z=z, delta=rho), jobs=jobs)
    one = order.spec.one()
    isolated = res.elements == (one,)
    if applicable and not isolated:
        raise AssertionError(
            f"norm-one set is not a singleton: {[e.coords for e in res.elements]}"
        )
    return ConvexityReport(
        applicable=applicable,
        isolated=isolated,
        elements=res.elements,
        rho=rho,
        rho_threshold=threshold,
    )


# ---------------------------------------------------------------------------
# units of a commutative subring via trace boxes


@dataclass(frozen=True)
class UnitBoxReport:
    boxes: tuple[tuple[int, int], ...]
    candidate_polynomials: int
    admissible_polynomials: tuple[tuple[Fraction, ...], ...]
    units_found: tuple[Element, ...]
    bound: int

    @property
    def count(self) -> int:
        return len(self.units_found)


def unit_trace_box_count(
    order: Order,
    subring_columns: Sequence[Sequence],
    delta: float,
    box_constant: float | None = None,
    search_height: int = 30,
) -> UnitBoxReport:
    """Bound units of a commutative subring by boxing their power traces.

    The subring is a multiplicatively closed rank-p sublattice (verified:
    closure and commutativity).  Integer trace vectors (tr xi, ..,
    tr xi^(p-1)) range over |tr(xi^j)| <= c * p * (1 + j*delta); each
    vector yields at most one monic integral polynomial per constant term
    +-1, and each admissible polynomial has at most p roots, so the unit
    count is at most p times the number of admissible polynomials.  Units
    are located by bounded coordinate search and matched by charpoly.
    """
    spec = order.spec
    p = spec.n
    if len(subring_columns) != p:
        raise ValueError(f"subring data must have rank {p}")
    cols = [tuple(Fraction(c) for c in col) for col in subring_columns]
    elems = [spec.element(c) for c in cols]
    # closure and commutativity of the sublattice
    sub_mat_cols = [list(c) for c in cols]
    for i in range(p):
        for j in range(p):
            prod = elems[i] * elems[j]
            if not _in_span_integral(sub_mat_cols, prod.coords):
                raise ValueError(f"subring not multiplicatively closed at pair ({i}, {j})")
            if (elems[i] * elems[j]).coords != (elems[j] * elems[i]).coords:
                raise ValueError("subring is not commutative")
    c_const = box_constant if box_constant is not None else 2 * math.sqrt(p)
    boxes = tuple(
        (math.floor(-c_const * p * (1 + j * delta)), math.floor(c_const * p * (1 + j * delta)))
        for j in range(1, p)
    )
    admissible: list[tuple[Fraction, ...]] = []
    for traces in itertools.product(*(range(lo, hi + 1) for lo, hi in boxes)):
        for const_sign in (1, -1):
            coeffs = _charpoly_from_partial_traces(list(traces), p, const_sign)
            if coeffs is not None:
                admissible.append(coeffs)
    admissible = sorted(set(admissible))
    # bounded search for unit roots inside the subring
    found: list[Element] = []
    poly_set = set(admissible)
    for xcoords in itertools.product(range(-search_height, search_height + 1), repeat=p):
        if all(v == 0 for v in xcoords):
            continue
        coords = tuple(
            sum(cols[j][r] * xcoords[j] for j in range(p)) for r in range(spec.dim)
        )
        nr = spec.reduced_norm(coords)
        if nr != 1 and nr != -1:
            continue
        cp = spec.reduced_charpoly(coords)
        if cp in poly_set:
            found.append(spec.element(coords))
    bound = p * len(admissible)
    if len(found) > bound:
        raise AssertionError(f"found {len(found)} units, above the bound {bound}")
    return UnitBoxReport(
        boxes=boxes,
        candidate_polynomials=2 * math.prod(hi - lo + 1 for lo, hi in boxes),
        admissible_polynomials=tuple(admissible),
        units_found=tuple(sorted(found, key=lambda e: e.coords)),
        bound=bound,
    )


def _charpoly_from_partial_traces(traces: list[int], p: int, const_sign: int):
    """Monic integer polynomial from (t_1 .. t_(p-1)) with constant term +-1.

    The leading p-1 symmetric functions come from the usual identities; a
    non-integral value disqualifies the trace vector.  Descending
    coefficients, or None.
    """
    e = [Fraction(1)] + [Fraction(0)] * p
    for k in range(1, p):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * traces[i - 1]
        e[k] = acc / k
        if e[k].denominator != 1:
            return None
    e[p] = Fraction(const_sign)
    return tuple((-1) ** k * e[k] for k in range(p + 1))


def _in_span_integral(columns: list[list[Fraction]], coords: Sequence[Fraction]) -> bool:
    """Is coords an integer combination of the (possibly non-square) columns?"""
    nrows = len(columns[0])
    ncols = len(columns)
    a = [[columns[j][r] for j in range(ncols)] + [coords[r]] for r in range(nrows)]
    # exact row reduction; track pivot columns
    rank = 0
    pivots = []
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = Fraction(1) / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r in range(nrows):
            if r != rank and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nrows):
        if a[r][-1] != 0:
            return False
    return all(a[r][-1].denominator == 1 for r in range(rank))
