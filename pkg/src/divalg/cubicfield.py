"""Exact arithmetic in a totally real cyclic cubic field Q(theta).

The field is presented by a monic integer cubic f together with a degree-3
automorphism sigma given as an integer polynomial in theta.  Elements are
coordinate triples over the power basis (1, theta, theta^2); all products
reduce symbolically mod f, so the arithmetic is exact over int/Fraction.

Root isolation is certified: sign changes of f are bracketed with exact
rational endpoints and bisected to a requested width, which feeds the
error radii of the real matrix embedding downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

Coeffs = tuple  # length-3 coordinate vector over (1, theta, theta^2)


def _poly_eval(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class CubicFieldSpec:
    """Defining data of the cubic field and its order-3 automorphism.

    Attributes:
        f: ascending coefficients (c0, c1, c2, 1) of the monic defining cubic.
        sigma: ascending coefficients (s0, s1, s2) of sigma(theta).
        root_index: which real root (ascending order) the real embedding uses.
    """

    f: tuple[int, int, int, int]
    sigma: tuple[int, int, int]
    root_index: int = 0

    def __post_init__(self):
        if len(self.f) != 4 or self.f[3] != 1:
            raise ValueError("defining polynomial must be monic cubic, ascending coefficients")
        if len(self.sigma) != 3:
            raise ValueError("sigma must be a polynomial of degree <= 2 in theta")
        if self.root_index not in (0, 1, 2):
            raise ValueError("root_index must be 0, 1 or 2")
        self._validate()

    # -- polynomial arithmetic mod f ------------------------------------

    def reduce(self, coeffs: Sequence) -> Coeffs:
        """Reduce an ascending coefficient list (degree <= 4) mod f."""
        c = list(coeffs) + [0] * (5 - len(coeffs))
        c0, c1, c2, _ = self.f
        for d in (4, 3):
            t = c[d]
            if t:
                c[d] = 0
                c[d - 3] -= t * c0
                c[d - 2] -= t * c1
                c[d - 1] -= t * c2
        return (c[0], c[1], c[2])

    def mul(self, u: Sequence, v: Sequence) -> Coeffs:
        out = [0] * 5
        for i in range(3):
            ui = u[i]
            if ui:
                for j in range(3):
                    if v[j]:
                        out[i + j] += ui * v[j]
        return self.reduce(out)

    def add(self, u: Sequence, v: Sequence) -> Coeffs:
        return (u[0] + v[0], u[1] + v[1], u[2] + v[2])

    @cached_property
    def sigma_matrix(self) -> tuple[Coeffs, Coeffs, Coeffs]:
        """Images of (1, theta, theta^2) under sigma, as coordinate triples."""
        s1 = self.sigma
        return ((1, 0, 0), tuple(s1), self.mul(s1, s1))

    def apply_sigma(self, e: Sequence, power: int = 1) -> Coeffs:
        out = tuple(e)
        cols = self.sigma_matrix
        for _ in range(power % 3):
            out = tuple(
                out[0] * cols[0][r] + out[1] * cols[1][r] + out[2] * cols[2][r] for r in range(3)
            )
        return out

    # -- invariants of the field ----------------------------------------

    @cached_property
    def trace_vector(self) -> tuple[int, int, int]:
        """(Tr 1, Tr theta, Tr theta^2) from Newton's identities on f."""
        c0, c1, c2, _ = self.f
        e1, e2 = -c2, c1
        p1 = e1
        p2 = e1 * p1 - 2 * e2
        return (3, p1, p2)

    def trace(self, e: Sequence) -> Fraction | int:
        t = self.trace_vector
        return e[0] * t[0] + e[1] * t[1] + e[2] * t[2]

    def norm(self, e: Sequence):
        """Field norm via the determinant of the multiplication-by-e matrix."""
        cols = [self.mul(e, basis) for basis in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        a, b, c = cols[0], cols[1], cols[2]
        return (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - b[0] * (a[1] * c[2] - a[2] * c[1])
            + c[0] * (a[1] * b[2] - a[2] * b[1])
        )

    def _validate(self) -> None:
        c0 = self.f[0]
        # monic cubic: a rational root would be an integer divisor of f(0)
        for d in range(1, abs(c0) + 1):
            if c0 % d == 0:
                for cand in (d, -d):
                    if _poly_eval(self.f, Fraction(cand)) == 0:
                        raise ValueError("defining cubic is reducible over Q")
        if len(self.isolate_roots(Fraction(1, 1 << 10))) != 3:
            raise ValueError("defining cubic is not totally real")
        # sigma must permute the roots: f(sigma(theta)) = 0 mod f
        s = tuple(self.sigma)
        acc = (1, 0, 0)
        val = (self.f[0], 0, 0)
        for k in (1, 2, 3):
            acc = self.mul(acc, s)
            val = tuple(val[r] + self.f[k] * acc[r] for r in range(3))
        if any(val):
            raise ValueError("sigma(theta) is not a root of the defining cubic")
        if tuple(self.apply_sigma((0, 1, 0), 1)) == (0, 1, 0):
            raise ValueError("sigma is the identity; an order-3 automorphism is required")
        if tuple(self.apply_sigma((0, 1, 0), 3)) != (0, 1, 0):
            raise ValueError("sigma does not have order 3")

    # -- certified real roots --------------------------------------------

    def isolate_roots(self, width: Fraction = Fraction(1, 1 << 60)) -> list[tuple[Fraction, Fraction]]:
        """Disjoint rational brackets for the real roots, each of size <= width.

        Endpoints are exact rationals with strict sign changes, so each
        bracket certifies its root.  Ascending order.
        """
        bound = 1 + max(abs(c) for c in self.f[:3])
        step = Fraction(1)
        brackets: list[tuple[Fraction, Fraction]] = []
        while step >= Fraction(1, 1 << 12):
            brackets = []
            x = Fraction(-bound)
            fx = _poly_eval(self.f, x)
            while x < bound:
                y = x + step
                fy = _poly_eval(self.f, y)
                if fx == 0:
                    raise ValueError("rational root encountered; cubic is reducible")
                if fx * fy < 0:
                    brackets.append((x, y))
                x, fx = y, fy
            if len(brackets) == 3:
                break
            step /= 2
        out = []
        for lo, hi in brackets:
            flo = _poly_eval(self.f, lo)
            while hi - lo > width:
                mid = (lo + hi) / 2
                fm = _poly_eval(self.f, mid)
                if fm == 0:
                    raise ValueError("rational root encountered; cubic is reducible")
                if flo * fm < 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            out.append((lo, hi))
        return out

    def eval_interval(self, coeffs: Sequence, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Exact interval enclosure of a polynomial over [lo, hi] (Horner)."""
        alo, ahi = Fraction(0), Fraction(0)
        for c in reversed([Fraction(x) for x in coeffs]):
            cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
            alo, ahi = min(cands) + c, max(cands) + c
        return alo, ahi
