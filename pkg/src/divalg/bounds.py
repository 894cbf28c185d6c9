"""Exact-exponent engine for the sup-norm savings, plus a numeric evaluator.

All exponents are exact rationals derived from two balance equations:

* spectral regime: equate L^-1 against S^(-1/(n(n-1))) * L^(n^2 + n(n-1)(n-2)),
  giving the optimal S-saving 1/(n(n-1)(n^2 + n(n-1)(n-2) + 1)), weakened
  to 1/(n^4 (n-1)) for readability;
* volume regime: the norm ceiling L^(n^2) must stay below the properness
  threshold disc^(1/(4n(n-1))), giving L = disc^(1/(4 n^3 (n-1))).

Hybrid interpolation multiplies the two regime bounds, which halves each
saving; converting between squared-modulus, eigenvalue and covolume
normalisations produces the headline (delta_1, delta_2) pairs.  Epsilon
factors are dropped numerically and carried symbolically in the note.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isfinite


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class BoundParams:
    """Inputs of the numeric pretrace evaluation; S is an opaque spectral size."""

    n: int
    S: float = 1.0
    D: int = 1
    N: int = 1
    lam: float | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("degree must be at least 2")
        if self.S <= 0 or self.D < 1 or self.N < 1:
            raise ValueError("S must be positive and D, N at least 1")


@dataclass(frozen=True)
class ExponentReport:
    """Exact savings: |phi| << lambda^(n(n-1)/8 - delta1) * V^(-delta2)."""

    delta1: Fraction
    delta2: Fraction
    l_exponents: dict[str, Fraction] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.delta1 <= 0 or self.delta2 <= 0:
            raise ValueError("savings must be positive rationals")


def exponents_prime_degree(p: int) -> ExponentReport:
    """Hybrid savings for a degree-p division algebra, p an odd prime.

    delta1 = 1/(16 p^3), delta2 = 1/(8 p^3 (p-1)).
    """
    _check_prime(p)
    if p == 2:
        raise ValueError("degree 2 uses the quaternion exponents")
    spectral = optimize_L_spectral(p)
    disc = optimize_L_disc(p)
    return ExponentReport(
        delta1=Fraction(1, 16 * p**3),
        delta2=Fraction(1, 8 * p**3 * (p - 1)),
        l_exponents={
            "spectral_S": spectral.l_exponent,
            "volume_D": disc.l_exponent,
        },
        note=f"prime degree {p}, hybrid of spectral and volume regimes",
    )


def exponents_quaternion() -> ExponentReport:
    """Quaternion savings over a totally real field: (1/120, 1/30).

    The single optimisation sets L = (S*D)^(1/30) and saves L^-1.
    """
    return ExponentReport(
        delta1=Fraction(1, 120),
        delta2=Fraction(1, 30),
        l_exponents={"combined_SD": Fraction(1, 30)},
        note="indefinite quaternion, combined spectral-volume regime",
    )


def exponents_eichler_type(n: int) -> ExponentReport:
    """Savings for last-row congruence orders in odd degree n >= 3.

    delta1 = 1/(8 n^3), delta2 = 1/(4 n^3 (n-1)): exactly twice the
    prime-degree savings, since one optimisation covers both aspects.
    """
    if n % 2 == 0:
        raise ValueError("odd degree required")
    if n < 3:
        raise ValueError("degree must be at least 3")
    return ExponentReport(
        delta1=Fraction(1, 8 * n**3),
        delta2=Fraction(1, 4 * n**3 * (n - 1)),
        l_exponents={
            "spectral_S": Fraction(1, n**4 * (n - 1)),
            "level_N": Fraction(1, 2 * n**3),
        },
        note=f"last-row congruence orders, degree {n}, single combined regime",
    )


@dataclass(frozen=True)
class SpectralOptimization:
    optimal: Fraction
    weakened: Fraction
    l_exponent: Fraction


def optimize_L_spectral(n: int) -> SpectralOptimization:
    """Balance the amplifier loss against the large-aperture term.

    Returns (optimal S-saving, weakened S-saving, L-exponent in S), all as
    exact rationals; the optimum solves -x = -1/(n(n-1)) + x * (n^2 +
    n(n-1)(n-2)) and the weakening replaces the denominator by n^4 (n-1).
    """
    if n < 3:
        raise ValueError("degree must be at least 3")
    growth = n**2 + n * (n - 1) * (n - 2)
    x = Fraction(1, n * (n - 1) * (growth + 1))
    # exact balance check: both exponents equal at L = S^x
    lhs = -x
    rhs = -Fraction(1, n * (n - 1)) + x * growth
    if lhs != rhs:
        raise ArithmeticError("balance equation failed; formula drift")
    weakened = Fraction(1, n**4 * (n - 1))
    if x < weakened:
        raise ArithmeticError("optimal saving fell below its weakening")
    return SpectralOptimization(optimal=x, weakened=weakened, l_exponent=x)


@dataclass(frozen=True)
class DiscOptimization:
    l_exponent: Fraction
    sq_saving: Fraction
    hybrid_sq_saving: Fraction
    covolume_saving: Fraction


def optimize_L_disc(n: int) -> DiscOptimization:
    """Largest admissible L in the volume regime and the resulting savings.

    The norm ceiling L^(n^2) must stay below disc^(1/(4n(n-1))), so
    L = disc^(1/(4 n^3 (n-1))); the squared-modulus saving equals the
    L-exponent, halves under hybrid interpolation, and converts to the
    covolume saving via covolume = disc^(1/2).
    """
    if n < 3:
        raise ValueError("degree must be at least 3")
    l_exp = Fraction(1, 4 * n**3 * (n - 1))
    hybrid = l_exp / 2
    # |phi| vs |phi|^2 halves the exponent, covolume = disc^(1/2) doubles it
    covolume = hybrid
    return DiscOptimization(
        l_exponent=l_exp,
        sq_saving=l_exp,
        hybrid_sq_saving=hybrid,
        covolume_saving=covolume,
    )


def eigenvalue_to_S(lam: float, n: int) -> float:
    """Upper proxy for the spectral size: 1 + lambda^(n(n-1)/4)."""
    if lam <= 0:
        raise ValueError("eigenvalue must be positive")
    return 1.0 + lam ** (n * (n - 1) / 4.0)


@dataclass(frozen=True)
class ConsistencyRow:
    n: int
    lhs: Fraction
    rhs: Fraction
    label: str

    @property
    def consistent(self) -> bool:
        return self.lhs == self.rhs


def consistency_table(max_n: int = 9) -> list[ConsistencyRow]:
    """Exact cross-checks tying the optimisations to the headline exponents.

    For each odd prime p: the hybrid eigenvalue saving must equal
    (weakened spectral / 4) * (p(p-1)/4), and the hybrid covolume saving
    must equal the halved volume-regime saving.
    """
    rows = []
    for p in range(3, max_n + 1, 2):
        if any(p % q == 0 for q in range(2, p)):
            continue
        rep = exponents_prime_degree(p)
        spectral = optimize_L_spectral(p)
        disc = optimize_L_disc(p)
        rows.append(
            ConsistencyRow(
                n=p,
                lhs=rep.delta1,
                rhs=(spectral.weakened / 4) * Fraction(p * (p - 1), 4),
                label="eigenvalue saving vs weakened spectral / 4",
            )
        )
        rows.append(
            ConsistencyRow(
                n=p,
                lhs=rep.delta2,
                rhs=disc.covolume_saving,
                label="covolume saving vs halved volume regime",
            )
        )
        eich = exponents_eichler_type(p)
        rows.append(
            ConsistencyRow(
                n=p,
                lhs=eich.delta1,
                rhs=rep.delta1 * 2,
                label="congruence-order savings are twice the hybrid",
            )
        )
    return rows


# ---------------------------------------------------------------------------
# numeric pretrace evaluation


@dataclass(frozen=True)
class PretraceEvaluation:
    """The three bracket terms of the split pretrace bound, and their total.

    total = (term_diagonal + term_small_aperture + term_large_aperture)
    divided by |P|^2; it bounds |phi(z)|^2 / S up to the unspecified
    absolute constant (reported without one) and epsilon factors (carried
    symbolically in the note).
    """

    term_diagonal: float
    term_small_aperture: float
    term_large_aperture: float
    total: float
    note: str = "epsilon factors dropped; absolute constant not included"


def pretrace_rhs(
    counts_small: dict[tuple[int, int, int], int],
    counts_large: dict[tuple[int, int, int], int],
    params: BoundParams,
    L: float,
    delta: float,
    primes: list[int],
) -> PretraceEvaluation:
    """Evaluate the split pretrace bound from complete counting tables.

    ``counts_small[(nu, l1, l2)]`` is the size of the counting set at norm
    l1^nu * l2^((n-1)nu) and aperture delta; ``counts_large`` the same at
    the compact-support aperture.  Missing cells raise, naming the cell.
    """
    n = params.n
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not primes:
        raise ValueError("the prime window is empty")
    for nu in range(1, n + 1):
        for l1 in primes:
            for l2 in primes:
                for table, tag in ((counts_small, "small"), (counts_large, "large")):
                    if (nu, l1, l2) not in table:
                        raise KeyError(f"missing {tag}-aperture count for cell {(nu, l1, l2)}")
    p_size = len(primes)
    term1 = float(p_size)
    term2 = 0.0
    term3_sum = 0.0
    for nu in range(1, n + 1):
        weight = L ** (-(n - 1) * nu)
        for l1 in primes:
            for l2 in primes:
                term2 += weight * counts_small[(nu, l1, l2)]
                term3_sum += weight * counts_large[(nu, l1, l2)]
    term3 = params.S ** (-1.0 / (n * (n - 1))) * delta**-0.5 * term3_sum
    total = (term1 + term2 + term3) / p_size**2
    if not all(map(isfinite, (term2, term3, total))):
        raise ArithmeticError("pretrace evaluation overflowed")
    return PretraceEvaluation(
        term_diagonal=term1,
        term_small_aperture=term2,
        term_large_aperture=term3,
        total=total,
    )


def theorem_report(theorem: str, *, p: int | None = None, n: int | None = None) -> ExponentReport:
    """Dispatch the three headline exponent families by CLI name."""
    if theorem == "main":
        if p is None:
            raise ValueError("main requires a prime p")
        return exponents_prime_degree(p)
    if theorem == "quaternion":
        return exponents_quaternion()
    if theorem == "eichler":
        if n is None:
            raise ValueError("eichler requires an odd degree n")
        return exponents_eichler_type(n)
    raise ValueError(f"unknown theorem family {theorem!r}")
