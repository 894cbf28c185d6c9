"""The symmetric-space proximity predicate behind every counting set.

A lattice element gamma of positive reduced norm m is normalised to the
determinant-one matrix gamma / m^(1/n) via the real splitting, conjugated
by the base point z, and its Frobenius distance to SO(n) is measured via
singular values.  The Frobenius distance is the operational surrogate for
the invariant distance: the two are comparable on bounded sets, and every
verifier here only consumes the "rotation plus small error" form.

Tolerance policy: absolute 1e-9 with a relative fallback; every boolean
predicate also returns its margin so callers can inflate safely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import Element

ABS_TOL = 1e-9


def close(a: float, b: float, tol: float = ABS_TOL) -> bool:
    return abs(a - b) <= tol + tol * max(abs(a), abs(b))


@dataclass(frozen=True)
class BasePoint:
    """A coset representative z of z*SO(n), as a det-1 real matrix."""

    matrix: np.ndarray
    condition: float

    @classmethod
    def from_matrix(cls, mat, normalize: bool = False) -> "BasePoint":
        m = np.array(mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("base point must be a square matrix")
        det = float(np.linalg.det(m))
        if normalize:
            if det <= 0:
                raise ValueError("cannot normalize a matrix with nonpositive determinant")
            m = m / det ** (1.0 / m.shape[0])
            det = float(np.linalg.det(m))
        if not close(det, 1.0, 1e-6):
            raise ValueError(f"base point determinant {det} is not 1")
        m.setflags(write=False)
        return cls(matrix=m, condition=float(np.linalg.cond(m)))

    @classmethod
    def identity(cls, n: int) -> "BasePoint":
        return cls.from_matrix(np.eye(n))

    @classmethod
    def upper_half(cls, x: float, y: float) -> "BasePoint":
        """Degree-2 convenience: the point x + iy of the upper half plane."""
        if y <= 0:
            raise ValueError("upper-half-plane point needs y > 0")
        s = np.sqrt(y)
        return cls.from_matrix(np.array([[s, x / s], [0.0, 1.0 / s]]))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


@dataclass(frozen=True)
class ProximityResult:
    """Distance to SO(n) with the witnessing nearest rotation."""

    distance: float
    rotation: np.ndarray
    singular_values: np.ndarray
    det_sign: int


def dist_to_so(m: np.ndarray) -> ProximityResult:
    """Frobenius distance from m to SO(n), by singular value decomposition.

    For det m > 0 the squared distance is sum (sigma_i - 1)^2 and the
    nearest rotation is the orthogonal polar factor; for det m <= 0 the
    smallest singular value flips sign in the objective so the reported
    rotation still has determinant +1.
    """
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    u, s, vt = np.linalg.svd(m)
    det_sign = 1 if float(np.linalg.det(m)) > 0 else -1
    flip = np.ones(len(s))
    if float(np.linalg.det(u @ vt)) < 0:
        # move the sign onto the least significant direction
        flip[-1] = -1.0
    rotation = u @ np.diag(flip) @ vt
    signed = s * flip
    distance = float(np.sqrt(np.sum((signed - 1.0) ** 2)))
    rotation.setflags(write=False)
    return ProximityResult(
        distance=distance, rotation=rotation, singular_values=s, det_sign=det_sign
    )


def normalize_element(gamma: Element, norm_value: Fraction | int | None = None) -> np.ndarray:
    """Real image of gamma scaled to determinant 1 (requires positive norm)."""
    m = gamma.reduced_norm() if norm_value is None else Fraction(norm_value)
    if m <= 0:
        raise ValueError("normalize requires positive reduced norm")
    actual = gamma.reduced_norm()
    if actual != m:
        raise ValueError(f"declared norm {m} differs from the exact norm {actual}")
    n = gamma.spec.n
    return gamma.real_image() / float(m) ** (1.0 / n)


def near_so(z: BasePoint, gamma: Element, delta: float) -> tuple[bool, ProximityResult]:
    """Membership predicate: is z^-1 * (gamma/nr^(1/n)) * z within delta of SO(n)?

    Strict inequality; the ProximityResult carries the margin
    ``delta - distance`` implicitly via its distance field.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if z.n != gamma.spec.n:
        raise ValueError("base point degree does not match the algebra")
    conj = z.inverse @ normalize_element(gamma) @ z.matrix
    prox = dist_to_so(conj)
    return prox.distance < delta, prox


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish rotation via QR of a Gaussian matrix, determinant +1."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_base_point(n: int, rng: np.random.Generator, spread: float = 0.3) -> BasePoint:
    """A base point in a bounded region around the identity coset."""
    while True:
        m = np.eye(n) + spread * rng.standard_normal((n, n))
        det = float(np.linalg.det(m))
        if det > 0.2:
            return BasePoint.from_matrix(m / det ** (1.0 / n))


@dataclass(frozen=True)
class SingularityCheck:
    passed: bool
    worst: float
    samples: int


def rotation_minus_identity_singular(
    n: int, samples: int = 200, seed: int = 0, tol: float = 1e-10
) -> SingularityCheck:
    """Self-test: det(k - 1) = 0 for sampled rotations k, odd degree only.

    In even degree the property genuinely fails (rotation by pi already
    has det(k - 1) = 4 in degree 2), so even n is rejected.
    """
    if n % 2 == 0:
        raise ValueError("property holds only in odd degree")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        k = random_rotation(n, rng)
        worst = max(worst, abs(float(np.linalg.det(k - np.eye(n)))))
    return SingularityCheck(passed=worst <= tol, worst=worst, samples=samples)
