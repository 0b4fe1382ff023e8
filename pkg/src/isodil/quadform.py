"""Invariant quadratic forms and ellipses of rotational dilation matrices.

If ``A = sqrt(det A) Q R Q^-1`` then ``W = Q^-2`` satisfies
``A^T W A = det(A) W``: level sets of ``W`` are ellipses that ``A`` maps onto
dilated copies of themselves.  ``Q^2`` plays the same role for ``A^T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .matrix2 import IntMatrix2, require_rotational
from .similarity import decompose

__all__ = [
    "EllipseGeometry",
    "QuadraticForm",
    "check_invariance",
    "dual_form",
    "ellipse_geometry",
    "ellipse_points",
    "invariant_form",
    "lattice_transform",
    "proportional",
    "rationalize_form",
]

RATIONAL_TOL = 1e-9


@dataclass(frozen=True)
class QuadraticForm:
    """Positive-definite form ``W(x) = m11 x^2 + 2 m12 x y + m22 y^2``."""

    m11: float
    m12: float
    m22: float

    def __post_init__(self) -> None:
        if not (self.m11 > 0 and self.m11 * self.m22 - self.m12 * self.m12 > 0):
            raise ValueError(
                f"form is not positive definite: m11={self.m11!r}, "
                f"det={self.m11 * self.m22 - self.m12 * self.m12!r}"
            )

    @classmethod
    def from_matrix(cls, M) -> QuadraticForm:
        M = np.asarray(M, dtype=float)
        return cls(float(M[0, 0]), float(0.5 * (M[0, 1] + M[1, 0])), float(M[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m12, self.m22]])

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m12

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.m11 * x[..., 0] ** 2 + 2 * self.m12 * x[..., 0] * x[..., 1] + self.m22 * x[..., 1] ** 2

    def inverse(self) -> QuadraticForm:
        det = self.det
        return QuadraticForm(self.m22 / det, -self.m12 / det, self.m11 / det)


@dataclass(frozen=True)
class EllipseGeometry:
    semi_major: float
    semi_minor: float
    orientation: float
    level: float

    @property
    def is_circle(self) -> bool:
        return math.isclose(self.semi_major, self.semi_minor, rel_tol=1e-12)


def invariant_form(A: IntMatrix2) -> QuadraticForm:
    """``Q^-2`` from the det-1 normalized decomposition."""
    d = decompose(A)
    return QuadraticForm.from_matrix(d.Q_inv @ d.Q_inv)


def dual_form(A: IntMatrix2) -> QuadraticForm:
    """``Q^2``, invariant for ``A^T``."""
    d = decompose(A)
    return QuadraticForm.from_matrix(d.Q @ d.Q)


def _entries(W) -> tuple:
    if isinstance(W, QuadraticForm):
        return (W.m11, W.m12, W.m12, W.m22)
    (w11, w12), (w21, w22) = W
    return (w11, w12, w21, w22)


def check_invariance(A: IntMatrix2, W) -> float | Fraction:
    """Relative residual ``||A^T W A - det(A) W||_inf / ||W||_inf``.

    ``W`` may be a QuadraticForm or any 2x2 nested sequence; int and Fraction
    entries are kept exact, so an exactly invariant rational form gives ``Fraction(0)``.
    """
    w11, w12, w21, w22 = _entries(W)
    a, b, c, d = A.entries
    delta = A.det
    # W A
    p11, p12 = w11 * a + w12 * c, w11 * b + w12 * d
    p21, p22 = w21 * a + w22 * c, w21 * b + w22 * d
    # A^T (W A)
    r11, r12 = a * p11 + c * p21, a * p12 + c * p22
    r21, r22 = b * p11 + d * p21, b * p12 + d * p22
    diff = max(
        abs(r11 - delta * w11), abs(r12 - delta * w12),
        abs(r21 - delta * w21), abs(r22 - delta * w22),
    )
    norm = max(abs(w11), abs(w12), abs(w21), abs(w22))
    if isinstance(diff, (int, Fraction)) and isinstance(norm, (int, Fraction)):
        return Fraction(diff) / norm
    return diff / norm


def proportional(W1, W2, tol: float = RATIONAL_TOL) -> bool:
    """Equality up to a positive scalar, after scaling the largest entry to 1."""

    def normalized(W):
        M = np.array(_entries(W), dtype=float)
        return M / M[np.argmax(np.abs(M))]

    M1, M2 = normalized(W1), normalized(W2)
    return bool(np.max(np.abs(M1 - M2)) <= tol)


def rationalize_form(W: QuadraticForm, max_den: int) -> np.ndarray | None:
    """Smallest positive integer matrix proportional to ``W``, or None.

    ``W`` is scaled to ``m11 = 1`` and the other two entries are recovered by
    continued-fraction reconstruction with denominator at most ``max_den``.
    Returns None when either entry misses its rational by more than 1e-9.
    """
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    scaled = (1.0, W.m12 / W.m11, W.m22 / W.m11)
    fracs = []
    for value in scaled:
        frac = Fraction(value).limit_denominator(max_den)
        if abs(float(frac) - value) > RATIONAL_TOL:
            return None
        fracs.append(frac)
    lcm = reduce(math.lcm, (f.denominator for f in fracs))
    ints = [int(f * lcm) for f in fracs]
    g = reduce(math.gcd, ints)
    m11, m12, m22 = (v // g for v in ints)
    return np.array([[m11, m12], [m12, m22]], dtype=np.int64)


def ellipse_geometry(W: QuadraticForm, C: float) -> EllipseGeometry:
    """Semi-axes and major-axis orientation of ``{x : W(x) = C}``."""
    if not C > 0:
        raise ValueError(f"level must be positive, got {C!r}")
    half_tr = 0.5 * (W.m11 + W.m22)
    half_gap = math.hypot(0.5 * (W.m11 - W.m22), W.m12)
    lam_small = half_tr - half_gap
    lam_large = half_tr + half_gap
    if half_gap <= 1e-12 * half_tr:
        orientation = 0.0
    else:
        # eigenvector of the smaller eigenvalue carries the major axis
        orientation = 0.5 * math.atan2(-2.0 * W.m12, W.m22 - W.m11)
        orientation %= math.pi
        if orientation >= math.pi:
            orientation = 0.0
    return EllipseGeometry(math.sqrt(C / lam_small), math.sqrt(C / lam_large), orientation, C)


def ellipse_points(W: QuadraticForm, C: float, n: int) -> np.ndarray:
    """``n`` points on ``W(x) = C``, evenly spaced in the eigen-angle parametrization."""
    geom = ellipse_geometry(W, C)
    t = 2 * math.pi * np.arange(n) / n
    u = np.stack([geom.semi_major * np.cos(t), geom.semi_minor * np.sin(t)], axis=-1)
    c, s = math.cos(geom.orientation), math.sin(geom.orientation)
    return u @ np.array([[c, s], [-s, c]])


def lattice_transform(A: IntMatrix2) -> tuple[float, np.ndarray]:
    """Basis ``Q`` of the lattice ``Q Z^2`` in which the invariant ellipse is a circle.

    Returns ``(residual, Q)`` where residual is ``||Q^T Q^-2 Q - I||_inf``.
    """
    require_rotational(A)
    d = decompose(A)
    W = d.Q_inv @ d.Q_inv
    residual = float(np.max(np.abs(d.Q.T @ W @ d.Q - np.eye(2))))
    return residual, d.Q
