"""Similarity of a rotational dilation matrix to a rotation.

Builds ``A = sqrt(det A) * Q @ R @ inv(Q)`` with ``Q`` symmetric positive
definite (normalized to ``det Q = 1``) and ``R`` a rotation.  The route is the
constructive one: eigenvector ``x`` of ``A``, Gram matrix ``T T^*`` with
``T = [x | conj(x)]``, its real SPD square root, then ``R = Q^-1 (A/sqrt det) Q``.
All steps are 2x2 closed forms; no general eigensolver is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix2 import IntMatrix2, classify_angle, require_rotational

__all__ = [
    "ComplexEigenpair",
    "Decomposition",
    "ConsistencyError",
    "decompose",
    "eigenpair",
    "gram_q2",
    "signed_angle",
    "sqrt_spd",
]

RESIDUAL_GATE = 1e-8


class ConsistencyError(ArithmeticError):
    """A decomposition residual blew past ``RESIDUAL_GATE``. Indicates a numerics bug."""


@dataclass(frozen=True)
class ComplexEigenpair:
    """Eigenvalue of ``A / sqrt(det A)`` with positive imaginary part, and a unit eigenvector."""

    lam: complex
    x: np.ndarray

    @property
    def conjugate(self) -> ComplexEigenpair:
        return ComplexEigenpair(self.lam.conjugate(), np.conj(self.x))

    @property
    def T(self) -> np.ndarray:
        return np.column_stack([self.x, np.conj(self.x)])


@dataclass(frozen=True)
class Decomposition:
    A: IntMatrix2
    Q: np.ndarray
    Q_inv: np.ndarray
    R: np.ndarray
    theta_signed: float
    residual_similarity: float
    residual_orthogonality: float

    @property
    def scale(self) -> float:
        return math.sqrt(self.A.det)

    def reconstruct(self) -> np.ndarray:
        return self.scale * self.Q @ self.R @ self.Q_inv


def eigenpair(A: IntMatrix2) -> ComplexEigenpair:
    require_rotational(A)
    tau, delta = A.trace, A.det
    root = math.sqrt(delta)
    lam = complex(tau, math.sqrt(4 * delta - tau * tau)) / (2 * root)
    mu = root * lam  # eigenvalue of A itself
    # b == c == 0 would force (a - d)^2 < 0, so one branch is always available.
    if A.b != 0:
        x = np.array([A.b, mu - A.a], dtype=complex)
    else:
        x = np.array([mu - A.d, A.c], dtype=complex)
    return ComplexEigenpair(lam, x / np.linalg.norm(x))


def gram_q2(pair: ComplexEigenpair) -> np.ndarray:
    """``T T^*`` for ``T = [x | conj(x)]``; real because the columns are conjugates."""
    x1, x2 = pair.x
    off = (x1 * np.conj(x2)).real
    return 2.0 * np.array([[abs(x1) ** 2, off], [off, abs(x2) ** 2]])


def sqrt_spd(M: np.ndarray) -> np.ndarray:
    """Principal square root of a symmetric positive-definite 2x2 matrix.

    Uses ``(M + s I) / sqrt(tr M + 2 s)`` with ``s = sqrt(det M)``.
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {M.shape}")
    if M[0, 1] != M[1, 0]:
        raise ValueError(f"matrix is not symmetric: M12={M[0, 1]!r} != M21={M[1, 0]!r}")
    if not M[0, 0] > 0:
        raise ValueError(f"matrix is not positive definite: M11={M[0, 0]!r} <= 0")
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if not det > 0:
        raise ValueError(f"matrix is not positive definite: det={det!r} <= 0")
    s = math.sqrt(det)
    t = math.sqrt(M[0, 0] + M[1, 1] + 2.0 * s)
    S = (M + s * np.eye(2)) / t
    S[1, 0] = S[0, 1]
    return S


def _inv2(M: np.ndarray) -> np.ndarray:
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / det


def signed_angle(d: Decomposition | np.ndarray) -> float:
    """Rotation angle of ``R`` in ``(-pi, pi]``."""
    R = d.R if isinstance(d, Decomposition) else np.asarray(d)
    return math.atan2(R[1, 0], R[0, 0])


def decompose(A: IntMatrix2) -> Decomposition:
    require_rotational(A)
    Q = sqrt_spd(gram_q2(eigenpair(A)))
    Q = Q / math.sqrt(Q[0, 0] * Q[1, 1] - Q[0, 1] * Q[0, 1])
    Q_inv = _inv2(Q)
    Q_inv[1, 0] = Q_inv[0, 1]
    scale = math.sqrt(A.det)
    Af = A.to_array()
    R = Q_inv @ (Af / scale) @ Q
    theta = signed_angle(R)

    res_sim = float(np.max(np.abs(Af - scale * Q @ R @ Q_inv)))
    res_orth = float(np.max(np.abs(R @ R.T - np.eye(2))))
    theta_abs = classify_angle(A).theta_abs
    res_angle = abs(abs(theta) - theta_abs)
    worst = max(res_sim / scale, res_orth, res_angle)
    if worst > RESIDUAL_GATE:
        raise ConsistencyError(
            f"decomposition of {A} inconsistent: similarity={res_sim:.3g}, "
            f"orthogonality={res_orth:.3g}, angle={res_angle:.3g}"
        )
    return Decomposition(A, Q, Q_inv, R, theta, res_sim, res_orth)
