"""Masks, Fourier-domain infinite products and the two-angle identity.

Mask convention: ``m0(xi) = det(A)^(-1/2) * sum_k h_k exp(-i k.xi)``, so that
``sum_k h_k = sqrt(det A)`` gives ``m0(0) = 1``.  Numerically the divisor is
the stored coefficient sum, which matches ``sqrt(det A)`` to 1e-9 on load.
The scaling function is represented through
``phi_hat(xi) = prod_{j>=1} m0(B^j xi)`` with ``B = (A^T)^-1`` and
``phi_hat(0) = 1``.

Two-angle identity checked by ``verify_two_angle`` (``theta`` = signed angle of
``R``, ``R_t`` = rotation by ``t``)::

    phi_hat(Q^-1 R_{-j' theta} Q xi)
        = prod_{j=1..j'} m0(det^(-j/2) Q^-1 R^(j-j') Q xi) * phi_hat(det^(-j'/2) xi)

This is what iterating the two-scale relation j' times yields.  The printed
form with ``R^j`` inside the product describes the same set of angles with
the opposite direction of rotation; ``CONVENTION`` labels which one is used.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .matrix2 import IntMatrix2, require_dilation, require_rotational
from .similarity import decompose

__all__ = [
    "CONVENTION",
    "GridSpec",
    "GridTarget",
    "Mask",
    "MaskFileError",
    "Orbit",
    "grid_nodes",
    "mask_eval",
    "orbit_angles",
    "phi_hat",
    "power_identity_residual",
    "render_grid",
    "verify_two_angle",
]

CONVENTION = "R^(j-j'), theta_rot = -j'*theta_signed"
NORMALIZATION_TOL = 1e-9
TWO_PI = 2.0 * math.pi


class MaskFileError(ValueError):
    """Invalid mask document. ``path`` is a JSON path like ``$.coeffs[1].k``."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Mask:
    """Finitely supported refinement coefficients ``h_k`` on Z^2."""

    coeffs: dict
    delta: int

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not any(h != 0 for h in self.coeffs.values()):
            raise ValueError("mask needs at least one nonzero coefficient")
        total = sum(self.coeffs.values())
        if abs(total - math.sqrt(self.delta)) > NORMALIZATION_TOL:
            raise ValueError(
                f"coefficients sum to {total!r}, expected sqrt({self.delta}) = {math.sqrt(self.delta)!r}"
            )
        keys = sorted(self.coeffs)
        object.__setattr__(self, "_k", np.array(keys, dtype=float).reshape(-1, 2))
        h = np.array([self.coeffs[k] for k in keys], dtype=float)
        object.__setattr__(self, "_h", h)
        # equals sqrt(delta) to the validated tolerance; computed the way
        # mask_eval sums at xi = 0 so that m0(0) == 1 exactly
        object.__setattr__(self, "_norm", np.ones(len(h)) @ h)

    @property
    def support(self) -> np.ndarray:
        return self._k

    @property
    def values(self) -> np.ndarray:
        return self._h

    @property
    def centroid(self) -> np.ndarray:
        """``sum h_k k / sum h_k``; the first-order phase slope of ``m0`` at 0."""
        return self._h @ self._k / self._h.sum()

    @classmethod
    def from_json(cls, doc) -> Mask:
        if not isinstance(doc, dict):
            raise MaskFileError("$", "expected an object")
        delta = doc.get("delta")
        if isinstance(delta, bool) or not isinstance(delta, int) or delta <= 0:
            raise MaskFileError("$.delta", f"expected a positive integer, got {delta!r}")
        entries = doc.get("coeffs")
        if not isinstance(entries, list) or not entries:
            raise MaskFileError("$.coeffs", "expected a non-empty array")
        coeffs = {}
        for i, entry in enumerate(entries):
            where = f"$.coeffs[{i}]"
            if not isinstance(entry, dict):
                raise MaskFileError(where, "expected an object")
            k = entry.get("k")
            if (
                not isinstance(k, list) or len(k) != 2
                or any(isinstance(v, bool) or not isinstance(v, int) for v in k)
            ):
                raise MaskFileError(where + ".k", f"expected two integers, got {k!r}")
            h = entry.get("h")
            if isinstance(h, bool) or not isinstance(h, (int, float)) or not math.isfinite(h):
                raise MaskFileError(where + ".h", f"expected a finite number, got {h!r}")
            key = (k[0], k[1])
            if key in coeffs:
                raise MaskFileError(where + ".k", f"duplicate index {list(key)}")
            coeffs[key] = float(h)
        total = sum(coeffs.values())
        if abs(total - math.sqrt(delta)) > NORMALIZATION_TOL:
            raise MaskFileError(
                "$.coeffs",
                f"coefficients sum to {total!r}, expected sqrt({delta}) = {math.sqrt(delta)!r}",
            )
        return cls(coeffs, delta)

    @classmethod
    def load(cls, path) -> Mask:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise MaskFileError("$", f"cannot read {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise MaskFileError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
        return cls.from_json(doc)

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "coeffs": [{"k": list(k), "h": h} for k, h in sorted(self.coeffs.items())],
        }


def mask_eval(mask: Mask, xi) -> np.ndarray:
    """``m0(xi)`` for a point or an array of points with trailing axis 2."""
    xi = np.asarray(xi, dtype=float)
    phase = xi @ mask.support.T
    return np.exp(-1j * phase) @ mask.values / mask._norm


def _contraction(A: IntMatrix2) -> np.ndarray:
    # (A^T)^-1 = adj(A^T) / det A; entries are exact integers before the division
    return A.transpose().adjugate().to_array() / A.det


def phi_hat(
    mask: Mask,
    A: IntMatrix2,
    xi,
    depth: int,
    *,
    tail_correction: bool = False,
    return_tail: bool = False,
):
    """Truncated product ``prod_{j=1..depth} m0(B^j xi)``, ``B = (A^T)^-1``.

    With ``tail_correction`` the omitted factors ``j > depth`` are replaced by
    their first-order approximation ``exp(-i c . sum_{j>depth} B^j xi)``, where
    ``c`` is the mask centroid and the geometric sum is
    ``B^(depth+1) (I - B)^-1 xi``.  This removes the O(det^(-depth/2)) phase
    error of the plain product and leaves an O(det^(-depth)) remainder; the
    modulus is unchanged.

    With ``return_tail`` also returns ``|m0(B^depth xi) - 1|`` per point.
    """
    require_dilation(A)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    B = _contraction(A)
    eta = np.asarray(xi, dtype=float)
    value = np.ones(eta.shape[:-1], dtype=complex)
    for _ in range(depth):
        eta = eta @ B.T
        factor = mask_eval(mask, eta)
        value = value * factor
    if tail_correction:
        rest = eta @ np.linalg.solve(np.eye(2) - B, B).T
        value = value * np.exp(-1j * (rest @ mask.centroid))
    if return_tail:
        return value, np.abs(factor - 1.0)
    return value


@dataclass(frozen=True)
class Orbit:
    theta: float
    angles: np.ndarray

    def sorted_gaps(self) -> np.ndarray:
        """Circular gaps between consecutive sorted angles."""
        s = np.sort(self.angles)
        return np.diff(np.append(s, s[0] + TWO_PI))


def orbit_angles(theta: float, N: int) -> Orbit:
    """``j * theta mod 2 pi`` for ``j = 1..N``, reduced into ``[0, 2 pi)``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    angles = np.mod(np.arange(1, N + 1) * theta, TWO_PI)
    angles[angles >= TWO_PI] = 0.0
    return Orbit(theta, angles)


def _power_gap(A: IntMatrix2, jprime: int, d) -> float:
    adj_pow = A.transpose().adjugate() ** jprime
    exact = adj_pow.to_array() / float(A.det) ** jprime
    Rj = np.linalg.matrix_power(d.R, jprime)
    via_rotation = float(A.det) ** (-jprime / 2) * d.Q_inv @ Rj @ d.Q
    return float(np.max(np.abs(exact - via_rotation)))


def power_identity_residual(A: IntMatrix2, jprime: int) -> float:
    """``||(A^T)^-j' - det^(-j'/2) Q^-1 R^j' Q||_inf``; left side from exact integer powers."""
    require_rotational(A)
    if jprime < 1:
        raise ValueError("j' must be >= 1")
    return _power_gap(A, jprime, decompose(A))


def _rotation(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


def verify_two_angle(
    mask: Mask,
    A: IntMatrix2,
    jprime: int,
    samples: int,
    seed: int,
    depth: int,
    *,
    points=None,
    tail_correction: bool = True,
) -> float:
    """Max ``|LHS - RHS|`` of the two-angle identity over seeded samples.

    Samples are drawn uniformly from ``[-2 pi, 2 pi]^2`` with
    ``numpy.random.default_rng(seed)`` unless ``points`` is given.
    """
    require_dilation(A)
    if jprime < 1 or samples < 1:
        raise ValueError("need j' >= 1 and samples >= 1")
    if points is None:
        rng = np.random.default_rng(seed)
        xi = rng.uniform(-TWO_PI, TWO_PI, size=(samples, 2))
    else:
        xi = np.asarray(points, dtype=float).reshape(-1, 2)

    d = decompose(A)
    delta = float(A.det)
    rot = d.Q_inv @ _rotation(-jprime * d.theta_signed) @ d.Q
    lhs = phi_hat(mask, A, xi @ rot.T, depth, tail_correction=tail_correction)

    rhs = phi_hat(mask, A, delta ** (-jprime / 2) * xi, depth, tail_correction=tail_correction)
    for j in range(1, jprime + 1):
        op = delta ** (-j / 2) * d.Q_inv @ np.linalg.matrix_power(d.R, j - jprime) @ d.Q
        rhs = rhs * mask_eval(mask, xi @ op.T)
    return float(np.max(np.abs(lhs - rhs)))


class GridTarget(enum.Enum):
    FREQUENCY_MAGNITUDE = "freq"
    SPATIAL_RECONSTRUCTION = "spatial"


@dataclass(frozen=True)
class GridSpec:
    n: int
    extent: float
    target: GridTarget = GridTarget.FREQUENCY_MAGNITUDE

    def __post_init__(self) -> None:
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {self.n}")
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent}")


def grid_nodes(grid: GridSpec) -> np.ndarray:
    """1-D node coordinates ``-extent + 2 extent i / n``; node ``n/2`` is 0."""
    return -grid.extent + 2.0 * grid.extent * np.arange(grid.n) / grid.n


def render_grid(mask: Mask, A: IntMatrix2, grid: GridSpec, depth: int) -> np.ndarray:
    """Sample ``phi_hat`` on the frequency grid; row index follows xi_2.

    ``FREQUENCY_MAGNITUDE`` returns ``|phi_hat|``.  ``SPATIAL_RECONSTRUCTION``
    returns the real part of the centered inverse DFT of the sampled
    ``phi_hat``, scaled to approximate ``phi`` on the dual grid.
    """
    require_dilation(A)
    nodes = grid_nodes(grid)
    X1, X2 = np.meshgrid(nodes, nodes)
    xi = np.stack([X1, X2], axis=-1)
    values = phi_hat(mask, A, xi, depth, tail_correction=True)
    if grid.target is GridTarget.FREQUENCY_MAGNITUDE:
        return np.abs(values)
    step = 2.0 * grid.extent / grid.n
    spatial = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(values)))
    return spatial.real * (grid.n * step / TWO_PI) ** 2
