"""Exact arithmetic and angle classification for 2x2 integer dilation matrices.

Everything here is decided with integer comparisons on the trace ``tau`` and
determinant ``delta``; floating point only enters when ``theta_abs`` is
evaluated for display.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

__all__ = [
    "AngleClass",
    "AngleKind",
    "GateError",
    "IntMatrix2",
    "TableRow",
    "angle_table",
    "classify_angle",
    "cos_theta_radical",
    "enumerate_matrices",
    "is_commensurable",
    "is_rotational",
    "require_dilation",
    "require_rotational",
    "rotation_matrix",
    "trace_det",
]


class GateError(ValueError):
    """Raised when an operation needs a rotational matrix and gets something else."""


@dataclass(frozen=True)
class IntMatrix2:
    """Row-major integer matrix ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"entry {name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @classmethod
    def from_rows(cls, rows) -> IntMatrix2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def companion(cls, tau: int, delta: int) -> IntMatrix2:
        """A matrix with the given trace and determinant."""
        return cls(0, -delta, 1, tau)

    @classmethod
    def parse(cls, text: str) -> IntMatrix2:
        """Parse ``"a,b;c,d"``. Raises ValueError naming the bad token."""
        rows = text.strip().split(";")
        if len(rows) != 2:
            raise ValueError(f"expected two rows separated by ';', got {text!r}")
        entries = []
        for row in rows:
            tokens = row.split(",")
            if len(tokens) != 2:
                raise ValueError(f"expected two entries in row {row!r}")
            for token in tokens:
                try:
                    entries.append(int(token.strip()))
                except ValueError:
                    raise ValueError(f"not an integer: {token.strip()!r}") from None
        return cls(*entries)

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def transpose(self) -> IntMatrix2:
        return IntMatrix2(self.a, self.c, self.b, self.d)

    def adjugate(self) -> IntMatrix2:
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: IntMatrix2) -> IntMatrix2:
        if not isinstance(other, IntMatrix2):
            return NotImplemented
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __pow__(self, n: int) -> IntMatrix2:
        if n < 0:
            raise ValueError("negative powers are not integer matrices; use adjugate()")
        result, base = IntMatrix2(1, 0, 0, 1), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def to_array(self, dtype=float) -> np.ndarray:
        return np.array(self.rows, dtype=dtype)

    def __str__(self) -> str:
        return f"{self.a},{self.b};{self.c},{self.d}"


def trace_det(A: IntMatrix2) -> tuple[int, int]:
    return A.trace, A.det


def is_rotational(A: IntMatrix2) -> bool:
    """True iff ``det A > 0`` and ``(tr A)^2 < 4 det A``."""
    tau, delta = trace_det(A)
    return delta > 0 and tau * tau < 4 * delta


def require_rotational(A: IntMatrix2) -> None:
    tau, delta = trace_det(A)
    if delta <= 0:
        raise GateError(f"matrix {A} is not rotational: det A = {delta} is not > 0")
    if tau * tau >= 4 * delta:
        raise GateError(
            f"matrix {A} is not rotational: (tr A)^2 = {tau * tau} is not < 4 det A = {4 * delta}"
        )


def require_dilation(A: IntMatrix2) -> None:
    """Rotational and strictly expanding, i.e. ``det A >= 2``."""
    require_rotational(A)
    if A.det < 2:
        raise GateError(f"matrix {A} does not expand: det A = {A.det}, refinement needs det A >= 2")


class AngleKind(enum.Enum):
    SPECIAL = "special"
    INCOMMENSURABLE = "incommensurable"
    DEGENERATE = "degenerate"


# (multiple of delta equal to tau^2, label for tau >= 0, label for tau < 0)
_SPECIAL = {
    0: ("pi/2", "pi/2"),
    1: ("pi/3", "2pi/3"),
    2: ("pi/4", "3pi/4"),
    3: ("pi/6", "5pi/6"),
    4: ("0", "pi"),
}

_COMMENSURABLE_COS2 = frozenset(Fraction(n, 2) for n in (-2, -1, 0, 1, 2))


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == s*s*r`` and ``r`` square-free."""
    s, r, p = 1, n, 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            s *= p
        p += 1
    return s, r


def cos_theta_radical(tau: int, delta: int) -> str:
    """``tau / (2 sqrt(delta))`` as a reduced radical, e.g. ``3√5/10``."""
    if delta <= 0:
        raise ValueError("radical form needs delta > 0")
    if tau == 0:
        return "0"
    s, r = _squarefree_split(delta)
    # tau / (2 s sqrt(r)) = tau sqrt(r) / (2 s r)
    q = Fraction(tau, 2 * s * r)
    sign = "-" if q < 0 else ""
    num, den = abs(q.numerator), q.denominator
    if r == 1:
        body = str(num)
    else:
        body = ("" if num == 1 else str(num)) + f"√{r}"
    return sign + body + ("" if den == 1 else f"/{den}")


@dataclass(frozen=True)
class AngleClass:
    """Exact classification of the rotation angle of ``A / sqrt(det A)``.

    ``theta_abs`` is the magnitude only; the direction of rotation is not
    recoverable from (tau, delta) and is computed by ``similarity.decompose``.
    """

    kind: AngleKind
    tau: int
    delta: int
    pi_fraction: str | None = None
    cos_2theta: Fraction | None = None
    theta_abs: float | None = None
    note: str | None = field(default=None, compare=False)

    @property
    def cos_theta(self) -> tuple[int, int]:
        return (self.tau, self.delta)

    @property
    def cos_theta_radical(self) -> str | None:
        return cos_theta_radical(self.tau, self.delta) if self.delta > 0 else None

    @property
    def commensurable(self) -> bool | None:
        if self.kind is AngleKind.SPECIAL:
            return True
        if self.kind is AngleKind.INCOMMENSURABLE:
            return False
        return True if self.pi_fraction is not None else None

    @property
    def exact_label(self) -> str:
        """Angle as in the determinant/trace table: ``±pi/4``, ``±arccos(√2/4)``, ``0``."""
        if self.pi_fraction is not None:
            if self.pi_fraction in ("0", "pi"):
                return self.pi_fraction
            return "±" + self.pi_fraction
        if self.kind is AngleKind.INCOMMENSURABLE:
            return f"±arccos({self.cos_theta_radical})"
        return "-"


def classify_angle(A: IntMatrix2) -> AngleClass:
    tau, delta = trace_det(A)
    return _classify(tau, delta)


def _classify(tau: int, delta: int) -> AngleClass:
    if delta <= 0:
        return AngleClass(
            AngleKind.DEGENERATE, tau, delta,
            note=f"det A = {delta} <= 0: no isotropic rotation",
        )
    t2 = tau * tau
    cos2 = Fraction(t2 - 2 * delta, 2 * delta)
    theta = math.acos(max(-1.0, min(1.0, tau / (2.0 * math.sqrt(delta)))))
    if t2 > 4 * delta:
        return AngleClass(
            AngleKind.DEGENERATE, tau, delta, cos_2theta=cos2,
            note=f"(tr A)^2 = {t2} > 4 det A: real eigenvalues of distinct modulus",
        )
    if t2 % delta == 0 and t2 // delta in _SPECIAL:
        multiple = t2 // delta
        label = _SPECIAL[multiple][0 if tau >= 0 else 1]
        exact = {"0": 0.0, "pi": math.pi}.get(label, theta)
        if multiple == 4:
            return AngleClass(
                AngleKind.DEGENERATE, tau, delta, pi_fraction=label, cos_2theta=cos2,
                theta_abs=exact,
                note="(tr A)^2 = 4 det A: repeated real eigenvalue",
            )
        return AngleClass(AngleKind.SPECIAL, tau, delta, label, cos2, theta)
    return AngleClass(AngleKind.INCOMMENSURABLE, tau, delta, None, cos2, theta)


def is_commensurable(A: IntMatrix2) -> bool:
    """Whether the rotation angle is a rational multiple of pi.

    By Niven's theorem, for rational ``cos 2theta`` this holds exactly when
    ``cos 2theta`` lies in ``{0, ±1/2, ±1}``.
    """
    require_rotational(A)
    tau, delta = trace_det(A)
    return Fraction(tau * tau - 2 * delta, 2 * delta) in _COMMENSURABLE_COS2


def rotation_matrix(tau: int, delta: int, sign: int = 1) -> np.ndarray:
    """Rotation with ``cos = tau/(2 sqrt delta)`` and ``sin = sign*sqrt(4 delta - tau^2)/(2 sqrt delta)``."""
    if delta <= 0 or tau * tau > 4 * delta:
        raise GateError(f"no rotation for tau={tau}, delta={delta}")
    scale = 2.0 * math.sqrt(delta)
    c = tau / scale
    s = math.copysign(math.sqrt(4 * delta - tau * tau) / scale, sign)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class TableRow:
    delta: int
    tau: int
    angle: AngleClass

    @property
    def applicable(self) -> bool:
        return self.tau * self.tau <= 4 * self.delta

    @property
    def kind_label(self) -> str:
        return self.angle.kind.value if self.applicable else "inapplicable"

    @property
    def exact_label(self) -> str:
        return self.angle.exact_label if self.applicable else "-"


def angle_table(det_max: int, trace_max: int) -> list[TableRow]:
    if det_max < 1 or trace_max < 0:
        raise ValueError("need det_max >= 1 and trace_max >= 0")
    return [
        TableRow(delta, tau, _classify(tau, delta))
        for delta in range(1, det_max + 1)
        for tau in range(0, trace_max + 1)
    ]


def enumerate_matrices(delta: int, tau: int, bound: int) -> Iterator[IntMatrix2]:
    """Integer matrices with entries in ``[-bound, bound]``, given det and trace.

    Yielded in lexicographic order of ``(a, b, c, d)``; ``d`` is fixed by ``a``.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    span = range(-bound, bound + 1)
    for a in span:
        d = tau - a
        if abs(d) > bound:
            continue
        for b in span:
            for c in span:
                if a * d - b * c == delta:
                    yield IntMatrix2(a, b, c, d)
